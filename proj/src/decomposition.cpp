#include "subw/decomposition.hpp"

#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace subw {

int TreeDecomposition::add_node(int parent_node, const VertexSet& bag) {
  if (parent_node < -1 || parent_node >= size()) throw DomainError("parent node out of range");
  parent.push_back(parent_node);
  bags.push_back(bag);
  return size() - 1;
}

TreeDecomposition TreeDecomposition::single_bag(const VertexSet& bag) {
  TreeDecomposition t;
  t.add_node(-1, bag);
  return t;
}

std::string TreeDecomposition::to_text(const std::vector<std::string>& names) const {
  std::ostringstream out;
  for (int i = 0; i < size(); ++i) {
    out << "node " << i << " parent ";
    if (parent[i] < 0) {
      out << '-';
    } else {
      out << parent[i];
    }
    out << " bag";
    bags[i].for_each([&](int v) { out << ' ' << names.at(v); });
    out << '\n';
  }
  return out.str();
}

TreeDecomposition TreeDecomposition::parse(std::string_view text, const std::vector<std::string>& names) {
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(names.size()); ++i) index.emplace(names[i], i);
  struct Line {
    int id;
    int parent;
    VertexSet bag;
  };
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto fail = [&](const std::string& why) {
      throw DomainError("decomposition line " + std::to_string(lineno) + ": " + why);
    };
    Line line{};
    std::string parent_tok, bag_kw;
    if (kw != "node" || !(ls >> line.id) || !(ls >> kw) || kw != "parent" || !(ls >> parent_tok) ||
        !(ls >> bag_kw) || bag_kw != "bag") {
      fail("expected `node <id> parent <id|-> bag ...`");
    }
    if (parent_tok == "-") {
      line.parent = -1;
    } else {
      try {
        std::size_t used = 0;
        line.parent = std::stoi(parent_tok, &used);
        if (used != parent_tok.size() || line.parent < 0) fail("bad parent `" + parent_tok + "`");
      } catch (const std::logic_error&) {
        fail("bad parent `" + parent_tok + "`");
      }
    }
    std::string v;
    while (ls >> v) {
      auto it = index.find(v);
      if (it == index.end()) fail("unknown vertex `" + v + "`");
      line.bag.insert(it->second);
    }
    lines.push_back(std::move(line));
  }
  // ids must be 0..n-1 in any order
  TreeDecomposition t;
  const int n = static_cast<int>(lines.size());
  t.parent.assign(n, -1);
  t.bags.assign(n, VertexSet{});
  std::vector<bool> seen(n, false);
  for (const auto& line : lines) {
    if (line.id < 0 || line.id >= n || seen[line.id]) {
      throw DomainError("decomposition node ids must be 0.." + std::to_string(n - 1) + " without repeats");
    }
    if (line.parent >= n) throw DomainError("node " + std::to_string(line.id) + " has unknown parent");
    seen[line.id] = true;
    t.parent[line.id] = line.parent;
    t.bags[line.id] = line.bag;
  }
  return t;
}

namespace {

std::string format_names(const std::vector<std::string>& names, const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](int v) {
    if (!first) out += ' ';
    first = false;
    out += names[v];
  });
  return out + "}";
}

ValidationReport validate_impl(const std::vector<std::string>& names, const VertexSet& vertices,
                               const std::vector<VertexSet>& edges, const TreeDecomposition& t) {
  auto fail = [](std::string why) { return ValidationReport{false, std::move(why)}; };
  const int n = t.size();
  if (n == 0) return fail("decomposition has no nodes");
  if (static_cast<int>(t.parent.size()) != n) return fail("parent and bag lists differ in length");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    if (t.parent[i] == -1) {
      ++roots;
    } else if (t.parent[i] < 0 || t.parent[i] >= n || t.parent[i] == i) {
      return fail("node " + std::to_string(i) + " has an invalid parent");
    }
  }
  if (roots != 1) return fail("expected exactly one root, found " + std::to_string(roots));
  // every node must reach the root within n steps
  for (int i = 0; i < n; ++i) {
    int cur = i;
    for (int steps = 0; cur != -1; ++steps) {
      if (steps > n) return fail("parent links contain a cycle through node " + std::to_string(i));
      cur = t.parent[cur];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!t.bags[i].is_subset_of(vertices)) {
      return fail("bag of node " + std::to_string(i) + " contains a vertex outside the hypergraph");
    }
  }
  for (const auto& e : edges) {
    bool inside = false;
    for (const auto& bag : t.bags) {
      if (e.is_subset_of(bag)) {
        inside = true;
        break;
      }
    }
    if (!inside) return fail("edge " + format_names(names, e) + " is contained in no bag");
  }
  // occurrence sets are connected iff exactly one occurrence has a parent without v
  bool ok = true;
  std::string why;
  vertices.for_each([&](int v) {
    if (!ok) return;
    int tops = 0;
    for (int i = 0; i < n; ++i) {
      if (t.bags[i].contains(v) && (t.parent[i] < 0 || !t.bags[t.parent[i]].contains(v))) ++tops;
    }
    if (tops > 1) {
      ok = false;
      why = "nodes containing " + names[v] + " are not connected";
    }
  });
  if (!ok) return fail(why);
  return {};
}

}  // namespace

ValidationReport validate_decomposition(const Hypergraph& h, const TreeDecomposition& t) {
  return validate_impl(h.names(), h.vertices(), h.edges(), t);
}

ValidationReport validate_decomposition(const Graph& g, const TreeDecomposition& t) {
  std::vector<VertexSet> edges;
  for (auto [u, v] : g.edge_list()) edges.push_back(VertexSet{u, v});
  return validate_impl(g.names, g.vertices, edges, t);
}

bool is_potential_maximal_clique(const Graph& g, const VertexSet& omega) {
  if (omega.empty() || !omega.is_subset_of(g.vertices)) return false;
  const auto comps = g.components(g.vertices - omega);
  std::vector<VertexSet> borders;
  borders.reserve(comps.size());
  for (const auto& c : comps) {
    VertexSet border = g.neighbourhood(c) & omega;
    if (border == omega) return false;  // full component
    borders.push_back(std::move(border));
  }
  const std::vector<int> elems = omega.elements();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      if (g.adjacent(elems[i], elems[j])) continue;
      bool filled = false;
      for (const auto& border : borders) {
        if (border.contains(elems[i]) && border.contains(elems[j])) {
          filled = true;
          break;
        }
      }
      if (!filled) return false;
    }
  }
  return true;
}

std::vector<VertexSet> enumerate_potential_maximal_cliques(const Graph& g, const PmcOptions& options) {
  if (g.vertices.size() > options.max_vertices) {
    throw ResourceError("potential maximal clique enumeration limited to " + std::to_string(options.max_vertices) +
                        " vertices");
  }
  std::vector<VertexSet> out;
  detail::for_each_nonempty_subset(g.vertices, [&](const VertexSet& omega) {
    if (is_potential_maximal_clique(g, omega)) out.push_back(omega);
  });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Thread-safe memo wrapped around a bag cost.
template <class Value>
BagCost<Value> memoize(std::function<Value(const VertexSet&)> f) {
  struct State {
    std::mutex mutex;
    std::unordered_map<VertexSet, Value, VertexSetHash> cache;
  };
  auto state = std::make_shared<State>();
  return [state, f = std::move(f)](const VertexSet& s) -> Value {
    {
      std::lock_guard lock(state->mutex);
      auto it = state->cache.find(s);
      if (it != state->cache.end()) return it->second;
    }
    Value v = f(s);
    std::lock_guard lock(state->mutex);
    state->cache.emplace(s, v);
    return v;
  };
}

}  // namespace

BagCost<int> rho_cost(const Hypergraph& h) {
  return memoize<int>([h](const VertexSet& s) { return edge_cover_number(h, s); });
}

BagCost<Rational> rho_star_cost(const Hypergraph& h) {
  return memoize<Rational>([h](const VertexSet& s) { return fractional_edge_cover_number(h, s); });
}

WidthResult<int> treewidth(const Hypergraph& h, const WidthOptions& options) {
  return min_f_width<int>(h, [](const VertexSet& s) { return std::max(0, s.size() - 1); }, options);
}

WidthResult<int> generalized_hypertree_width(const Hypergraph& h, const WidthOptions& options) {
  return min_f_width<int>(h, rho_cost(h), options);
}

WidthResult<Rational> fractional_hypertree_width(const Hypergraph& h, const WidthOptions& options) {
  return min_f_width<Rational>(h, rho_star_cost(h), options);
}

WidthResult<Rational> mu_width(const Hypergraph& h, const VertexWeights& mu, const WidthOptions& options) {
  if (static_cast<int>(mu.size()) != h.universe_size()) throw DomainError("weight vector has the wrong length");
  if (!is_fractional_independent_set(h, mu)) throw DomainError("weights are not a fractional independent set");
  return min_f_width<Rational>(h, [&mu](const VertexSet& s) { return total(mu, s); }, options);
}

WidthResult<Rational> b_width(const Hypergraph& h, const BagCost<Rational>& b, const WidthOptions& options) {
  auto cached = memoize<Rational>(b);
  if (cached(VertexSet{}) != 0) throw DomainError("b(empty set) must be 0");
  for (const auto& e : h.edges()) {
    if (cached(e) > 1) throw DomainError("b is not edge-dominated on " + h.format(e));
  }
  if (h.vertex_count() <= options.verify_cap) {
    detail::for_each_nonempty_subset(h.vertices(), [&](const VertexSet& s) {
      if (cached(s) < 0) throw DomainError("b is negative on " + h.format(s));
    });
  }
  BagCost<Rational> checked = [&](const VertexSet& s) {
    Rational v = cached(s);
    if (v < 0) throw DomainError("b is negative on " + h.format(s));
    return v;
  };
  return min_f_width<Rational>(h, checked, options);
}

}  // namespace subw
