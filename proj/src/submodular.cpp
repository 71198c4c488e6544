#include "subw/submodular.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "subw/errors.hpp"

namespace subw {

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::Modular: return "modular";
    case OracleKind::Submodular: return "submodular";
    case OracleKind::Coverage: return "coverage";
    case OracleKind::RhoStar: return "rho-star";
    case OracleKind::Flow: return "flow";
    case OracleKind::Table: return "table";
    case OracleKind::Custom: return "custom";
  }
  return "custom";
}

struct SetFunctionOracle::State {
  Fn f;
  OracleKind kind;
  std::string description;
  mutable std::mutex mutex;
  mutable std::unordered_map<VertexSet, Rational, VertexSetHash> memo;
};

SetFunctionOracle::SetFunctionOracle(Fn f, OracleKind kind, std::string description)
    : state_(std::make_shared<State>()) {
  state_->f = std::move(f);
  state_->kind = kind;
  state_->description = std::move(description);
}

Rational SetFunctionOracle::operator()(const VertexSet& s) const {
  {
    std::lock_guard lock(state_->mutex);
    auto it = state_->memo.find(s);
    if (it != state_->memo.end()) return it->second;
  }
  Rational value = state_->f(s);
  value.canonicalize();
  std::lock_guard lock(state_->mutex);
  state_->memo.emplace(s, value);
  return value;
}

OracleKind SetFunctionOracle::kind() const { return state_->kind; }
const std::string& SetFunctionOracle::description() const { return state_->description; }

std::size_t SetFunctionOracle::evaluations() const {
  std::lock_guard lock(state_->mutex);
  return state_->memo.size();
}

BagCost<Rational> SetFunctionOracle::as_bag_cost() const {
  SetFunctionOracle self = *this;
  return [self](const VertexSet& s) { return self(s); };
}

SetFunctionOracle SetFunctionOracle::modular(VertexWeights weights) {
  return SetFunctionOracle(
      [weights = std::move(weights)](const VertexSet& s) {
        Rational r;
        s.for_each([&](int v) {
          if (v >= static_cast<int>(weights.size())) throw DomainError("modular oracle: vertex without weight");
          r += weights[v];
        });
        return r;
      },
      OracleKind::Modular, "modular");
}

SetFunctionOracle SetFunctionOracle::coverage(std::vector<std::pair<VertexSet, Rational>> sets) {
  return SetFunctionOracle(
      [sets = std::move(sets)](const VertexSet& s) {
        Rational r;
        for (const auto& [t, weight] : sets) {
          if (t.intersects(s)) r += weight;
        }
        return r;
      },
      OracleKind::Coverage, "coverage");
}

SetFunctionOracle SetFunctionOracle::rho_star(const Hypergraph& h) {
  return SetFunctionOracle([h](const VertexSet& s) { return fractional_edge_cover_number(h, s); },
                           OracleKind::RhoStar, "rho-star");
}

SetFunctionOracle SetFunctionOracle::table(std::map<VertexSet, Rational> values) {
  return SetFunctionOracle(
      [values = std::move(values)](const VertexSet& s) {
        auto it = values.find(s);
        if (it == values.end()) throw DomainError("table oracle has no value for the requested set");
        return it->second;
      },
      OracleKind::Table, "table");
}

SetFunctionOracle SetFunctionOracle::parse(std::string_view text, const Hypergraph& h) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string kind;
  std::vector<std::pair<Rational, VertexSet>> rows;
  std::vector<std::vector<int>> sequences;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string first;
    if (!(ls >> first)) continue;
    if (kind.empty()) {
      kind = first;
      if (kind != "modular" && kind != "coverage" && kind != "rho-star" && kind != "flow" && kind != "table") {
        throw DomainError("oracle line " + std::to_string(lineno) + ": unknown kind `" + kind + "`");
      }
      std::string extra;
      if (ls >> extra) throw DomainError("oracle line " + std::to_string(lineno) + ": unexpected `" + extra + "`");
      continue;
    }
    Rational value;
    try {
      value = parse_rational(first);
    } catch (const DomainError& e) {
      throw DomainError("oracle line " + std::to_string(lineno) + ": " + e.what());
    }
    if (sgn(value) < 0) throw DomainError("oracle line " + std::to_string(lineno) + ": negative value");
    VertexSet set;
    std::vector<int> seq;
    std::string name;
    while (ls >> name) {
      int v = h.index_of(name);
      if (!h.vertices().contains(v)) throw DomainError("oracle line " + std::to_string(lineno) + ": `" + name + "` is not a vertex");
      set.insert(v);
      seq.push_back(v);
    }
    rows.emplace_back(value, set);
    sequences.push_back(std::move(seq));
  }
  if (kind.empty()) throw DomainError("oracle text is empty");
  if (kind == "rho-star") {
    if (!rows.empty()) throw DomainError("rho-star oracle takes no rows");
    return rho_star(h);
  }
  if (kind == "modular") {
    VertexWeights weights(h.universe_size());
    for (const auto& [value, set] : rows) {
      if (set.size() != 1) throw DomainError("modular rows are `<weight> <vertex>`");
      weights[set.first()] = value;
    }
    return modular(weights);
  }
  if (kind == "coverage") {
    std::vector<std::pair<VertexSet, Rational>> sets;
    for (const auto& [value, set] : rows) sets.emplace_back(set, value);
    return coverage(sets);
  }
  if (kind == "flow") {
    Flow f;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Path p{sequences[i]};
      if (!is_path(h, p)) throw DomainError("flow row " + std::to_string(i + 1) + " is not a path");
      f.paths.push_back(p);
      f.weights.push_back(rows[i].first);
    }
    if (!respects_capacities(h, f)) throw DomainError("flow exceeds an edge capacity");
    return flow_to_submodular(f);
  }
  std::map<VertexSet, Rational> values;
  for (const auto& [value, set] : rows) {
    if (!values.emplace(set, value).second) throw DomainError("table lists " + h.format(set) + " twice");
  }
  if (h.vertex_count() < 62 && values.size() != (std::size_t{1} << h.vertex_count())) {
    throw DomainError("table must list all " + std::to_string(std::size_t{1} << h.vertex_count()) + " subsets");
  }
  return table(values);
}

SetFunctionOracle SetFunctionOracle::load(const std::string& path, const Hypergraph& h) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open oracle file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), h);
}

PropertyReport check_properties(const SetFunctionOracle& b, const Hypergraph& h, int cap) {
  if (h.vertex_count() > cap) {
    throw ResourceError("property check limited to " + std::to_string(cap) + " vertices");
  }
  PropertyReport report;
  auto note = [&](bool& flag, const std::string& why) {
    if (flag) report.counterexamples.push_back(why);
    flag = false;
  };
  const Rational empty = b(VertexSet{});
  if (empty != 0) note(report.zero_on_empty, "b({}) = " + to_string(empty));
  std::vector<VertexSet> all{VertexSet{}};
  detail::for_each_nonempty_subset(h.vertices(), [&](const VertexSet& s) { all.push_back(s); });
  const std::vector<int> verts = h.vertices().elements();
  for (const auto& s : all) {
    const Rational bs = b(s);
    if (sgn(bs) < 0) note(report.nonnegative, "b(" + h.format(s) + ") = " + to_string(bs) + " < 0");
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const int u = verts[i];
      if (s.contains(u)) continue;
      VertexSet su = s;
      su.insert(u);
      const Rational bsu = b(su);
      if (bsu < bs) note(report.monotone, "b(" + h.format(su) + ") < b(" + h.format(s) + ")");
      for (std::size_t j = i + 1; j < verts.size(); ++j) {
        const int v = verts[j];
        if (s.contains(v)) continue;
        VertexSet sv = s, suv = su;
        sv.insert(v);
        suv.insert(v);
        Rational lhs = bsu + b(sv);
        Rational rhs = b(suv) + bs;
        if (lhs < rhs) {
          note(report.submodular, "b(" + h.format(su) + ") + b(" + h.format(sv) + ") < b(" + h.format(suv) + ") + b(" +
                                      h.format(s) + ")");
        }
      }
    }
  }
  for (const auto& e : h.edges()) {
    Rational be = b(e);
    if (be > 1) note(report.edge_dominated, "b(" + h.format(e) + ") = " + to_string(be) + " > 1");
  }
  return report;
}

namespace {

std::vector<int> positions(const Hypergraph& h, const Ordering& pi) {
  std::vector<int> pos(h.universe_size(), -1);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const int v = pi[i];
    if (v < 0 || v >= h.universe_size() || !h.vertices().contains(v)) throw DomainError("ordering names a non-vertex");
    if (pos[v] != -1) throw DomainError("ordering repeats vertex " + h.name(v));
    pos[v] = static_cast<int>(i);
  }
  return pos;
}

// Neighbours of v inside z that come before v.
VertexSet preceding(const Graph& g, const std::vector<int>& pos, const VertexSet& z, int v) {
  VertexSet out;
  (g.adj[v] & z).for_each([&](int u) {
    if (pos[u] == -1) throw DomainError("ordering is missing a vertex");
    if (pos[u] < pos[v]) out.insert(u);
  });
  return out;
}

Rational marginal_given(const SetFunctionOracle& b, const VertexSet& before, int v) {
  VertexSet with = before;
  with.insert(v);
  Rational r = b(with) - b(before);
  return r;
}

}  // namespace

Rational marginal(const SetFunctionOracle& b, const Hypergraph& h, const Ordering& pi, const VertexSet& z, int v) {
  if (!h.vertices().contains(v)) throw DomainError("marginal: not a vertex");
  const auto pos = positions(h, pi);
  if (pos[v] == -1) throw DomainError("ordering is missing vertex " + h.name(v));
  return marginal_given(b, preceding(primal_graph(h), pos, z, v), v);
}

Rational b_pi(const SetFunctionOracle& b, const Hypergraph& h, const Ordering& pi, const VertexSet& z) {
  const auto pos = positions(h, pi);
  const Graph g = primal_graph(h);
  Rational sum;
  z.for_each([&](int v) {
    if (pos[v] == -1) throw DomainError("ordering is missing vertex " + h.name(v));
    sum += marginal_given(b, preceding(g, pos, z, v), v);
  });
  return sum;
}

BStarResult b_star(const SetFunctionOracle& b, const Hypergraph& h, const VertexSet& z, const BStarOptions& options) {
  if (!z.is_subset_of(h.vertices())) throw DomainError("b*: set is not inside V(H)");
  const std::vector<int> elems = z.elements();
  const int k = static_cast<int>(elems.size());
  if (k > options.max_vertices) {
    throw ResourceError("b* limited to sets of " + std::to_string(options.max_vertices) + " vertices");
  }
  const Graph g = primal_graph(h);
  std::vector<std::uint32_t> nb(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i != j && g.adjacent(elems[i], elems[j])) nb[i] |= 1U << j;
    }
  }
  auto to_set = [&](std::uint32_t mask) {
    VertexSet s;
    for (int i = 0; i < k; ++i) {
      if ((mask >> i) & 1U) s.insert(elems[i]);
    }
    return s;
  };
  // marginal of element i given its earlier neighbours `p` (a subset of nb[i])
  std::vector<std::map<std::uint32_t, Rational>> marg(k);
  auto marginal_of = [&](int i, std::uint32_t p) -> const Rational& {
    auto it = marg[i].find(p);
    if (it != marg[i].end()) return it->second;
    return marg[i].emplace(p, marginal_given(b, to_set(p), elems[i])).first->second;
  };
  const std::uint32_t full = k == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << k) - 1);
  std::vector<Rational> dp(std::size_t{full} + 1);
  std::vector<bool> known(std::size_t{full} + 1, false);
  std::vector<int> last(std::size_t{full} + 1, -1);
  known[0] = true;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (!known[mask]) continue;
    for (int i = 0; i < k; ++i) {
      if ((mask >> i) & 1U) continue;
      const std::uint32_t next = mask | (1U << i);
      Rational cand = dp[mask] + marginal_of(i, nb[i] & mask);
      if (!known[next] || cand < dp[next]) {
        dp[next] = cand;
        known[next] = true;
        last[next] = i;
      }
    }
    if (mask == full) break;
  }
  BStarResult out;
  out.value = dp[full];
  std::vector<int> rev;
  for (std::uint32_t mask = full; mask != 0; mask &= ~(1U << last[mask])) rev.push_back(elems[last[mask]]);
  out.ordering.assign(rev.rbegin(), rev.rend());
  (h.vertices() - z).for_each([&](int v) { out.ordering.push_back(v); });
  return out;
}

BStar::BStar(SetFunctionOracle b, const Hypergraph& h, BStarOptions options)
    : b_(std::move(b)), h_(h), options_(options) {}

const BStarResult& BStar::operator()(const VertexSet& z) {
  auto it = cache_.find(z);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(z, b_star(b_, h_, z, options_)).first->second;
}

VertexWeights independent_set_from_ordering(const SetFunctionOracle& b, const Hypergraph& h, const VertexSet& w,
                                            const Ordering& pi) {
  if (!w.is_subset_of(h.vertices())) throw DomainError("W is not inside V(H)");
  const auto pos = positions(h, pi);
  const Graph g = primal_graph(h);
  VertexWeights mu(h.universe_size());
  w.for_each([&](int v) {
    if (pos[v] == -1) throw DomainError("ordering is missing vertex " + h.name(v));
    mu[v] = marginal_given(b, preceding(g, pos, w, v), v);
  });
  for (const auto& e : h.edges()) {
    if (total(mu, e) > 1) throw InternalError("oracle is not edge-dominated submodular: mu" + h.format(e) + " > 1");
  }
  for (const auto& m : mu) {
    if (sgn(m) < 0) throw InternalError("oracle is not monotone: negative marginal");
  }
  return mu;
}

VertexSet in_neighbour_closure(const Hypergraph& h, const Ordering& order, const VertexSet& s) {
  const auto pos = positions(h, order);
  const Graph g = primal_graph(h);
  VertexSet seen = s;
  std::vector<int> stack = s.elements();
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    g.adj[v].for_each([&](int u) {
      if (pos[u] < pos[v] && !seen.contains(u)) {
        seen.insert(u);
        stack.push_back(u);
      }
    });
  }
  return seen;
}

Rational interval_width(const RoundingState& state, const std::vector<int>& path) {
  Rational lo, hi;
  bool first = true;
  for (int v : path) {
    Rational left = state.d[v] - state.x[v];
    if (first || left < lo) lo = left;
    if (first || state.d[v] > hi) hi = state.d[v];
    first = false;
  }
  Rational width = hi - lo;
  return width;
}

RoundingResult round_fractional_separator(const Hypergraph& h, const VertexSet& x, const VertexSet& y,
                                          const EdgeWeights& s, const SetFunctionOracle& b) {
  if (!x.is_subset_of(h.vertices()) || !y.is_subset_of(h.vertices())) throw DomainError("X and Y must lie in V(H)");
  if (!is_fractional_separator(h, x, y, s)) throw DomainError("input is not a fractional (X,Y)-separator");
  const int n = h.universe_size();
  const Graph g = primal_graph(h);
  RoundingResult out;
  RoundingState& st = out.state;
  out.weight = total(s);
  st.x.assign(n, Rational(0));
  st.d.assign(n, Rational(0));
  st.reachable.assign(n, false);
  st.kappa.assign(n, kInfiniteClass);
  st.offset.assign(n, Rational(0));
  st.c.assign(n, Rational(0));
  h.vertices().for_each([&](int v) {
    Rational load;
    for (int e : h.incident(v)) load += s[e];
    st.x[v] = load < 1 ? load : Rational(1);
  });
  // vertex-weighted Dijkstra from X
  {
    VertexSet done;
    std::vector<bool> tentative(n, false);
    x.for_each([&](int v) {
      st.d[v] = st.x[v];
      tentative[v] = true;
    });
    while (true) {
      int best = -1;
      for (int v = 0; v < n; ++v) {
        if (tentative[v] && !done.contains(v) && (best < 0 || st.d[v] < st.d[best])) best = v;
      }
      if (best < 0) break;
      done.insert(best);
      st.reachable[best] = true;
      g.adj[best].for_each([&](int u) {
        if (done.contains(u)) return;
        Rational cand = st.d[best] + st.x[u];
        if (!tentative[u] || cand < st.d[u]) {
          st.d[u] = cand;
          tentative[u] = true;
        }
      });
    }
  }
  h.vertices().for_each([&](int v) {
    if (sgn(st.x[v]) == 0) return;
    int k = 0;
    Rational h_k(1);  // 2^-k
    while (st.x[v] <= h_k / 2) {
      h_k /= 2;
      ++k;
    }
    st.kappa[v] = k;
    if (st.reachable[v]) {
      Rational period = 2 * h_k;
      Rational q = st.d[v] / period;
      Rational i(floor_of(q));
      st.offset[v] = st.d[v] - i * period;
    }
  });
  st.order = h.vertices().elements();
  std::stable_sort(st.order.begin(), st.order.end(), [&](int a, int c) {
    if (st.kappa[a] != st.kappa[c]) return st.kappa[a] < st.kappa[c];
    if (st.offset[a] != st.offset[c]) return st.offset[a] < st.offset[c];
    return a < c;
  });
  const auto pos = positions(h, st.order);
  h.vertices().for_each([&](int v) { st.c[v] = marginal_given(b, preceding(g, pos, h.vertices(), v), v); });

  // thresholds: every interval endpoint in [0,1], 0, 1 and the midpoints between them
  std::vector<Rational> points{Rational(0), Rational(1)};
  h.vertices().for_each([&](int v) {
    if (!st.reachable[v]) return;
    for (Rational p : {Rational(st.d[v] - st.x[v]), st.d[v]}) {
      if (sgn(p) >= 0 && p <= 1) points.push_back(p);
    }
  });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Rational> candidates;
  for (std::size_t i = 0; i < points.size(); ++i) {
    candidates.push_back(points[i]);
    if (i + 1 < points.size()) candidates.push_back(Rational((points[i] + points[i + 1]) / 2));
  }
  bool have = false;
  std::map<VertexSet, Rational> seen;
  for (const auto& t : candidates) {
    VertexSet cut;
    h.vertices().for_each([&](int v) {
      if (st.reachable[v] && st.d[v] - st.x[v] <= t && t <= st.d[v]) cut.insert(v);
    });
    if (seen.count(cut)) continue;
    VertexSet closure = in_neighbour_closure(h, st.order, cut);
    Rational cost;
    closure.for_each([&](int v) { cost += st.c[v]; });
    seen.emplace(cut, cost);
    if (!have || cost < out.cost) {
      have = true;
      out.cost = cost;
      out.separator = closure;
      out.threshold = t;
    }
  }
  out.b_value = b(out.separator);
  if (!separates(h, out.separator, x, y)) throw InternalError("rounded set does not separate X from Y");
  if (out.cost > 31 * out.weight) {
    throw InternalError("rounding exceeded 31 times the fractional weight; oracle violates its contract");
  }
  if (out.b_value > out.cost) throw InternalError("b exceeds b_pi on the rounded separator; oracle is not submodular");
  return out;
}

SetFunctionOracle flow_to_submodular(const Flow& f) {
  std::vector<std::pair<VertexSet, Rational>> sets;
  for (std::size_t i = 0; i < f.paths.size(); ++i) sets.emplace_back(f.paths[i].vertex_set(), f.weights[i]);
  SetFunctionOracle inner = SetFunctionOracle::coverage(std::move(sets));
  return SetFunctionOracle([inner](const VertexSet& s) { return inner(s); }, OracleKind::Flow, "flow");
}

Rational max_supported_lambda() { return frac(1, 31); }

namespace {

// Appends `sub` under `parent`, re-rooted at `sub_root`.
void attach(TreeDecomposition& into, int parent, const TreeDecomposition& sub, int sub_root) {
  const int n = sub.size();
  std::vector<std::vector<int>> nbrs(n);
  for (int i = 0; i < n; ++i) {
    if (sub.parent[i] >= 0) {
      nbrs[i].push_back(sub.parent[i]);
      nbrs[sub.parent[i]].push_back(i);
    }
  }
  std::vector<int> mapped(n, -1);
  std::vector<int> stack{sub_root};
  mapped[sub_root] = into.add_node(parent, sub.bags[sub_root]);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : nbrs[v]) {
      if (mapped[u] != -1) continue;
      mapped[u] = into.add_node(mapped[v], sub.bags[u]);
      stack.push_back(u);
    }
  }
}

class Decomposer {
 public:
  Decomposer(const Hypergraph& h, const SetFunctionOracle& b, const Rational& w, const DecomposeOptions& options)
      : h_(h), b_(b), w_(w), options_(options), bstar_(b, h, options.bstar) {}

  // Returns a decomposition of H[v] with a bag containing w0 (index in `bag`), or sets found_.
  std::optional<std::pair<TreeDecomposition, int>> run(const VertexSet& v, const VertexSet& w0) {
    const Rational limit = Rational(3 * (w_ + 1)) / 2;
    if (bstar_(v).value <= limit) return std::make_pair(TreeDecomposition::single_bag(v), 0);
    const Hypergraph sub = induced_subhypergraph(h_, v);
    const Rational upper = w_ + 1;
    // grow W0 until b* reaches w; the first such set is at most w+1
    VertexSet w = w0;
    Ordering rest = (v - w0).elements();
    for (std::size_t i = 0; bstar_(w).value < w_; ++i) {
      if (i == rest.size()) throw InternalError("b*(V) exceeds the bound but growing W never reaches w");
      w.insert(rest[i]);
    }
    if (bstar_(w).value > upper) throw InternalError("adding a vertex raised b* by more than 1");
    while (true) {
      const BStarResult& best = bstar_(w);
      Ordering pi;
      for (int u : best.ordering) {
        if (v.contains(u)) pi.push_back(u);
      }
      VertexWeights mu = independent_set_from_ordering(b_, sub, w, pi);
      if (total(mu, w) != best.value) throw InternalError("mu(W) differs from b*(W)");
      ConnectivityCertificate cert = is_mu_lambda_connected(sub, mu, w, options_.lambda, options_.connectivity);
      if (cert.connected) {
        found_w_ = w;
        found_mu_ = mu;
        return std::nullopt;
      }
      RoundingResult rounded = round_fractional_separator(sub, cert.a, cert.b, cert.separator, b_);
      const VertexSet& s = rounded.separator;
      Rational bs = bstar_(s).value;
      Rational ma = total(mu, cert.a), mb = total(mu, cert.b);
      if (!(bs < ma && bs < mb)) throw InternalError("rounded separator is not cheaper than both sides");
      const auto comps = components(sub, v - s);
      if (comps.empty()) throw InternalError("separator swallowed the whole hypergraph");
      if (comps.size() == 1) {
        // W was not maximal: walk from W ∪ S towards V and keep the last set below w+1
        VertexSet z = w | s;
        if (!(bstar_(z).value < upper)) throw InternalError("W ∪ S violates the separator bound");
        VertexSet keep = z;
        for (int u : (v - z).elements()) {
          z.insert(u);
          if (bstar_(z).value <= upper) keep = z;
        }
        if (keep == w || !w.is_subset_of(keep) || bstar_(keep).value < w_) {
          throw InternalError("could not enlarge W after a one-sided separation");
        }
        w = keep;
        continue;
      }
      TreeDecomposition td;
      const int root = td.add_node(-1, w0 | s);
      for (const auto& c : comps) {
        const VertexSet wi = (c & w) | s;
        auto child = run(c | s, wi);
        if (!child) return std::nullopt;
        attach(td, root, child->first, child->second);
      }
      return std::make_pair(std::move(td), root);
    }
  }

  VertexSet found_w_;
  VertexWeights found_mu_;

 private:
  const Hypergraph& h_;
  SetFunctionOracle b_;
  Rational w_;
  DecomposeOptions options_;
  BStar bstar_;
};

}  // namespace

DecomposeOutcome decompose_or_highly_connected(const Hypergraph& h, const SetFunctionOracle& b, const Rational& w,
                                               const DecomposeOptions& options) {
  if (sgn(options.lambda) <= 0 || options.lambda > max_supported_lambda()) {
    throw DomainError("lambda must lie in (0, 1/31]");
  }
  if (sgn(w) < 0) throw DomainError("w must be nonnegative");
  if (b(VertexSet{}) != 0) throw DomainError("b(empty set) must be 0");
  Decomposer dec(h, b, w, options);
  auto res = dec.run(h.vertices(), VertexSet{});
  DecomposeOutcome out;
  if (res) {
    out.decomposed = true;
    out.decomposition = std::move(res->first);
    auto report = validate_decomposition(h, out.decomposition);
    if (!report.valid) throw InternalError("assembled decomposition is invalid: " + report.violation);
    BStar bstar(b, h, options.bstar);
    bool first = true;
    for (const auto& bag : out.decomposition.bags) {
      const Rational& v = bstar(bag).value;
      if (first || v > out.width) out.width = v;
      first = false;
    }
    if (out.width > Rational(3 * (w + 1)) / 2) throw InternalError("decomposition exceeds the b*-width bound");
    return out;
  }
  out.w = dec.found_w_;
  out.mu = dec.found_mu_;
  if (total(out.mu, out.w) < w) throw InternalError("highly connected set is too light");
  out.certificate = is_mu_lambda_connected(h, out.mu, out.w, options.lambda, options.connectivity);
  if (!out.certificate.connected) throw InternalError("connectivity does not lift from the subhypergraph");
  if (auto why = check_connectivity_certificate(h, out.certificate, options.connectivity); !why.empty()) {
    throw InternalError("connectivity certificate rejected: " + why);
  }
  return out;
}

}  // namespace subw
