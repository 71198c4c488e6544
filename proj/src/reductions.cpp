#include "subw/reductions.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "subw/linprog.hpp"
#include "subw/parallel.hpp"

namespace subw {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long parse_long(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DomainError("line " + std::to_string(line_no) + ": expected an integer, got '" + tok + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------- 3SAT

CnfFormula CnfFormula::parse_dimacs(std::string_view text) {
  CnfFormula phi;
  bool header = false;
  long declared = 0;
  std::vector<int> current;
  bool open = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == '%') break;  // SATLIB trailer
    auto toks = split_ws(line);
    if (toks[0] == "p") {
      if (header) throw DomainError("line " + std::to_string(line_no) + ": second header");
      if (toks.size() != 4 || toks[1] != "cnf") {
        throw DomainError("line " + std::to_string(line_no) + ": expected 'p cnf <vars> <clauses>'");
      }
      long n = parse_long(toks[2], line_no);
      declared = parse_long(toks[3], line_no);
      if (n < 0 || declared < 0) throw DomainError("line " + std::to_string(line_no) + ": negative count");
      phi.num_vars = static_cast<int>(n);
      header = true;
      continue;
    }
    if (!header) throw DomainError("line " + std::to_string(line_no) + ": clause before the 'p cnf' header");
    for (const auto& tok : toks) {
      long lit = parse_long(tok, line_no);
      if (lit == 0) {
        phi.clauses.push_back(current);
        current.clear();
        open = false;
        continue;
      }
      if (std::labs(lit) > phi.num_vars) {
        throw DomainError("line " + std::to_string(line_no) + ": literal " + tok + " out of range");
      }
      current.push_back(static_cast<int>(lit));
      open = true;
      if (current.size() > 3) {
        throw DomainError("line " + std::to_string(line_no) + ": clause with more than three literals");
      }
    }
  }
  if (!header) throw DomainError("missing 'p cnf' header");
  if (open) throw DomainError("last clause is not terminated by 0");
  if (static_cast<long>(phi.clauses.size()) != declared) {
    throw DomainError("header declares " + std::to_string(declared) + " clauses, found " +
                      std::to_string(phi.clauses.size()));
  }
  return phi;
}

CnfFormula CnfFormula::load_dimacs(const std::string& path) { return parse_dimacs(read_file(path)); }

std::string CnfFormula::to_dimacs() const {
  std::ostringstream out;
  out << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
  for (const auto& c : clauses) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

bool CnfFormula::satisfied_by(const std::vector<bool>& values) const {
  if (static_cast<int>(values.size()) != num_vars) throw DomainError("assignment size differs from variable count");
  for (const auto& c : clauses) {
    bool sat = false;
    for (int lit : c) {
      bool v = values[static_cast<std::size_t>(std::abs(lit) - 1)];
      if ((lit > 0) == v) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

int CnfFormula::literal_count() const {
  int total = 0;
  for (const auto& c : clauses) total += static_cast<int>(c.size());
  return total;
}

CspInstance sat_to_csp(const CnfFormula& phi) {
  const int n = phi.num_vars;
  const int m = static_cast<int>(phi.clauses.size());
  std::vector<std::string> vars;
  for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
  for (int j = 1; j <= m; ++j) vars.push_back("y" + std::to_string(j));
  // domain index d stands for value d+1
  std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> cons;
  for (int j = 0; j < m; ++j) {
    const auto& clause = phi.clauses[static_cast<std::size_t>(j)];
    const int y = n + j;
    const int len = static_cast<int>(clause.size());
    if (len == 0) {
      cons.push_back({{y}, {}});
      continue;
    }
    if (len > 3) throw DomainError("clause " + std::to_string(j + 1) + " has more than three literals");
    for (int l = 0; l < len; ++l) {
      const int lit = clause[static_cast<std::size_t>(l)];
      if (lit == 0 || std::abs(lit) > n) throw DomainError("literal out of range");
      const int x = std::abs(lit) - 1;
      const int sat_value = lit > 0 ? 0 : 1;
      std::vector<Tuple> rel;
      for (int xv = 0; xv < 3; ++xv) {
        for (int yv = 0; yv < len; ++yv) {  // y_j restricted to the present positions
          if (xv == sat_value || yv != l) rel.push_back({xv, yv});
        }
      }
      cons.push_back({{x, y}, rel});
    }
  }
  return CspInstance(vars, {"1", "2", "3"}, cons);
}

std::vector<int> clause_order(const CnfFormula& phi, const CspInstance& csp) {
  std::vector<int> order;
  std::vector<bool> placed(static_cast<std::size_t>(csp.universe_size()), false);
  auto put = [&](const std::string& name) {
    int v = csp.index_of(name);
    if (placed[static_cast<std::size_t>(v)]) return;
    placed[static_cast<std::size_t>(v)] = true;
    order.push_back(v);
  };
  for (std::size_t j = 0; j < phi.clauses.size(); ++j) {
    for (int lit : phi.clauses[j]) put("x" + std::to_string(std::abs(lit)));
    put("y" + std::to_string(j + 1));
  }
  for (int i = 1; i <= phi.num_vars; ++i) put("x" + std::to_string(i));
  return order;
}

std::vector<bool> decode_sat_assignment(const CnfFormula& phi, const CspInstance& csp, const Assignment& a) {
  std::vector<bool> out(static_cast<std::size_t>(phi.num_vars));
  for (int i = 1; i <= phi.num_vars; ++i) {
    int idx = csp.index_of("x" + std::to_string(i));
    out[static_cast<std::size_t>(i - 1)] = a.at(static_cast<std::size_t>(idx)) == 0;
  }
  return out;
}

// ---------------------------------------------------------------- embeddings

std::string Embedding::to_text(const Graph& g, const std::vector<std::string>& h_names) const {
  std::ostringstream out;
  g.vertices.for_each([&](int u) {
    out << "vertex: " << g.names[u] << " -> {";
    bool first = true;
    if (static_cast<std::size_t>(u) < images.size()) {
      images[u].for_each([&](int v) {
        out << (first ? "" : " ") << h_names.at(v);
        first = false;
      });
    }
    out << "}\n";
  });
  return out.str();
}

Embedding Embedding::parse(std::string_view text, const Graph& g, const Hypergraph& h) {
  Embedding psi;
  psi.images.assign(static_cast<std::size_t>(g.universe_size()), {});
  std::map<std::string, int> g_index;
  g.vertices.for_each([&](int u) { g_index[g.names[u]] = u; });
  std::vector<bool> seen(static_cast<std::size_t>(g.universe_size()), false);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.rfind("vertex:", 0) != 0) throw DomainError(where + "expected 'vertex: u -> {...}'");
    auto arrow = line.find("->");
    auto open = line.find('{');
    auto close = line.find('}');
    if (arrow == std::string::npos || open == std::string::npos || close == std::string::npos || open < arrow ||
        close < open || !trim(line.substr(close + 1)).empty()) {
      throw DomainError(where + "expected 'vertex: u -> {...}'");
    }
    std::string u_name = trim(line.substr(7, arrow - 7));
    auto it = g_index.find(u_name);
    if (it == g_index.end()) throw DomainError(where + "unknown graph vertex '" + u_name + "'");
    if (seen[static_cast<std::size_t>(it->second)]) throw DomainError(where + "vertex '" + u_name + "' listed twice");
    seen[static_cast<std::size_t>(it->second)] = true;
    VertexSet img;
    for (const auto& tok : split_ws(line.substr(open + 1, close - open - 1))) {
      int v = h.index_of(tok);
      if (!h.vertices().contains(v)) throw DomainError(where + "'" + tok + "' is not a vertex of H");
      img.insert(v);
    }
    psi.images[static_cast<std::size_t>(it->second)] = img;
  }
  return psi;
}

Embedding Embedding::identity(const Graph& g) {
  Embedding psi;
  psi.images.assign(static_cast<std::size_t>(g.universe_size()), {});
  g.vertices.for_each([&](int u) { psi.images[static_cast<std::size_t>(u)] = VertexSet{u}; });
  return psi;
}

DepthReport embedding_depths(const Hypergraph& h, const Embedding& psi) {
  DepthReport r;
  r.vertex_depths.assign(static_cast<std::size_t>(h.universe_size()), 0);
  for (const auto& img : psi.images) {
    img.for_each([&](int v) {
      if (v < h.universe_size()) ++r.vertex_depths[static_cast<std::size_t>(v)];
    });
  }
  for (int d : r.vertex_depths) r.vertex_depth = std::max(r.vertex_depth, d);
  for (const auto& e : h.edges()) {
    int depth = 0, weak = 0;
    e.for_each([&](int v) { depth += r.vertex_depths[static_cast<std::size_t>(v)]; });
    for (const auto& img : psi.images) weak += img.intersects(e);
    r.edge_depth = std::max(r.edge_depth, depth);
    r.weak_edge_depth = std::max(r.weak_edge_depth, weak);
  }
  return r;
}

EmbeddingReport validate_embedding(const Graph& g, const Hypergraph& h, const Embedding& psi) {
  EmbeddingReport rep;
  rep.depths = embedding_depths(h, psi);
  auto fail = [&](int u, const std::string& why) {
    rep.valid = false;
    rep.witness = u;
    rep.violation = why;
  };
  if (static_cast<int>(psi.images.size()) != g.universe_size()) {
    fail(-1, "embedding has " + std::to_string(psi.images.size()) + " images for a graph universe of " +
                 std::to_string(g.universe_size()));
    return rep;
  }
  for (int u = 0; u < g.universe_size() && rep.valid; ++u) {
    const auto& img = psi.images[static_cast<std::size_t>(u)];
    if (!g.vertices.contains(u)) {
      if (!img.empty()) fail(u, "image given for '" + g.names[u] + "', which is not a graph vertex");
      continue;
    }
    if (img.empty()) {
      fail(u, "image of '" + g.names[u] + "' is empty");
    } else if (!img.is_subset_of(h.vertices())) {
      fail(u, "image of '" + g.names[u] + "' leaves V(H)");
    } else if (components(h, img).size() != 1) {
      fail(u, "image of '" + g.names[u] + "' " + h.format(img) + " is not connected");
    }
  }
  if (!rep.valid) return rep;
  for (auto [u, v] : g.edge_list()) {
    if (!touch(h, psi.images[static_cast<std::size_t>(u)], psi.images[static_cast<std::size_t>(v)])) {
      fail(u, "images of adjacent '" + g.names[u] + "' and '" + g.names[v] + "' do not touch");
      break;
    }
  }
  return rep;
}

Hypergraph graph_as_hypergraph(const Graph& g) {
  std::vector<VertexSet> edges;
  for (auto [u, v] : g.edge_list()) edges.push_back(VertexSet{u, v});
  return Hypergraph(g.names, edges, g.vertices);
}

int line_vertex(int k, int i, int j) {
  if (i < 1 || j > k || i >= j) throw DomainError("line graph index out of range");
  // pairs listed as (1,2), (1,3), ..., (1,k), (2,3), ...
  int before = 0;
  for (int a = 1; a < i; ++a) before += k - a;
  return before + (j - i - 1);
}

Graph line_graph_of_clique(int k) {
  if (k < 2) throw DomainError("L_k needs k >= 2");
  Graph g;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      pairs.emplace_back(i, j);
      g.names.push_back("v" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  // names are already in natural order, which matches line_vertex
  g.vertices = VertexSet::range(static_cast<int>(pairs.size()));
  g.adj.assign(pairs.size(), {});
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      auto [i1, j1] = pairs[a];
      auto [i2, j2] = pairs[b];
      if (i1 == i2 || i1 == j2 || j1 == i2 || j1 == j2) g.add_edge(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return g;
}

Embedding trim_embedding(const Graph& g, const Hypergraph& h, Embedding psi) {
  DepthReport d = embedding_depths(h, psi);
  auto ok_for = [&](int u, const VertexSet& img) {
    if (img.empty() || components(h, img).size() != 1) return false;
    bool good = true;
    g.adj[u].for_each([&](int w) {
      if (good && g.vertices.contains(w) && !touch(h, img, psi.images[static_cast<std::size_t>(w)])) good = false;
    });
    return good;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u : g.vertices.elements()) {
      auto& img = psi.images[static_cast<std::size_t>(u)];
      std::vector<int> order = img.elements();
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return d.vertex_depths[static_cast<std::size_t>(a)] > d.vertex_depths[static_cast<std::size_t>(b)];
      });
      for (int x : order) {
        VertexSet smaller = img - VertexSet{x};
        if (!ok_for(u, smaller)) continue;
        img = smaller;
        --d.vertex_depths[static_cast<std::size_t>(x)];
        changed = true;
      }
    }
  }
  return psi;
}

namespace {

// Connected vertex subsets of `g` of size <= cap, ordered by (size, mask).
std::vector<VertexSet> connected_subsets(const Graph& g, int cap) {
  std::vector<VertexSet> out;
  std::vector<VertexSet> layer;
  g.vertices.for_each([&](int v) { layer.push_back(VertexSet{v}); });
  for (int size = 1; size <= cap && !layer.empty(); ++size) {
    std::sort(layer.begin(), layer.end());
    layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
    out.insert(out.end(), layer.begin(), layer.end());
    std::vector<VertexSet> next;
    for (const auto& s : layer) {
      g.neighbourhood(s).for_each([&](int v) {
        VertexSet t = s;
        t.insert(v);
        next.push_back(t);
      });
    }
    layer = std::move(next);
  }
  return out;
}

struct LineSearch {
  const Graph& g;
  std::vector<int> order;                 // placement order of G vertices
  std::vector<VertexSet> cands;           // candidate images
  std::vector<VertexSet> closed;          // closed neighbourhood in L_k
  int q = 1;
  long max_nodes = 0;
  long nodes = 0;
  bool exhausted = false;
  std::vector<int> depth;
  std::vector<int> chosen;                // candidate index per G vertex

  bool touches(int a, int b) const { return closed[static_cast<std::size_t>(a)].intersects(cands[static_cast<std::size_t>(b)]); }

  bool place(std::size_t pos) {
    if (pos == order.size()) return true;
    const int u = order[pos];
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (++nodes > max_nodes) {
        exhausted = true;
        return false;
      }
      if (!fits(u, static_cast<int>(c))) continue;
      apply(u, static_cast<int>(c), 1);
      if (place(pos + 1)) return true;
      apply(u, static_cast<int>(c), -1);
      if (exhausted) return false;
    }
    return false;
  }

  bool fits(int u, int c) const {
    bool ok = true;
    cands[static_cast<std::size_t>(c)].for_each([&](int v) {
      if (depth[static_cast<std::size_t>(v)] + 1 > q) ok = false;
    });
    if (!ok) return false;
    g.adj[u].for_each([&](int w) {
      int cw = chosen[static_cast<std::size_t>(w)];
      if (ok && cw >= 0 && !touches(c, cw)) ok = false;
    });
    return ok;
  }

  void apply(int u, int c, int delta) {
    cands[static_cast<std::size_t>(c)].for_each([&](int v) { depth[static_cast<std::size_t>(v)] += delta; });
    chosen[static_cast<std::size_t>(u)] = delta > 0 ? c : -1;
  }
};

std::vector<int> placement_order(const Graph& g) {
  std::vector<int> order;
  VertexSet placed;
  const int n = g.vertices.size();
  auto degree = [&](int v) { return (g.adj[v] & g.vertices).size(); };
  for (int step = 0; step < n; ++step) {
    int best = -1, best_links = -1, best_deg = -1;
    for (int v : g.vertices.elements()) {
      if (placed.contains(v)) continue;
      int links = (g.adj[v] & placed).size();
      int deg = degree(v);
      if (links > best_links || (links == best_links && deg > best_deg)) {
        best = v;
        best_links = links;
        best_deg = deg;
      }
    }
    order.push_back(best);
    placed.insert(best);
  }
  return order;
}

Embedding star_embedding(const Graph& g, int k) {
  Embedding psi;
  psi.images.assign(static_cast<std::size_t>(g.universe_size()), {});
  std::vector<int> load(static_cast<std::size_t>(k), 0);
  std::vector<int> verts = g.vertices.elements();
  std::stable_sort(verts.begin(), verts.end(),
                   [&](int a, int b) { return (g.adj[a] & g.vertices).size() > (g.adj[b] & g.vertices).size(); });
  for (int u : verts) {
    int star = static_cast<int>(std::min_element(load.begin(), load.end()) - load.begin());
    ++load[static_cast<std::size_t>(star)];
    VertexSet img;
    for (int other = 1; other <= k; ++other) {
      if (other == star + 1) continue;
      img.insert(line_vertex(k, std::min(star + 1, other), std::max(star + 1, other)));
    }
    psi.images[static_cast<std::size_t>(u)] = img;
  }
  return psi;
}

}  // namespace

LineEmbeddingResult embed_into_line_graph(const Graph& g, int k, const LineEmbeddingOptions& options) {
  const Graph lk = line_graph_of_clique(k);
  const Hypergraph lh = graph_as_hypergraph(lk);
  LineEmbeddingResult res;
  const long edges = g.edge_count();
  res.budget = options.budget > 0 ? options.budget
                                  : static_cast<int>(std::max<long>(1, (130 * edges + k * k - 1) / (k * k)));
  const int n = g.vertices.size();
  if (n == 0) {
    res.found = true;
    res.method = "exhaustive";
    res.embedding.images.assign(static_cast<std::size_t>(g.universe_size()), {});
    return res;
  }

  if (n <= options.exhaustive_max_vertices) {
    LineSearch base{g, placement_order(g), connected_subsets(lk, options.max_image_size), {}, 1, 0, 0, false, {}, {}};
    for (const auto& c : base.cands) base.closed.push_back(c | lk.neighbourhood(c));
    const int first = base.order.front();
    const int top = std::min(res.budget, n);
    bool settled = true;  // every branch either succeeded or was refuted at each depth
    for (int q = 1; q <= top; ++q) {
      // branch on the image of the first vertex; lowest successful branch wins
      const std::size_t branches = base.cands.size();
      std::vector<int> outcome(branches, 0);  // 1 found, 0 refuted, -1 out of nodes
      std::vector<std::vector<int>> picks(branches);
      parallel_for(branches, options.jobs, [&](std::size_t b) {
        LineSearch s = base;
        s.q = q;
        s.max_nodes = options.max_nodes_per_branch;
        s.depth.assign(static_cast<std::size_t>(lk.universe_size()), 0);
        s.chosen.assign(static_cast<std::size_t>(g.universe_size()), -1);
        if (!s.fits(first, static_cast<int>(b))) return;
        s.apply(first, static_cast<int>(b), 1);
        if (s.place(1)) {
          outcome[b] = 1;
          picks[b] = s.chosen;
        } else if (s.exhausted) {
          outcome[b] = -1;
        }
      });
      bool any_exhausted = false;
      for (std::size_t b = 0; b < branches; ++b) {
        if (outcome[b] == -1) any_exhausted = true;
        if (outcome[b] != 1) continue;
        // an exhausted lower branch might also have succeeded; taking b is still valid
        res.embedding.images.assign(static_cast<std::size_t>(g.universe_size()), {});
        for (int u : g.vertices.elements()) {
          res.embedding.images[static_cast<std::size_t>(u)] =
              base.cands[static_cast<std::size_t>(picks[b][static_cast<std::size_t>(u)])];
        }
        res.found = true;
        res.method = "exhaustive";
        res.vertex_depth = embedding_depths(lh, res.embedding).vertex_depth;
        return res;
      }
      if (any_exhausted) settled = false;
    }
    if (settled && top == n && options.max_image_size >= 1) {
      // a single-vertex image for everything has depth n, so this cannot happen
      throw InternalError("exhaustive line-graph search missed the trivial embedding");
    }
  }

  res.embedding = trim_embedding(g, lh, star_embedding(g, k));
  res.method = "greedy";
  auto rep = validate_embedding(g, lh, res.embedding);
  if (!rep.valid) throw InternalError("star embedding invalid: " + rep.violation);
  res.vertex_depth = rep.depths.vertex_depth;
  if (res.vertex_depth > res.budget) {
    res.found = false;
    res.failure = "best embedding found has vertex depth " + std::to_string(res.vertex_depth) + " > budget " +
                  std::to_string(res.budget) + "; raise k or the budget";
    return res;
  }
  res.found = true;
  return res;
}

namespace {

// Exact feasibility: a fractional independent set with mu(K) >= 1/2 on every clique.
std::optional<VertexWeights> clique_weights(const Hypergraph& h, const std::vector<VertexSet>& cliques) {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  const int n = h.universe_size();
  for (int v = 0; v < n; ++v) lp.add_variable(0);
  for (const auto& e : h.edges()) {
    std::vector<Rational> row(static_cast<std::size_t>(n));
    e.for_each([&](int v) { row[static_cast<std::size_t>(v)] = 1; });
    lp.add_constraint(row, Relation::LessEqual, 1);
  }
  for (const auto& k : cliques) {
    std::vector<Rational> row(static_cast<std::size_t>(n));
    k.for_each([&](int v) { row[static_cast<std::size_t>(v)] = 1; });
    lp.add_constraint(row, Relation::GreaterEqual, frac(1, 2));
  }
  auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  VertexWeights mu(sol.primal.begin(), sol.primal.begin() + n);
  return mu;
}

bool exhaustive_harvest(const Hypergraph& h, const std::vector<VertexSet>& cliques, std::size_t from, int want,
                        std::vector<VertexSet>& family, VertexSet used, VertexWeights& mu) {
  if (static_cast<int>(family.size()) == want) {
    auto w = clique_weights(h, family);
    if (!w) return false;
    mu = *w;
    return true;
  }
  for (std::size_t c = from; c < cliques.size(); ++c) {
    if (cliques[c].intersects(used)) continue;
    family.push_back(cliques[c]);
    if (exhaustive_harvest(h, cliques, c + 1, want, family, used | cliques[c], mu)) return true;
    family.pop_back();
  }
  return false;
}

template <class Fn>
auto staged(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ResourceError& e) {
    throw ResourceError("stage " + stage + ": " + e.what());
  } catch (const DomainError& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

ConstructedEmbedding construct_embedding(const Graph& g, const Hypergraph& h, const Rational& lambda,
                                         const ConstructOptions& options) {
  ConstructedEmbedding out;
  out.lambda = lambda;
  if (sgn(lambda) <= 0 || lambda >= 1) throw StageError("input", "lambda must lie in (0, 1)");
  if (h.vertex_count() < 2) throw StageError("input", "H needs at least two vertices");
  if (components(h, h.vertices()).size() != 1) throw StageError("input", "H is not connected");
  if (options.max_cliques < 2) throw StageError("input", "max_cliques must be at least 2");

  // (a) cliques
  staged("harvest", [&] {
    if (options.mu.empty()) {
      int r = 0;
      for (const auto& e : h.edges()) r = std::max(r, e.size());
      out.mu.assign(static_cast<std::size_t>(h.universe_size()), Rational(0));
      h.vertices().for_each([&](int v) { out.mu[static_cast<std::size_t>(v)] = frac(1, r); });
    } else {
      if (static_cast<int>(options.mu.size()) != h.universe_size()) throw DomainError("mu has the wrong length");
      if (!is_fractional_independent_set(h, options.mu)) throw DomainError("mu is not a fractional independent set");
      out.mu = options.mu;
    }
    VertexSet support;
    h.vertices().for_each([&](int v) {
      if (sgn(out.mu[static_cast<std::size_t>(v)]) > 0) support.insert(v);
    });
    VertexSet taken;
    bool grew = true;
    while (grew && static_cast<int>(out.cliques.size()) < options.max_cliques) {
      grew = false;
      for (const auto& e : h.edges()) {
        VertexSet k = (e & support) - taken;
        if (k.empty() || total(out.mu, k) < frac(1, 2)) continue;
        out.cliques.push_back(k);
        taken |= k;
        grew = true;
        break;
      }
    }
    out.harvest = "greedy";
    if (out.cliques.size() >= 2) return;
    if (h.vertex_count() > options.exhaustive_harvest_max_vertices) {
      throw DomainError("greedy harvest found fewer than two cliques and H is too large for exhaustive search");
    }
    std::vector<VertexSet> all;
    const Graph pg = primal_graph(h);
    for_each_subset(h.vertices(), [&](const VertexSet& s) {
      if (!s.empty() && pg.is_clique(s)) all.push_back(s);
    });
    std::stable_sort(all.begin(), all.end(), [](const VertexSet& a, const VertexSet& b) { return a.size() < b.size(); });
    for (int want = std::min(options.max_cliques, h.vertex_count()); want >= 2; --want) {
      std::vector<VertexSet> family;
      VertexWeights mu;
      if (exhaustive_harvest(h, all, 0, want, family, {}, mu)) {
        out.cliques = family;
        out.mu = mu;
        out.harvest = "exhaustive";
        return;
      }
    }
    throw DomainError("no two disjoint cliques carry a fractional independent set of mass 1/2 each");
  });
  const int k = static_cast<int>(out.cliques.size());

  // (b) uniform concurrent flow
  ConcurrentFlowResult flow = staged("flow", [&] { return max_uniform_concurrent_flow(h, out.cliques); });
  out.epsilon = flow.epsilon;
  if (sgn(out.epsilon) <= 0) throw StageError("flow", "uniform concurrent flow has value 0");
  if (!respects_capacities(h, flow.flows)) throw InternalError("stage flow: flows exceed edge capacities");

  // (c) line graph
  LineEmbeddingResult line = staged("line-graph", [&] { return embed_into_line_graph(g, k, options.line); });
  if (!line.found) throw StageError("line-graph", line.failure);
  out.line_embedding = line.embedding;
  out.q = line.vertex_depth;

  // (d) paths
  out.embedding.images.assign(static_cast<std::size_t>(g.universe_size()), {});
  const Rational scale = Rational(out.q) / out.epsilon;
  for (std::size_t p = 0; p < flow.pairs.size(); ++p) {
    auto [i, j] = flow.pairs[p];
    const int lv = line_vertex(k, i + 1, j + 1);
    const std::size_t start = out.paths.size();
    for (std::size_t t = 0; t < flow.flows[p].paths.size(); ++t) {
      PathUse use;
      use.i = i;
      use.j = j;
      use.path = flow.flows[p].paths[t];
      use.weight = flow.flows[p].weights[t];
      use.capacity = ceil_of(scale * use.weight).get_si();
      out.paths.push_back(use);
    }
    std::size_t cursor = start;
    for (int u : g.vertices.elements()) {
      if (!out.line_embedding.images[static_cast<std::size_t>(u)].contains(lv)) continue;
      while (cursor < out.paths.size() && out.paths[cursor].used >= out.paths[cursor].capacity) ++cursor;
      if (cursor == out.paths.size()) {
        throw InternalError("stage paths: flow F_" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            " has too little capacity");
      }
      ++out.paths[cursor].used;
      out.embedding.images[static_cast<std::size_t>(u)] |= out.paths[cursor].path.vertex_set();
    }
  }

  auto rep = validate_embedding(g, h, out.embedding);
  if (!rep.valid) throw InternalError("stage validate: " + rep.violation);
  out.untrimmed = rep.depths;
  if (options.trim) {
    out.embedding = trim_embedding(g, h, out.embedding);
    rep = validate_embedding(g, h, out.embedding);
    if (!rep.valid) throw InternalError("stage trim: " + rep.violation);
  }
  out.depths = rep.depths;
  return out;
}

// ---------------------------------------------------------------- simulation

Assignment SimulationResult::encode(const Assignment& a1) const {
  Assignment out(static_cast<std::size_t>(instance.universe_size()), kUnassigned);
  for (std::size_t v = 0; v < codes.size(); ++v) {
    long code = 0;
    for (int u : codes[v]) code = code * d1 + a1.at(static_cast<std::size_t>(u));
    out[v] = static_cast<int>(code);
  }
  return out;
}

Assignment SimulationResult::decode(const Assignment& a2, int i1_universe) const {
  Assignment out(static_cast<std::size_t>(i1_universe), kUnassigned);
  for (std::size_t v = 0; v < codes.size(); ++v) {
    long code = a2.at(v);
    for (std::size_t p = codes[v].size(); p-- > 0;) {
      out[static_cast<std::size_t>(codes[v][p])] = static_cast<int>(code % d1);
      code /= d1;
    }
  }
  return out;
}

SimulationResult simulate_csp_via_embedding(const CspInstance& i1, const Hypergraph& h, const Embedding& psi,
                                            const SimulationOptions& options) {
  for (const auto& c : i1.constraints()) {
    if (c.scope.size() > 2) throw DomainError("simulation needs a binary instance");
  }
  const Graph g = primal_graph(i1.hypergraph());
  auto rep = validate_embedding(g, h, psi);
  if (!rep.valid) throw DomainError("invalid embedding: " + rep.violation);
  VertexSet covered;
  for (const auto& e : h.edges()) covered |= e;
  for (int u : i1.variables().elements()) {
    if (!psi.images[static_cast<std::size_t>(u)].is_subset_of(covered)) {
      throw DomainError("image of '" + i1.name(u) + "' uses a vertex of H that lies in no edge");
    }
  }

  SimulationResult res;
  res.d1 = i1.domain_size();
  res.depths = rep.depths;
  const std::vector<int> hv = h.vertices().elements();
  std::vector<int> pos(static_cast<std::size_t>(h.universe_size()), -1);
  for (std::size_t i = 0; i < hv.size(); ++i) pos[static_cast<std::size_t>(hv[i])] = static_cast<int>(i);
  res.codes.assign(hv.size(), {});
  for (int u : i1.variables().elements()) {
    psi.images[static_cast<std::size_t>(u)].for_each([&](int v) { res.codes[static_cast<std::size_t>(pos[v])].push_back(u); });
  }
  auto power = [&](std::size_t e) {
    BigInt p = 1;
    for (std::size_t i = 0; i < e; ++i) p *= res.d1;
    return p;
  };
  BigInt k2 = 1;
  for (const auto& c : res.codes) k2 = std::max(k2, power(c.size()));
  if (k2 > BigInt(static_cast<unsigned long>(options.max_domain))) {
    throw ResourceError("simulated domain would have " + k2.get_str() + " values");
  }
  std::vector<std::string> domain;
  for (unsigned long d = 1; d <= k2.get_ui(); ++d) domain.push_back(std::to_string(d));

  std::vector<std::string> names;
  for (int v : hv) names.push_back(h.name(v));
  std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> cons;
  std::uint64_t total_tuples = 0;
  for (const auto& e : h.edges()) {
    const std::vector<int> ev = e.elements();
    VertexSet ue;
    for (int v : ev) {
      for (int u : res.codes[static_cast<std::size_t>(pos[v])]) ue.insert(u);
    }
    const std::vector<int> uvars = ue.elements();
    // I1 constraints inside U_e, checked once their last variable is set
    std::vector<std::vector<const Constraint*>> due(uvars.size());
    for (const auto& c : i1.constraints()) {
      if (!c.scope.is_subset_of(ue)) continue;
      int last = 0;
      for (std::size_t i = 0; i < uvars.size(); ++i) {
        if (c.scope.contains(uvars[i])) last = static_cast<int>(i);
      }
      due[static_cast<std::size_t>(last)].push_back(&c);
    }
    std::vector<Tuple> rel;
    Assignment f(static_cast<std::size_t>(i1.universe_size()), kUnassigned);
    auto ok_at = [&](std::size_t i) {
      for (const Constraint* c : due[i]) {
        Tuple t;
        c->scope.for_each([&](int u) { t.push_back(f[static_cast<std::size_t>(u)]); });
        if (!std::binary_search(c->relation.begin(), c->relation.end(), t)) return false;
      }
      return true;
    };
    auto emit = [&] {
      Tuple t;
      for (int v : ev) {
        long code = 0;
        for (int u : res.codes[static_cast<std::size_t>(pos[v])]) code = code * res.d1 + f[static_cast<std::size_t>(u)];
        t.push_back(static_cast<int>(code));
      }
      rel.push_back(std::move(t));
      if (++total_tuples > options.max_tuples) throw ResourceError("simulated relations exceed the tuple cap");
    };
    // iterative backtracking over U_e
    if (uvars.empty()) {
      emit();
    } else {
      std::size_t i = 0;
      f[static_cast<std::size_t>(uvars[0])] = -1;
      while (true) {
        int& slot = f[static_cast<std::size_t>(uvars[i])];
        if (++slot >= res.d1) {
          slot = kUnassigned;
          if (i == 0) break;
          --i;
          continue;
        }
        if (!ok_at(i)) continue;
        if (i + 1 == uvars.size()) {
          emit();
        } else {
          ++i;
          f[static_cast<std::size_t>(uvars[i])] = -1;
        }
      }
    }
    std::vector<int> scope;
    for (int v : ev) scope.push_back(pos[static_cast<std::size_t>(v)]);
    res.relation_sizes.push_back(rel.size());
    BigInt table = 1;
    for (int v : ev) table *= power(res.codes[static_cast<std::size_t>(pos[v])].size());
    res.truth_table_sizes.push_back(table);
    cons.push_back({scope, std::move(rel)});
  }
  res.instance = CspInstance(names, domain, cons);
  return res;
}

// ---------------------------------------------------------------- transfer

TreeDecomposition transfer_decomposition(const Graph& g, const Hypergraph& h, const Embedding& psi,
                                         const TreeDecomposition& t) {
  auto rep = validate_embedding(g, h, psi);
  if (!rep.valid) throw DomainError("invalid embedding: " + rep.violation);
  auto tv = validate_decomposition(h, t);
  if (!tv.valid) throw DomainError("invalid decomposition of H: " + tv.violation);
  TreeDecomposition out;
  out.parent = t.parent;
  for (const auto& bag : t.bags) {
    VertexSet b;
    g.vertices.for_each([&](int u) {
      if (psi.images[static_cast<std::size_t>(u)].intersects(bag)) b.insert(u);
    });
    out.bags.push_back(b);
  }
  return out;
}

VertexWeights depth_weights(const Hypergraph& h, const Embedding& psi) {
  DepthReport d = embedding_depths(h, psi);
  VertexWeights mu(static_cast<std::size_t>(h.universe_size()), Rational(0));
  if (d.edge_depth == 0) return mu;
  for (int v = 0; v < h.universe_size(); ++v) mu[static_cast<std::size_t>(v)] = frac(d.vertex_depths[static_cast<std::size_t>(v)], d.edge_depth);
  return mu;
}

}  // namespace subw
