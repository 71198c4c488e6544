#include "subw/suites.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "subw/csp.hpp"
#include "subw/decomposition.hpp"
#include "subw/errors.hpp"
#include "subw/fractional.hpp"
#include "subw/linprog.hpp"
#include "subw/parallel.hpp"
#include "subw/reductions.hpp"
#include "subw/submodular.hpp"
#include "subw/uniform.hpp"

namespace subw {

// ---------------------------------------------------------------- fixtures

namespace {

const std::map<std::string, std::string>& fixture_texts() {
  static const std::map<std::string, std::string> texts = {
      {"path4", "A B\nB C\nC D\n"},
      {"triangle", "A B\nB C\nA C\n"},
      {"cycle5", "A B\nB C\nC D\nD E\nA E\n"},
      {"k4", "A B\nA C\nA D\nB C\nB D\nC D\n"},
      {"q1", "A B C\nC D\nD E F\nE F G H\nH I\n"},
      {"fano", "1 2 3\n1 4 5\n1 6 7\n2 4 6\n2 5 7\n3 4 7\n3 5 6\n"},
      {"grid3", "a1 a2\na2 a3\nb1 b2\nb2 b3\nc1 c2\nc2 c3\na1 b1\nb1 c1\na2 b2\nb2 c2\na3 b3\nb3 c3\n"},
  };
  return texts;
}

}  // namespace

Hypergraph fixture_hypergraph(const std::string& name) {
  const std::string prefix = "single-edge-";
  if (name.rfind(prefix, 0) == 0) {
    int r = 0;
    try {
      r = std::stoi(name.substr(prefix.size()));
    } catch (const std::exception&) {
      throw DomainError("bad fixture name " + name);
    }
    if (r < 1 || r > 64) throw DomainError("single-edge fixture needs 1 <= r <= 64");
    std::vector<std::string> e;
    for (int i = 1; i <= r; ++i) e.push_back("v" + std::to_string(i));
    return Hypergraph::from_edges({e});
  }
  auto it = fixture_texts().find(name);
  if (it == fixture_texts().end()) throw DomainError("unknown fixture " + name);
  return Hypergraph::parse(it->second);
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out{"single-edge-<r>"};
  for (const auto& [name, text] : fixture_texts()) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------- catalog

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> catalog = {
      {"widths", 1, "width fixtures: single edge, Q1, K4, Fano", 9, true},
      {"duality", 2, "max flow equals min fractional separator", 200, false},
      {"prop5.2", 3, "b_pi / b* properties and additivity on non-touching sets", 50, false},
      {"rho-star", 4, "b <= rho* and b-width <= fhw", 50, false},
      {"rounding", 5, "rounded separators cost at most 31 times the fractional weight", 100, false},
      {"split", 6, "uniform splitting: verified refinements partitioning sol(I)", 100, false},
      {"uniform-b", 7, "functions built from uniform instances are submodular", 60, false},
      {"fpt", 8, "solve_fpt with c0 = fhw agrees with brute force", 200, false},
      {"decompose", 9, "decompose-or-highly-connected returns verified certificates", 80, false},
      {"sat-sim", 10, "3SAT reduction and embedding simulation are equisatisfiable", 560, false},
      {"transfer", 11, "transferred decompositions validate within q * w", 90, false},
  };
  return catalog;
}

const SuiteInfo& suite_info(const std::string& name) {
  for (const auto& s : suite_catalog()) {
    if (s.name == name) return s;
  }
  throw DomainError("unknown suite " + name);
}

namespace {

// ---------------------------------------------------------------- case plumbing

struct CaseLog {
  long checks = 0;
  long failures = 0;
  std::vector<std::string> messages;
  std::map<std::string, long> counters;

  template <class F>
  void expect(bool ok, F&& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (messages.size() < 3) messages.push_back(what());
  }
  void count(const std::string& key, long by = 1) { counters[key] += by; }
};

using CaseFn = std::function<void(int, std::mt19937_64&, CaseLog&)>;
using FinishFn = std::function<void(const std::map<std::string, long>&, CaseLog&)>;

constexpr std::size_t kMaxMessages = 12;

// `stream` picks the generator family; suites sharing a corpus share a stream.
SuiteReport run_cases(const SuiteInfo& info, const SuiteOptions& options, int stream, const CaseFn& body,
                      const FinishFn& finish = {}) {
  SuiteReport report;
  report.name = info.name;
  report.title = info.title;
  report.criterion = info.criterion;
  report.seed = info.fixed ? 0 : options.seed;
  const int count = info.fixed || options.cases <= 0 ? info.default_cases : options.cases;
  report.required_cases = count;
  std::vector<CaseLog> logs(static_cast<std::size_t>(count));
  parallel_for(logs.size(), options.jobs, [&](std::size_t i) {
    const auto seed = info.fixed ? 0 : options.seed;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    CaseLog& log = logs[i];
    try {
      body(static_cast<int>(i), rng, log);
    } catch (const std::exception& e) {
      log.expect(false, [&] { return std::string("exception: ") + e.what(); });
    }
  });
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto& log = logs[i];
    ++report.cases;
    report.checks += log.checks;
    report.failures += log.failures;
    for (const auto& m : log.messages) {
      if (report.messages.size() < kMaxMessages) report.messages.push_back("case " + std::to_string(i) + ": " + m);
    }
    for (const auto& [k, v] : log.counters) report.counters[k] += v;
  }
  if (finish) {
    CaseLog tail;
    finish(report.counters, tail);
    report.checks += tail.checks;
    report.failures += tail.failures;
    for (const auto& m : tail.messages) {
      if (report.messages.size() < kMaxMessages) report.messages.push_back("suite: " + m);
    }
  }
  return report;
}

std::string str(const Rational& r) { return to_string(r); }

// ---------------------------------------------------------------- generators

// n vertices v0.., edges of size 2..4, every vertex covered.
Hypergraph random_hypergraph(std::mt19937_64& rng, int n, int edges) {
  std::vector<std::vector<std::string>> es;
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> size_roll(0, 9);
  std::vector<bool> covered(static_cast<std::size_t>(n), false);
  for (int i = 0; i < edges; ++i) {
    int r = size_roll(rng);
    int size = std::min(r < 5 ? 2 : (r < 9 ? 3 : 4), n);
    std::vector<int> vs;
    while (static_cast<int>(vs.size()) < size) {
      int v = pick(rng);
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }
    std::vector<std::string> e;
    for (int v : vs) {
      e.push_back("v" + std::to_string(v));
      covered[static_cast<std::size_t>(v)] = true;
    }
    es.push_back(e);
  }
  for (int v = 0; v < n; ++v) {
    if (!covered[static_cast<std::size_t>(v)]) es.push_back({"v" + std::to_string(v), "v" + std::to_string((v + 1) % n)});
  }
  return Hypergraph::from_edges(es);
}

// Coverage plus a truncated modular part, scaled so that every edge is worth at most 1.
SetFunctionOracle random_submodular(std::mt19937_64& rng, const Hypergraph& h) {
  std::vector<int> verts = h.vertices().elements();
  std::uniform_int_distribution<int> pick(0, static_cast<int>(verts.size()) - 1);
  std::uniform_int_distribution<int> weight(1, 4);
  std::vector<std::pair<VertexSet, Rational>> sets;
  for (int j = 0; j < 4; ++j) {
    VertexSet t;
    for (int k = 0; k < 2; ++k) t.insert(verts[static_cast<std::size_t>(pick(rng))]);
    sets.emplace_back(t, frac(weight(rng), 4));
  }
  std::vector<Rational> a(static_cast<std::size_t>(h.universe_size()));
  for (int v : verts) a[static_cast<std::size_t>(v)] = frac(weight(rng), 6);
  Rational cap = frac(weight(rng) + 1, 4);
  auto raw = [sets, a, cap](const VertexSet& s) {
    Rational r, m;
    for (const auto& [t, c] : sets) {
      if (t.intersects(s)) r += c;
    }
    s.for_each([&](int v) { m += a[static_cast<std::size_t>(v)]; });
    r += m < cap ? m : cap;
    return r;
  };
  Rational scale(1);
  for (const auto& e : h.edges()) scale = std::max(scale, raw(e));
  return SetFunctionOracle([raw, scale](const VertexSet& s) -> Rational { return raw(s) / scale; },
                           OracleKind::Submodular, "random coverage + truncated modular");
}

// Modular weights with every edge total at most 1.
SetFunctionOracle random_modular(std::mt19937_64& rng, const Hypergraph& h) {
  std::uniform_int_distribution<int> weight(0, 4);
  VertexWeights w(static_cast<std::size_t>(h.universe_size()));
  h.vertices().for_each([&](int v) { w[static_cast<std::size_t>(v)] = frac(weight(rng), 4); });
  Rational scale(1);
  for (const auto& e : h.edges()) scale = std::max(scale, total(w, e));
  for (auto& x : w) x /= scale;
  return SetFunctionOracle::modular(w);
}

// Weight 1/(largest edge size) everywhere; on Fano every bag of every decomposition is heavy.
SetFunctionOracle uniform_modular(const Hypergraph& h) {
  int widest = 1;
  for (const auto& e : h.edges()) widest = std::max(widest, e.size());
  VertexWeights w(static_cast<std::size_t>(h.universe_size()));
  h.vertices().for_each([&](int v) { w[static_cast<std::size_t>(v)] = frac(1, widest); });
  return SetFunctionOracle::modular(w);
}

std::vector<Tuple> full_tuples(int arity, int d) {
  std::vector<Tuple> out;
  if (d == 0 && arity > 0) return out;
  Tuple t(static_cast<std::size_t>(arity), 0);
  while (true) {
    out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && ++t[static_cast<std::size_t>(i)] == d) t[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

// Scopes of arity 1..max_arity, each tuple kept with probability `density`.
CspInstance random_csp(std::mt19937_64& rng, int n, int d, int constraints, int max_arity, double density) {
  std::vector<std::string> vars, domain;
  for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d; ++i) domain.push_back("d" + std::to_string(i));
  std::uniform_int_distribution<int> arity(1, std::min(max_arity, n));
  std::bernoulli_distribution keep(density);
  std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> cons;
  for (int c = 0; c < constraints; ++c) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> scope(all.begin(), all.begin() + arity(rng));
    std::vector<Tuple> rel;
    for (auto& t : full_tuples(static_cast<int>(scope.size()), d)) {
      if (keep(rng)) rel.push_back(t);
    }
    cons.push_back({scope, rel});
  }
  return CspInstance(vars, domain, cons);
}

// One constraint per edge of h.
CspInstance random_csp_on(std::mt19937_64& rng, const Hypergraph& h, int d, double density) {
  std::vector<std::string> domain;
  for (int i = 1; i <= d; ++i) domain.push_back("d" + std::to_string(i));
  std::bernoulli_distribution keep(density);
  std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> cons;
  for (const auto& e : h.edges()) {
    std::vector<int> scope = e.elements();
    std::vector<Tuple> rel;
    for (auto& t : full_tuples(static_cast<int>(scope.size()), d)) {
      if (keep(rng)) rel.push_back(t);
    }
    cons.push_back({scope, rel});
  }
  return CspInstance(h.names(), domain, cons);
}

CnfFormula random_3sat(std::mt19937_64& rng, int n, int m) {
  CnfFormula phi;
  phi.num_vars = n;
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<int> vars(static_cast<std::size_t>(n));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<int> clause;
    for (int l = 0; l < std::min(3, n); ++l) {
      clause.push_back(sign(rng) ? vars[static_cast<std::size_t>(l)] : -vars[static_cast<std::size_t>(l)]);
    }
    phi.clauses.push_back(clause);
  }
  return phi;
}

// Connected random images grown inside h; G keeps a random subset of the touching pairs.
std::pair<Graph, Embedding> random_embedding(std::mt19937_64& rng, const Hypergraph& h, int n, int max_size,
                                             double keep) {
  const Graph pg = primal_graph(h);
  std::vector<int> hv = h.vertices().elements();
  Embedding psi;
  std::vector<std::string> names;
  for (int u = 1; u <= n; ++u) names.push_back("g" + std::to_string(u));
  std::uniform_int_distribution<int> pick_v(0, static_cast<int>(hv.size()) - 1);
  std::uniform_int_distribution<int> pick_size(1, max_size);
  for (int u = 0; u < n; ++u) {
    VertexSet img{hv[static_cast<std::size_t>(pick_v(rng))]};
    int want = pick_size(rng);
    while (img.size() < want) {
      auto nb = pg.neighbourhood(img).elements();
      if (nb.empty()) break;
      img.insert(nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)]);
    }
    psi.images.push_back(img);
  }
  std::vector<VertexSet> edges;
  std::bernoulli_distribution coin(keep);
  for (int u = 0; u < n; ++u) {
    for (int w = u + 1; w < n; ++w) {
      if (touch(h, psi.images[static_cast<std::size_t>(u)], psi.images[static_cast<std::size_t>(w)]) && coin(rng)) {
        edges.push_back(VertexSet{u, w});
      }
    }
  }
  Hypergraph gh(names, edges, VertexSet::range(n));
  return {primal_graph(gh), psi};
}

// ---------------------------------------------------------------- definitional checks

// Adjacency straight from the edge lists.
std::vector<VertexSet> adjacency(const Hypergraph& h) {
  std::vector<VertexSet> adj(static_cast<std::size_t>(h.universe_size()));
  for (const auto& e : h.edges()) {
    e.for_each([&](int u) { adj[static_cast<std::size_t>(u)] |= e - VertexSet{u}; });
  }
  return adj;
}

Rational b_pi_direct(const SetFunctionOracle& b, const std::vector<VertexSet>& adj, const std::vector<int>& order,
                     const VertexSet& z) {
  Rational sum;
  VertexSet seen;
  for (int v : order) {
    if (z.contains(v)) {
      VertexSet before = seen & adj[static_cast<std::size_t>(v)];
      VertexSet with = before;
      with.insert(v);
      sum += b(with) - b(before);
      seen.insert(v);
    }
  }
  return sum;
}

// Minimum over all orderings of Z.
Rational b_star_brute(const SetFunctionOracle& b, const std::vector<VertexSet>& adj, const VertexSet& z) {
  std::vector<int> order = z.elements();
  std::optional<Rational> best;
  do {
    Rational v = b_pi_direct(b, adj, order, z);
    if (!best || v < *best) best = v;
  } while (std::next_permutation(order.begin(), order.end()));
  return best ? *best : Rational(0);
}

bool separated_brute(const std::vector<VertexSet>& adj, const VertexSet& removed, const VertexSet& x,
                     const VertexSet& y) {
  VertexSet seen = x - removed;
  std::vector<int> stack = seen.elements();
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (y.contains(v)) return false;
    (adj[static_cast<std::size_t>(v)] - removed - seen).for_each([&](int u) {
      seen.insert(u);
      stack.push_back(u);
    });
  }
  return true;
}

// Calls fn on every simple path (as a vertex list) from X to Y.
void for_each_simple_path(const std::vector<VertexSet>& adj, const VertexSet& x, const VertexSet& y,
                          const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> path;
  VertexSet on;
  std::function<void()> dfs = [&]() {
    if (y.contains(path.back())) fn(path);
    (adj[static_cast<std::size_t>(path.back())] - on).for_each([&](int v) {
      path.push_back(v);
      on.insert(v);
      dfs();
      on.erase(v);
      path.pop_back();
    });
  };
  x.for_each([&](int v) {
    path = {v};
    on = VertexSet{v};
    dfs();
  });
}

Rational path_cover(const Hypergraph& h, const std::vector<int>& path, const EdgeWeights& s) {
  Rational sum;
  for (int e = 0; e < h.edge_count(); ++e) {
    for (int v : path) {
      if (h.edges()[static_cast<std::size_t>(e)].contains(v)) {
        sum += s[static_cast<std::size_t>(e)];
        break;
      }
    }
  }
  return sum;
}

// Separator LP with one row per simple path, no minimality pruning.
Rational separator_brute(const Hypergraph& h, const std::vector<VertexSet>& adj, const VertexSet& a,
                         const VertexSet& b) {
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  for (int e = 0; e < h.edge_count(); ++e) lp.add_variable(1);
  for_each_simple_path(adj, a, b, [&](const std::vector<int>& path) {
    std::vector<Rational> row(static_cast<std::size_t>(h.edge_count()));
    for (int e = 0; e < h.edge_count(); ++e) {
      for (int v : path) {
        if (h.edges()[static_cast<std::size_t>(e)].contains(v)) row[static_cast<std::size_t>(e)] = 1;
      }
    }
    lp.add_constraint(row, Relation::GreaterEqual, 1);
  });
  if (lp.constraints.empty()) return 0;
  return solve(lp).objective;
}

// Every ordered pair of disjoint nonempty A, B ⊆ W needs a separator of weight >= lambda min(mu(A), mu(B)).
bool connected_brute(const Hypergraph& h, const VertexWeights& mu, const VertexSet& w, const Rational& lambda) {
  const auto adj = adjacency(h);
  std::vector<int> verts = w.elements();
  const std::size_t n = verts.size();
  std::vector<int> side(n, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == n) {
      VertexSet a, b;
      Rational ma, mb;
      for (std::size_t t = 0; t < n; ++t) {
        const auto v = static_cast<std::size_t>(verts[t]);
        if (side[t] == 1) {
          a.insert(verts[t]);
          ma += mu[v];
        } else if (side[t] == 2) {
          b.insert(verts[t]);
          mb += mu[v];
        }
      }
      if (a.empty() || b.empty()) return true;
      return !(separator_brute(h, adj, a, b) < lambda * std::min(ma, mb));
    }
    for (int s = 0; s < 3; ++s) {
      side[i] = s;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

// Tree shape, every edge inside a bag, every vertex in a bag, connected occurrences.
std::string decomposition_problem(const VertexSet& vertices, const std::vector<VertexSet>& edges,
                                  const TreeDecomposition& t) {
  const int n = t.size();
  if (n == 0) return vertices.empty() ? "" : "no bags";
  if (static_cast<int>(t.parent.size()) != n) return "parent list size";
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int p = t.parent[static_cast<std::size_t>(i)];
    if (p == -1) {
      ++roots;
    } else if (p < 0 || p >= n || p == i) {
      return "bad parent of node " + std::to_string(i);
    }
  }
  if (roots != 1) return std::to_string(roots) + " roots";
  for (int i = 0; i < n; ++i) {
    int steps = 0;
    for (int p = i; p != -1; p = t.parent[static_cast<std::size_t>(p)]) {
      if (++steps > n) return "cycle through node " + std::to_string(i);
    }
  }
  for (const auto& e : edges) {
    bool inside = false;
    for (const auto& bag : t.bags) inside |= e.is_subset_of(bag);
    if (!inside) return "edge outside every bag";
  }
  std::string problem;
  vertices.for_each([&](int v) {
    if (!problem.empty()) return;
    int tops = 0;
    for (int i = 0; i < n; ++i) {
      const int p = t.parent[static_cast<std::size_t>(i)];
      if (t.bags[static_cast<std::size_t>(i)].contains(v) && (p == -1 || !t.bags[static_cast<std::size_t>(p)].contains(v))) {
        ++tops;
      }
    }
    if (tops != 1) problem = "vertex " + std::to_string(v) + " occurs in " + std::to_string(tops) + " subtrees";
  });
  return problem;
}

// sol_I(S) by filtering D^S against every constraint meeting S, memoized per set.
class SolBrute {
 public:
  explicit SolBrute(const CspInstance& inst) : inst_(inst) {}

  const std::vector<Tuple>& operator()(const VertexSet& s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    std::vector<Tuple> out;
    const std::vector<int> sv = s.elements();
    for (auto& t : full_tuples(static_cast<int>(sv.size()), inst_.domain_size())) {
      bool ok = true;
      for (const auto& c : inst_.constraints()) {
        if (c.scope.intersects(s) && !agrees(c, sv, t)) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(t);
    }
    return memo_.emplace(s, std::move(out)).first->second;
  }

  bool small(const VertexSet& s, std::uint64_t m) {
    bool ok = true;
    for_each_subset(s, [&](const VertexSet& sub) {
      if (ok && !sub.empty() && (*this)(sub).size() > m) ok = false;
    });
    return ok;
  }

 private:
  static bool agrees(const Constraint& c, const std::vector<int>& sv, const Tuple& t) {
    const std::vector<int> cv = c.scope.elements();
    for (const auto& r : c.relation) {
      bool ok = true;
      for (std::size_t i = 0; i < cv.size() && ok; ++i) {
        for (std::size_t j = 0; j < sv.size(); ++j) {
          if (sv[j] == cv[i] && t[j] != r[i]) ok = false;
        }
      }
      if (ok) return true;
    }
    return false;
  }

  const CspInstance& inst_;
  std::map<VertexSet, std::vector<Tuple>> memo_;
};

std::vector<Tuple> project_tuples(const std::vector<Tuple>& tuples, const VertexSet& a, const VertexSet& b) {
  const std::vector<int> av = a.elements();
  std::vector<Tuple> out;
  for (const auto& t : tuples) {
    Tuple r;
    for (std::size_t i = 0; i < av.size(); ++i) {
      if (b.contains(av[i])) r.push_back(t[i]);
    }
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<VertexSet> nonempty_subsets(const VertexSet& s) {
  std::vector<VertexSet> out;
  for_each_subset(s, [&](const VertexSet& sub) {
    if (!sub.empty()) out.push_back(sub);
  });
  return out;
}

// Definitions of M-consistency and (N, c, eps)-uniformity, all pairs enumerated.
bool consistent_brute(const CspInstance& inst, SolBrute& sol, std::uint64_t m) {
  for (const auto& a : nonempty_subsets(inst.variables())) {
    if (!sol.small(a, m)) continue;
    for (const auto& b : nonempty_subsets(a)) {
      if (project_tuples(sol(a), a, b) != sol(b)) return false;
    }
  }
  return true;
}

// Unions of two small sets with at most M solutions are small.
bool union_closed_brute(const CspInstance& inst, SolBrute& sol, std::uint64_t m) {
  std::vector<VertexSet> small;
  for (const auto& s : nonempty_subsets(inst.variables())) {
    if (sol.small(s, m)) small.push_back(s);
  }
  for (const auto& x : small) {
    for (const auto& y : small) {
      const VertexSet u = x | y;
      if (sol(u).size() <= m && !sol.small(u, m)) return false;
    }
  }
  return true;
}

bool uniform_brute(const CspInstance& inst, SolBrute& sol, std::uint64_t n, const Rational& c, const Rational& eps) {
  const std::uint64_t m = floor_power(n, c).get_ui();
  for (const auto& a : nonempty_subsets(inst.variables())) {
    if (!sol.small(a, m)) continue;
    const auto& sa = sol(a);
    for (const auto& b : nonempty_subsets(a)) {
      if (b == a) continue;
      std::map<Tuple, std::uint64_t> ext;
      for (const auto& t : sa) ++ext[project_tuples({t}, a, b).front()];
      std::uint64_t mx = 0;
      for (const auto& [t, k] : ext) mx = std::max(mx, k);
      if (mx == 0) continue;
      Rational ratio(BigInt(mx) * BigInt(sol(b).size()), BigInt(sa.size()));
      ratio.canonicalize();
      if (compare_to_power(ratio, n, eps) > 0) return false;
    }
  }
  return true;
}

bool cnf_brute(const CnfFormula& phi) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << phi.num_vars); ++mask) {
    bool all = true;
    for (const auto& c : phi.clauses) {
      bool sat = false;
      for (int lit : c) sat |= (lit > 0) == (((mask >> (std::abs(lit) - 1)) & 1U) != 0);
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Checks every constraint tuple by tuple.
bool satisfies_direct(const CspInstance& inst, const Assignment& a) {
  for (const auto& c : inst.constraints()) {
    Tuple t;
    for (int v : c.scope.elements()) {
      if (v >= static_cast<int>(a.size()) || a[static_cast<std::size_t>(v)] == kUnassigned) return false;
      t.push_back(a[static_cast<std::size_t>(v)]);
    }
    if (std::find(c.relation.begin(), c.relation.end(), t) == c.relation.end()) return false;
  }
  return true;
}

bool independent_direct(const Hypergraph& h, const VertexWeights& mu) {
  for (const auto& x : mu) {
    if (x < 0) return false;
  }
  for (const auto& e : h.edges()) {
    if (total(mu, e) > 1) return false;
  }
  return true;
}

BigInt power(unsigned long base, int e) {
  BigInt p = 1;
  for (int i = 0; i < e; ++i) p *= base;
  return p;
}

// ---------------------------------------------------------------- suites

void widths_case(int index, std::mt19937_64&, CaseLog& log) {
  auto check_td = [&](const Hypergraph& h, const TreeDecomposition& t, const std::string& what) {
    std::string p = decomposition_problem(h.vertices() - h.isolated_vertices(), h.edges(), t);
    log.expect(p.empty(), [&] { return what + " decomposition invalid: " + p; });
  };
  if (index < 6) {
    const int r = index + 1;
    Hypergraph h = fixture_hypergraph("single-edge-" + std::to_string(r));
    auto tw = treewidth(h);
    log.expect(tw.width == r - 1, [&] { return "single edge of size " + std::to_string(r) + ": tw " + std::to_string(tw.width); });
    check_td(h, tw.decomposition, "tw");
    return;
  }
  if (index == 6) {
    Hypergraph h = fixture_hypergraph("q1");
    auto ghw = generalized_hypertree_width(h);
    auto fhw = fractional_hypertree_width(h);
    log.expect(ghw.width == 1, [&] { return "Q1 ghw " + std::to_string(ghw.width); });
    log.expect(fhw.width == 1, [&] { return "Q1 fhw " + str(fhw.width); });
    check_td(h, ghw.decomposition, "ghw");
    check_td(h, fhw.decomposition, "fhw");
    return;
  }
  if (index == 7) {
    Hypergraph h = fixture_hypergraph("k4");
    auto tw = treewidth(h);
    auto fhw = fractional_hypertree_width(h);
    log.expect(tw.width == 3, [&] { return "K4 tw " + std::to_string(tw.width); });
    log.expect(fhw.width == 2, [&] { return "K4 fhw " + str(fhw.width); });
    check_td(h, tw.decomposition, "tw");
    check_td(h, fhw.decomposition, "fhw");
    return;
  }
  Hypergraph h = fixture_hypergraph("fano");
  const int rho = edge_cover_number(h, h.vertices());
  const Rational rho_star = fractional_edge_cover_number(h, h.vertices());
  auto fhw = fractional_hypertree_width(h);
  log.expect(rho == 3, [&] { return "Fano rho " + std::to_string(rho); });
  log.expect(rho_star == frac(7, 3), [&] { return "Fano rho* " + str(rho_star); });
  log.expect(fhw.width == frac(7, 3), [&] { return "Fano fhw " + str(fhw.width); });
  check_td(h, fhw.decomposition, "fhw");
}

void duality_case(int index, std::mt19937_64& rng, CaseLog& log) {
  const int n = 3 + index % 6;
  Hypergraph h = random_hypergraph(rng, n, n - 2 + index % 3);
  std::vector<int> verts = h.vertices().elements();
  std::shuffle(verts.begin(), verts.end(), rng);
  VertexSet x{verts[0]}, y{verts[1]};
  if (n >= 5 && index % 2) x.insert(verts[2]);
  if (n >= 6 && index % 3 == 0) y.insert(verts[3]);
  auto flow = max_flow(h, x, y);
  auto sep = min_fractional_separator(h, x, y);
  log.expect(flow.value == sep.weight, [&] { return "flow " + str(flow.value) + " != separator " + str(sep.weight); });
  log.expect(flow.flow.value() == flow.value, [&] { return "flow paths do not add up to the value"; });
  log.expect(total(sep.s) == sep.weight, [&] { return "separator weights do not add up"; });
  const auto adj = adjacency(h);
  // flow: X-Y paths within capacities
  EdgeWeights load(static_cast<std::size_t>(h.edge_count()));
  for (std::size_t i = 0; i < flow.flow.paths.size(); ++i) {
    const auto& p = flow.flow.paths[i].vertices;
    const Rational& w = flow.flow.weights[i];
    bool ok = !p.empty() && x.contains(p.front()) && y.contains(p.back()) && w >= 0;
    for (std::size_t j = 1; ok && j < p.size(); ++j) ok = adj[static_cast<std::size_t>(p[j - 1])].contains(p[j]);
    log.expect(ok, [&] { return "flow path " + std::to_string(i) + " is not an X-Y path"; });
    for (int e = 0; e < h.edge_count(); ++e) {
      if (h.edges()[static_cast<std::size_t>(e)].intersects(VertexSet::of(p))) load[static_cast<std::size_t>(e)] += w;
    }
  }
  for (int e = 0; e < h.edge_count(); ++e) {
    log.expect(load[static_cast<std::size_t>(e)] <= 1, [&] { return "edge " + h.edge_key(e) + " overloaded"; });
  }
  // separator: every simple X-Y path covered
  bool covered = true;
  for_each_simple_path(adj, x, y, [&](const std::vector<int>& p) { covered &= path_cover(h, p, sep.s) >= 1; });
  for (const auto& s : sep.s) covered &= s >= 0;
  log.expect(covered, [&] { return "separator misses a simple path"; });
  log.count(flow.value > 0 ? "positive" : "zero");
}

struct PropFixture {
  Hypergraph h;
  SetFunctionOracle b;
};

PropFixture prop_fixture(int index, std::mt19937_64& rng) {
  const int n = 4 + index % 3;
  Hypergraph h = random_hypergraph(rng, n, n - 1 + index % 3);
  SetFunctionOracle b = random_submodular(rng, h);
  return {h, b};
}

void prop52_case(int index, std::mt19937_64& rng, CaseLog& log) {
  auto [h, b] = prop_fixture(index, rng);
  auto props = check_properties(b, h);
  log.expect(props.all_hold(), [&] { return "oracle not edge-dominated monotone submodular"; });
  const auto adj = adjacency(h);
  const Graph g = primal_graph(h);
  const std::vector<int> verts = h.vertices().elements();
  const std::size_t k = verts.size();
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<VertexSet> subsets(full + 1);
  for (std::size_t mask = 0; mask <= full; ++mask) {
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1U) subsets[mask].insert(verts[i]);
    }
  }
  std::vector<std::optional<Rational>> best(full + 1);
  std::vector<Rational> m((full + 1) * k);
  std::vector<int> pi = verts;
  long orderings = 0;
  do {
    ++orderings;
    for (std::size_t mask = 0; mask <= full; ++mask) {
      const VertexSet& z = subsets[mask];
      const Rational lib = b_pi(b, h, pi, z);
      const Rational direct = b_pi_direct(b, adj, pi, z);
      const Rational bz = b(z);
      log.expect(lib == direct, [&] { return "b_pi " + h.format(z) + " differs from the definition"; });
      log.expect(lib >= bz, [&] { return "(1) b_pi(Z) < b(Z) at " + h.format(z); });
      if (g.is_clique(z)) log.expect(lib == bz, [&] { return "(3) clique " + h.format(z) + " not exact"; });
      if (!best[mask] || direct < *best[mask]) best[mask] = direct;
      for (std::size_t i = 0; i < k; ++i) m[mask * k + i] = marginal(b, h, pi, z, verts[i]);
    }
    // (4), with (5) as the case Z1 = V
    for (std::size_t z1 = 0; z1 <= full; ++z1) {
      for (std::size_t z2 = z1;; z2 = (z2 - 1) & z1) {
        for (std::size_t i = 0; i < k; ++i) {
          log.expect(m[z1 * k + i] <= m[z2 * k + i], [&] {
            return "(4) marginal of " + h.name(verts[i]) + " grows from " + h.format(subsets[z1]) + " to " +
                   h.format(subsets[z2]);
          });
        }
        if (z2 == 0) break;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t mask = 0; mask <= full; ++mask) {
        log.expect(m[full * k + i] <= m[mask * k + i], [&] { return "(5) at " + h.name(verts[i]); });
      }
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  log.count("orderings", orderings);
  BStar bs(b, h);
  std::vector<Rational> star(full + 1);
  for (std::size_t mask = 0; mask <= full; ++mask) {
    const VertexSet& z = subsets[mask];
    star[mask] = bs(z).value;
    log.expect(star[mask] == *best[mask], [&] { return "b*(" + h.format(z) + ") differs from the minimum over orderings"; });
    log.expect(star[mask] >= b(z), [&] { return "(2) b*(Z) < b(Z) at " + h.format(z); });
  }
  for (std::size_t x = 0; x <= full; ++x) {
    for (std::size_t y = 0; y <= full; ++y) {
      log.expect(star[x | y] <= star[x] + star[y], [&] {
        return "(6) b* not subadditive on " + h.format(subsets[x]) + ", " + h.format(subsets[y]);
      });
    }
  }
  // additivity on non-touching sets
  for (std::size_t a = 1; a <= full; ++a) {
    VertexSet reach = subsets[a];
    subsets[a].for_each([&](int v) { reach |= adj[static_cast<std::size_t>(v)]; });
    for (std::size_t c = 1; c <= full; ++c) {
      if ((a & c) || subsets[c].intersects(reach)) continue;
      log.count("additive-pairs");
      log.expect(star[a | c] == star[a] + star[c], [&] {
        return "b* not additive on " + h.format(subsets[a]) + ", " + h.format(subsets[c]);
      });
    }
  }
}

void rho_star_case(int index, std::mt19937_64& rng, CaseLog& log) {
  auto [h, b] = prop_fixture(index, rng);
  for_each_subset(h.vertices(), [&](const VertexSet& s) {
    const Rational rs = fractional_edge_cover_number(h, s);
    log.expect(b(s) <= rs, [&] { return "b(" + h.format(s) + ") = " + str(b(s)) + " > rho* = " + str(rs); });
  });
  auto bw = b_width(h, b.as_bag_cost());
  auto fhw = fractional_hypertree_width(h);
  log.expect(bw.width <= fhw.width, [&] { return "b-width " + str(bw.width) + " > fhw " + str(fhw.width); });
  std::string p = decomposition_problem(h.vertices(), h.edges(), bw.decomposition);
  log.expect(p.empty(), [&] { return "b-width decomposition invalid: " + p; });
  Rational w;
  for (const auto& bag : bw.decomposition.bags) w = std::max(w, b(bag));
  log.expect(w == bw.width, [&] { return "b-width decomposition has width " + str(w); });
  if (bw.width < fhw.width) log.count("strict");
}

void rounding_case(int index, std::mt19937_64& rng, CaseLog& log) {
  std::uniform_int_distribution<int> extra(0, 3);
  const int n = 4 + index % 5;
  Hypergraph h = random_hypergraph(rng, n, n - 1);
  std::vector<int> verts = h.vertices().elements();
  std::shuffle(verts.begin(), verts.end(), rng);
  VertexSet x{verts[0]}, y{verts[1]};
  if (index % 3 == 0 && n > 4) {
    x.insert(verts[2]);
    y.insert(verts[3]);
  }
  auto sep = min_fractional_separator(h, x, y);
  EdgeWeights s = sep.s;
  for (auto& v : s) v += frac(extra(rng), 8);
  auto b = index % 2 == 0 ? random_submodular(rng, h) : flow_to_submodular(max_flow(h, x, y).flow);
  auto res = round_fractional_separator(h, x, y, s, b);
  const auto adj = adjacency(h);
  log.expect(separated_brute(adj, res.separator, x, y), [&] { return h.format(res.separator) + " does not separate"; });
  log.expect(res.weight == total(s), [&] { return "reported weight " + str(res.weight); });
  log.expect(res.cost <= 31 * total(s), [&] { return "cost " + str(res.cost) + " > 31 * " + str(total(s)); });
  log.expect(res.cost == b_pi_direct(b, adj, res.state.order, res.separator),
             [&] { return "cost is not b_pi of the separator"; });
  log.expect(res.b_value == b(res.separator), [&] { return "b value mismatch"; });
  if (res.separator.size() <= 7) {
    log.expect(b_star_brute(b, adj, res.separator) <= res.cost, [&] { return "b* exceeds the cost"; });
  }
  log.count(res.separator.empty() ? "empty" : "nonempty");
}

void split_case(int index, std::mt19937_64& rng, CaseLog& log) {
  const int n = 3 + index % 3;
  const int d = 2 + (index / 3) % 3;
  auto inst = random_csp(rng, n, d, 2 + index % 3, 2 + index % 2, 0.55);
  const std::uint64_t big_n = std::max<std::uint64_t>(2, inst.max_relation_size());
  const Rational c = 1 + frac(index % 3, 2);
  const Rational eps = frac(1, 2 + index % 6);
  auto out = split_uniform(inst, big_n, c, eps);
  const std::uint64_t m = small_bound(big_n, c);
  SolBrute base(inst);
  std::vector<Tuple> all;
  for (std::size_t i = 0; i < out.outputs.size(); ++i) {
    const auto& o = out.outputs[i];
    SolBrute sol(o);
    const std::string tag = "output " + std::to_string(i);
    log.expect(uniform_brute(o, sol, big_n, c, eps), [&] { return tag + " not uniform"; });
    log.expect(consistent_brute(o, sol, m), [&] { return tag + " not consistent"; });
    log.expect(union_closed_brute(o, sol, m), [&] { return tag + " has a union gap"; });
    bool nontrivial = true;
    o.variables().for_each([&](int v) { nontrivial &= !sol(VertexSet{v}).empty(); });
    log.expect(nontrivial, [&] { return tag + " trivial"; });
    bool refines = true;
    for (const auto& con : inst.constraints()) {
      const Constraint* r = o.find(con.scope);
      refines &= r && std::includes(con.relation.begin(), con.relation.end(), r->relation.begin(), r->relation.end());
    }
    log.expect(refines, [&] { return tag + " not a refinement"; });
    const auto& s = sol(inst.variables());
    all.insert(all.end(), s.begin(), s.end());
  }
  const std::size_t listed = all.size();
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  log.expect(listed == all.size(), [&] { return "outputs share a solution"; });
  log.expect(all == base(inst.variables()), [&] { return "outputs do not cover sol(I)"; });
  for (std::size_t i = 0; i < out.trace.nodes.size(); ++i) {
    const auto& node = out.trace.nodes[i];
    if (node.outcome == SplitNode::Outcome::Split) {
      log.count("splits");
      Rational shrink(BigInt(node.sol_b), BigInt(node.large_side));
      shrink.canonicalize();
      log.expect(node.large_side > 0 && compare_to_power(shrink, big_n, eps / 2) >= 0,
                 [&] { return "split at node " + std::to_string(i) + " drops less than (eps/2) log N"; });
    }
    if (node.parent < 0 || node.small_sets.empty()) continue;
    const auto& up = out.trace.nodes[static_cast<std::size_t>(node.parent)];
    if (up.small_sets != node.small_sets) continue;
    log.count("weight-comparisons");
    log.expect(node.weight <= up.weight - LogValue(eps / 2),
               [&] { return "trace weight at node " + std::to_string(i) + " did not drop by eps/2"; });
  }
  log.count("outputs", static_cast<long>(out.outputs.size()));
}

void uniform_b_case(int index, std::mt19937_64& rng, CaseLog& log) {
  const int n = 3 + index % 2;
  auto inst = random_csp(rng, n, 2 + index % 2, 3, 2, 0.55);
  const std::uint64_t big_n = inst.max_relation_size();
  if (big_n < 2) {
    log.count("skipped");
    return;
  }
  const Rational eps = frac(1, n);
  const Rational c = 1 + frac(index % 3, 3);
  auto out = split_uniform(inst, big_n, c, eps * eps * eps);
  const Hypergraph h = inst.hypergraph();
  for (std::size_t i = 0; i < out.outputs.size(); ++i) {
    auto b = build_submodular_from_uniform(out.outputs[i], big_n, c, h);
    auto report = check_log_properties(b, h);
    log.expect(report.all_hold(), [&] {
      return "output " + std::to_string(i) + ": " + (report.counterexamples.empty() ? "" : report.counterexamples[0]);
    });
    // the same properties straight from the definitions
    std::map<VertexSet, LogValue> val;
    for_each_subset(h.vertices(), [&](const VertexSet& s) { val.emplace(s, b(s)); });
    log.expect(val.at(VertexSet{}) == LogValue(Rational(0)), [&] { return "b(empty) != 0"; });
    for (const auto& e : h.edges()) log.expect(val.at(e) <= LogValue(Rational(1)), [&] { return "edge above 1"; });
    const std::vector<int> verts = h.vertices().elements();
    for (const auto& [s, bs] : val) {
      for (int u : verts) {
        if (s.contains(u)) continue;
        VertexSet su = s;
        su.insert(u);
        log.expect(bs <= val.at(su), [&] { return "not monotone at " + h.format(su); });
        for (int v : verts) {
          if (v <= u || s.contains(v)) continue;
          VertexSet sv = s, suv = su;
          sv.insert(v);
          suv.insert(v);
          log.expect(val.at(suv) + bs <= val.at(su) + val.at(sv), [&] { return "not submodular at " + h.format(suv); });
        }
      }
    }
    log.count("functions");
  }
}

const std::vector<std::string>& fpt_shapes() {
  static const std::vector<std::string> shapes = {"single-edge-3", "path4", "triangle", "cycle5", "k4"};
  return shapes;
}

void fpt_case(int index, std::mt19937_64& rng, CaseLog& log) {
  // Q1 is slow to split, so it takes every 25th case only
  const std::string shape = index % 25 == 24 ? "q1" : fpt_shapes()[static_cast<std::size_t>(index) % fpt_shapes().size()];
  Hypergraph h = fixture_hypergraph(shape);
  auto inst = random_csp_on(rng, h, shape == "q1" ? 2 : 2 + (index / 5) % 2, 0.5);
  const Rational c0 = fractional_hypertree_width(h).width;
  auto r = solve_fpt(inst, c0);
  SolBrute sol(inst);
  const bool sat = !sol(inst.variables()).empty();
  log.expect(r.verdict != FptResult::Verdict::BoundViolated, [&] { return shape + ": " + r.violation; });
  log.expect((r.verdict == FptResult::Verdict::Sat) == sat, [&] { return shape + ": verdict " + to_string(r.verdict); });
  if (r.verdict == FptResult::Verdict::Sat) {
    log.expect(satisfies_direct(inst, r.assignment), [&] { return shape + ": SAT without a satisfying assignment"; });
  }
  log.count(sat ? "sat" : "unsat");
  log.count("method-" + r.method);
}

const std::vector<std::string>& decompose_shapes() {
  static const std::vector<std::string> shapes = {"single-edge-4", "path4", "triangle", "cycle5",
                                                               "k4",            "q1",    "fano",     "grid3"};
  return shapes;
}

void decompose_case(int index, std::mt19937_64& rng, CaseLog& log) {
  const auto& shape = decompose_shapes()[static_cast<std::size_t>(index) % decompose_shapes().size()];
  Hypergraph h = fixture_hypergraph(shape);
  // ten (oracle, w) combinations per shape
  const int combo = index / static_cast<int>(decompose_shapes().size());
  const int kind = combo % 4;
  auto b = kind < 2 ? random_submodular(rng, h) : kind == 2 ? random_modular(rng, h) : uniform_modular(h);
  const Rational w = frac(combo % 5, 4);
  DecomposeOptions options;
  auto out = decompose_or_highly_connected(h, b, w, options);
  const auto adj = adjacency(h);
  const std::string tag = shape + " w=" + str(w);
  if (out.decomposed) {
    log.count("decomposed");
    std::string p = decomposition_problem(h.vertices(), h.edges(), out.decomposition);
    log.expect(p.empty(), [&] { return tag + ": " + p; });
    const Rational bound = Rational(3 * (w + 1)) / 2;
    Rational widest;
    for (const auto& bag : out.decomposition.bags) {
      Rational bs = bag.size() <= 8 ? b_star_brute(b, adj, bag) : b_star(b, h, bag).value;
      widest = std::max(widest, bs);
      log.expect(bs <= bound, [&] { return tag + ": bag " + h.format(bag) + " has b* " + str(bs); });
    }
    log.expect(widest == out.width, [&] { return tag + ": reported width " + str(out.width); });
  } else {
    log.count("connected");
    if (out.w.size() > 1) log.count("connected-nontrivial");
    log.expect(independent_direct(h, out.mu), [&] { return tag + ": mu is not a fractional independent set"; });
    log.expect(total(out.mu, out.w) >= w, [&] { return tag + ": mu(W) below w"; });
    log.expect(out.certificate.connected, [&] { return tag + ": certificate says not connected"; });
    if (out.w.size() <= 6) {
      log.expect(connected_brute(h, out.mu, out.w, options.lambda), [&] { return tag + ": W not connected"; });
    } else {
      log.expect(check_connectivity_certificate(h, out.certificate).empty(), [&] { return tag + ": bad certificate"; });
    }
  }
}

// every tenth case is a simulation fixture, the rest are 3SAT formulas
bool is_simulation_case(int index) { return index % 10 == 9; }

void sat_sim_case(int index, std::mt19937_64& rng, CaseLog& log) {
  if (!is_simulation_case(index)) {
    const int n = 1 + index % 8;
    const int m = std::uniform_int_distribution<int>(1, 5 * n + 1)(rng);
    auto phi = random_3sat(rng, n, m);
    auto csp = sat_to_csp(phi);
    BruteForceOptions opts;
    opts.order = clause_order(phi, csp);
    auto a = brute_force_solve(csp, opts);
    const bool sat = cnf_brute(phi);
    log.expect(a.has_value() == sat, [&] { return "n=" + std::to_string(n) + " m=" + std::to_string(m) + ": satisfiability differs"; });
    if (a) {
      log.expect(phi.satisfied_by(decode_sat_assignment(phi, csp, *a)), [&] { return "decoded assignment fails"; });
    }
    bool binary = true;
    for (const auto& c : csp.constraints()) binary &= c.scope.size() == 2;
    log.expect(binary && csp.variable_count() == n + m, [&] { return "reduction shape"; });
    log.count(sat ? "3sat-sat" : "3sat-unsat");
    return;
  }
  static const std::vector<std::string> hosts = {"grid3", "q1", "k4"};
  const int j = index / 10;
  Hypergraph h = fixture_hypergraph(hosts[static_cast<std::size_t>(j) % hosts.size()]);
  auto [g, psi] = random_embedding(rng, h, 3 + j % 3, 2, 0.7);
  const int d = 2 + j % 2;
  std::vector<std::string> domain;
  for (int v = 0; v < d; ++v) domain.push_back(std::to_string(v));
  std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> cons;
  for (auto [u, w] : g.edge_list()) {
    std::vector<Tuple> rel;
    for (auto& t : full_tuples(2, d)) {
      if (rng() % 3) rel.push_back(t);
    }
    cons.push_back({{u, w}, rel});
  }
  CspInstance i1(g.names, domain, cons);
  auto sim = simulate_csp_via_embedding(i1, h, psi);
  SolBrute sol1(i1);
  const bool sat1 = !sol1(i1.variables()).empty();
  auto s2 = brute_force_solve(sim.instance);
  log.expect(sat1 == s2.has_value(), [&] { return "simulation changes satisfiability"; });
  if (s2) {
    log.expect(satisfies_direct(i1, sim.decode(*s2, i1.universe_size())), [&] { return "decoded I2 solution fails I1"; });
  }
  if (sat1) {
    // first I1 solution, rebuilt as an assignment over the universe
    Assignment a1(static_cast<std::size_t>(i1.universe_size()), kUnassigned);
    const auto vars = i1.variables().elements();
    const auto& t = sol1(i1.variables()).front();
    for (std::size_t k = 0; k < vars.size(); ++k) a1[static_cast<std::size_t>(vars[k])] = t[k];
    log.expect(satisfies_direct(sim.instance, sim.encode(a1)), [&] { return "encoded I1 solution fails I2"; });
  }
  const int q = sim.depths.edge_depth;
  for (std::size_t e = 0; e < sim.relation_sizes.size(); ++e) {
    const BigInt size(static_cast<unsigned long>(sim.relation_sizes[e]));
    log.expect(size <= power(static_cast<unsigned long>(d), q), [&] { return "relation above |D1|^q"; });
    log.expect(size <= power(static_cast<unsigned long>(d), sim.depths.weak_edge_depth),
               [&] { return "relation above |D1|^(weak depth)"; });
  }
  log.count(sat1 ? "sim-sat" : "sim-unsat");
}

void transfer_case(int index, std::mt19937_64& rng, CaseLog& log) {
  static const std::vector<std::string> hosts = {"grid3", "q1", "k4"};
  Hypergraph h = fixture_hypergraph(hosts[static_cast<std::size_t>(index) % hosts.size()]);
  auto [g, psi] = random_embedding(rng, h, 2 + index % 8, index % 2 ? 1 : 3, 0.6);
  const int q = embedding_depths(h, psi).edge_depth;
  auto mu = depth_weights(h, psi);
  log.expect(independent_direct(h, mu), [&] { return "depth weights not independent"; });
  std::vector<VertexSet> g_edges;
  for (auto [u, w] : g.edge_list()) g_edges.push_back(VertexSet{u, w});
  const std::vector<std::pair<std::string, TreeDecomposition>> sources = {
      {"tw", treewidth(h).decomposition},
      {"mu", mu_width(h, mu).decomposition},
      {"single", TreeDecomposition::single_bag(h.vertices())}};
  for (const auto& [what, t] : sources) {
    auto out = transfer_decomposition(g, h, psi, t);
    std::string p = decomposition_problem(g.vertices, g_edges, out);
    log.expect(p.empty(), [&, &what = what] { return what + ": " + p; });
    log.expect(out.parent == t.parent, [&, &what = what] { return what + ": tree changed"; });
    Rational w;
    for (const auto& bag : t.bags) w = std::max(w, total(mu, bag));
    for (const auto& bag : out.bags) {
      log.expect(Rational(bag.size()) <= q * w, [&, &what = what] {
        return what + ": bag of size " + std::to_string(bag.size()) + " > q w = " + str(q * w);
      });
    }
  }
  log.count("q=" + std::to_string(q));
}

void require_positive(const std::map<std::string, long>& counters, CaseLog& log, const std::vector<std::string>& keys) {
  for (const auto& k : keys) {
    auto it = counters.find(k);
    log.expect(it != counters.end() && it->second > 0, [&] { return "no case reached '" + k + "'"; });
  }
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  const SuiteInfo& info = suite_info(name);
  if (name == "widths") return run_cases(info, options, 1, widths_case);
  if (name == "duality") {
    return run_cases(info, options, 2, duality_case,
                     [](const auto& c, CaseLog& log) { require_positive(c, log, {"positive"}); });
  }
  if (name == "prop5.2") {
    return run_cases(info, options, 3, prop52_case,
                     [](const auto& c, CaseLog& log) { require_positive(c, log, {"additive-pairs"}); });
  }
  // same corpus as prop5.2
  if (name == "rho-star") return run_cases(info, options, 3, rho_star_case);
  if (name == "rounding") {
    return run_cases(info, options, 5, rounding_case,
                     [](const auto& c, CaseLog& log) { require_positive(c, log, {"nonempty"}); });
  }
  if (name == "split") {
    return run_cases(info, options, 6, split_case,
                     [](const auto& c, CaseLog& log) { require_positive(c, log, {"splits", "weight-comparisons"}); });
  }
  if (name == "uniform-b") {
    return run_cases(info, options, 7, uniform_b_case,
                     [](const auto& c, CaseLog& log) { require_positive(c, log, {"functions"}); });
  }
  if (name == "fpt") {
    return run_cases(info, options, 8, fpt_case,
                     [](const auto& c, CaseLog& log) { require_positive(c, log, {"sat", "unsat"}); });
  }
  if (name == "decompose") {
    return run_cases(info, options, 9, decompose_case,
                     [](const auto& c, CaseLog& log) { require_positive(c, log, {"decomposed", "connected", "connected-nontrivial"}); });
  }
  if (name == "sat-sim") {
    return run_cases(info, options, 10, sat_sim_case, [](const auto& c, CaseLog& log) {
      require_positive(c, log, {"3sat-sat", "3sat-unsat", "sim-sat", "sim-unsat"});
    });
  }
  return run_cases(info, options, 11, transfer_case);
}

}  // namespace subw
