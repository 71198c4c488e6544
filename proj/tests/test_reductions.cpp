#include <gtest/gtest.h>

#include <random>

#include "csp_oracles.hpp"
#include "subw/errors.hpp"
#include "subw/reductions.hpp"

using namespace subw;

namespace {

// Satisfiability by trying all 2^n assignments.
bool cnf_brute(const CnfFormula& phi) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << phi.num_vars); ++mask) {
    bool all = true;
    for (const auto& c : phi.clauses) {
      bool sat = false;
      for (int lit : c) {
        bool v = (mask >> (std::abs(lit) - 1)) & 1U;
        if ((lit > 0) == v) sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Clauses over three distinct variables with random signs.
CnfFormula random_3sat(std::mt19937_64& rng, int n, int m) {
  CnfFormula phi;
  phi.num_vars = n;
  std::uniform_int_distribution<int> sign(0, 1);
  for (int j = 0; j < m; ++j) {
    std::vector<int> vars(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<int> clause;
    for (int l = 0; l < std::min(3, n); ++l) clause.push_back(sign(rng) ? vars[static_cast<std::size_t>(l)] : -vars[static_cast<std::size_t>(l)]);
    phi.clauses.push_back(clause);
  }
  return phi;
}

BigInt oracle_pow(unsigned long base, int e) {
  BigInt p = 1;
  for (int i = 0; i < e; ++i) p *= base;
  return p;
}

Graph graph_of(const char* text) { return primal_graph(Hypergraph::parse(text)); }

Hypergraph grid3() {
  return Hypergraph::parse("a1 a2\na2 a3\nb1 b2\nb2 b3\nc1 c2\nc2 c3\na1 b1\nb1 c1\na2 b2\nb2 c2\na3 b3\nb3 c3\n");
}

// Depths recounted straight from the definitions.
DepthReport recount(const Hypergraph& h, const Embedding& psi) {
  DepthReport r;
  for (int v = 0; v < h.universe_size(); ++v) {
    int d = 0;
    for (const auto& img : psi.images) d += img.contains(v);
    r.vertex_depth = std::max(r.vertex_depth, d);
  }
  for (const auto& e : h.edges()) {
    int depth = 0, weak = 0;
    for (const auto& img : psi.images) {
      depth += (img & e).size();
      weak += !(img & e).empty();
    }
    r.edge_depth = std::max(r.edge_depth, depth);
    r.weak_edge_depth = std::max(r.weak_edge_depth, weak);
  }
  return r;
}

// Random connected image per G vertex (grown by random neighbours), then G gets a random
// subset of the touching pairs as edges. Returns the graph and a valid embedding.
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

}  // namespace

TEST(Dimacs, ParsesAndRoundTrips) {
  auto phi = CnfFormula::parse_dimacs("c example\np cnf 3 2\n1 -2 3 0\n-1\n2 0\n");
  EXPECT_EQ(phi.num_vars, 3);
  ASSERT_EQ(phi.clauses.size(), 2U);
  EXPECT_EQ(phi.clauses[1], (std::vector<int>{-1, 2}));
  EXPECT_EQ(CnfFormula::parse_dimacs(phi.to_dimacs()).clauses, phi.clauses);
  EXPECT_EQ(phi.literal_count(), 5);
}

TEST(Dimacs, RejectsMalformedInput) {
  EXPECT_THROW(CnfFormula::parse_dimacs("1 2 0\n"), DomainError);
  EXPECT_THROW(CnfFormula::parse_dimacs("p cnf 2 1\n1 3 0\n"), DomainError);
  EXPECT_THROW(CnfFormula::parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), DomainError);
  EXPECT_THROW(CnfFormula::parse_dimacs("p cnf 2 2\n1 2 0\n"), DomainError);
  EXPECT_THROW(CnfFormula::parse_dimacs("p cnf 2 1\n1 2\n"), DomainError);
  EXPECT_THROW(CnfFormula::parse_dimacs("p cnf 2 1\n1 x 0\n"), DomainError);
}

TEST(SatToCsp, SingleClause) {
  auto phi = CnfFormula::parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  auto csp = sat_to_csp(phi);
  EXPECT_EQ(csp.variable_count(), 4);
  EXPECT_EQ(csp.constraints().size(), 3U);
  EXPECT_EQ(csp.domain(), (std::vector<std::string>{"1", "2", "3"}));
  for (const auto& c : csp.constraints()) EXPECT_EQ(c.scope.size(), 2);
  EXPECT_TRUE(brute_force_solve(csp).has_value());
}

TEST(SatToCsp, ContradictionAndEmptyFormula) {
  auto contra = sat_to_csp(CnfFormula::parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"));
  EXPECT_FALSE(brute_force_solve(contra).has_value());
  auto empty = sat_to_csp(CnfFormula::parse_dimacs("p cnf 4 0\n"));
  EXPECT_EQ(empty.variable_count(), 4);
  EXPECT_TRUE(empty.constraints().empty());
  EXPECT_TRUE(brute_force_solve(empty).has_value());
  auto with_empty_clause = sat_to_csp(CnfFormula::parse_dimacs("p cnf 2 2\n1 2 0\n0\n"));
  EXPECT_FALSE(brute_force_solve(with_empty_clause).has_value());
}

TEST(SatToCsp, EquisatisfiableOnRandomFormulas) {
  std::mt19937_64 rng(7);
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + trial % 8;  // 3..10
    const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(5 * n));
    auto phi = random_3sat(rng, n, m);
    auto csp = sat_to_csp(phi);
    ASSERT_EQ(csp.variable_count(), n + m);
    ASSERT_EQ(static_cast<int>(csp.constraints().size()), phi.literal_count());
    ASSERT_EQ(csp.domain_size(), 3);
    BruteForceOptions bf;
    bf.order = clause_order(phi, csp);
    auto sol = brute_force_solve(csp, bf);
    ASSERT_EQ(sol.has_value(), cnf_brute(phi)) << phi.to_dimacs();
    if (sol) {
      ++sat;
      EXPECT_TRUE(phi.satisfied_by(decode_sat_assignment(phi, csp, *sol)));
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}

TEST(SatToCsp, ShortClausesRestrictTheClauseVariable) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    CnfFormula phi;
    phi.num_vars = 4;
    const int m = 1 + trial % 9;
    for (int j = 0; j < m; ++j) {
      std::vector<int> clause;
      const int len = 1 + static_cast<int>(rng() % 3);
      for (int l = 0; l < len; ++l) {
        int v = 1 + static_cast<int>(rng() % 4);
        clause.push_back(rng() % 2 ? v : -v);
      }
      phi.clauses.push_back(clause);
    }
    auto csp = sat_to_csp(phi);
    ASSERT_EQ(brute_force_solve(csp).has_value(), cnf_brute(phi)) << phi.to_dimacs();
  }
}

TEST(Embedding, IdentityOnPrimalGraph) {
  auto h = Hypergraph::parse("a b c\nc d\nd e a\n");
  auto g = primal_graph(h);
  auto psi = Embedding::identity(g);
  auto rep = validate_embedding(g, h, psi);
  EXPECT_TRUE(rep.valid) << rep.violation;
  EXPECT_EQ(rep.depths.vertex_depth, 1);
  EXPECT_EQ(rep.depths.edge_depth, 3);
  EXPECT_EQ(rep.depths.weak_edge_depth, 3);
}

TEST(Embedding, InvalidImagesAreReported) {
  auto h = Hypergraph::parse("a b\nb c\nc d\n");
  auto g = graph_of("x y\n");
  Embedding psi;
  psi.images = {VertexSet{h.index_of("a"), h.index_of("c")}, VertexSet{h.index_of("b")}};
  auto rep = validate_embedding(g, h, psi);
  EXPECT_FALSE(rep.valid);
  EXPECT_EQ(rep.witness, g.vertices.first());
  EXPECT_NE(rep.violation.find("not connected"), std::string::npos);

  psi.images = {VertexSet{h.index_of("a")}, VertexSet{h.index_of("d")}};
  rep = validate_embedding(g, h, psi);
  EXPECT_FALSE(rep.valid);
  EXPECT_NE(rep.violation.find("do not touch"), std::string::npos);

  psi.images = {VertexSet{h.index_of("a")}, VertexSet{}};
  EXPECT_FALSE(validate_embedding(g, h, psi).valid);
  psi.images = {VertexSet{h.index_of("a")}};
  EXPECT_FALSE(validate_embedding(g, h, psi).valid);
}

TEST(Embedding, DepthsMatchRecountOnRandomEmbeddings) {
  std::mt19937_64 rng(11);
  const std::vector<Hypergraph> hs = {grid3(), Hypergraph::parse("a b c\nc d\nd e f\ne f g h\nh i\n"),
                                      Hypergraph::parse("a b\na c\na d\nb c\nb d\nc d\n")};
  for (int trial = 0; trial < 120; ++trial) {
    const auto& h = hs[static_cast<std::size_t>(trial) % hs.size()];
    auto [g, psi] = random_embedding(rng, h, 2 + trial % 7, 3, 0.6);
    auto rep = validate_embedding(g, h, psi);
    ASSERT_TRUE(rep.valid) << rep.violation;
    auto want = recount(h, psi);
    EXPECT_EQ(rep.depths.vertex_depth, want.vertex_depth);
    EXPECT_EQ(rep.depths.edge_depth, want.edge_depth);
    EXPECT_EQ(rep.depths.weak_edge_depth, want.weak_edge_depth);
    EXPECT_LE(rep.depths.weak_edge_depth, rep.depths.edge_depth);
    // a trimmed embedding stays valid and no deeper anywhere
    auto trimmed = trim_embedding(g, h, psi);
    auto trep = validate_embedding(g, h, trimmed);
    ASSERT_TRUE(trep.valid) << trep.violation;
    for (int v = 0; v < h.universe_size(); ++v) {
      EXPECT_LE(trep.depths.vertex_depths[static_cast<std::size_t>(v)], rep.depths.vertex_depths[static_cast<std::size_t>(v)]);
    }
  }
}

TEST(Embedding, TextRoundTrip) {
  auto h = grid3();
  std::mt19937_64 rng(13);
  auto [g, psi] = random_embedding(rng, h, 5, 3, 0.5);
  auto text = psi.to_text(g, h.names());
  EXPECT_EQ(text.rfind("vertex: g1 -> {", 0), 0U);
  auto back = Embedding::parse(text, g, h);
  EXPECT_EQ(back.images, psi.images);
  EXPECT_THROW(Embedding::parse("vertex: zz -> {a1}\n", g, h), DomainError);
  EXPECT_THROW(Embedding::parse("vertex: g1 -> {q9}\n", g, h), DomainError);
  EXPECT_THROW(Embedding::parse("g1 {a1}\n", g, h), DomainError);
}

TEST(LineGraph, Structure) {
  auto l3 = line_graph_of_clique(3);
  EXPECT_EQ(l3.vertices.size(), 3);
  EXPECT_EQ(l3.edge_count(), 3);
  auto l5 = line_graph_of_clique(5);
  EXPECT_EQ(l5.vertices.size(), 10);
  for (int i = 1; i <= 5; ++i) {
    for (int j = i + 1; j <= 5; ++j) {
      const int a = line_vertex(5, i, j);
      EXPECT_EQ(l5.names[static_cast<std::size_t>(a)], "v" + std::to_string(i) + "_" + std::to_string(j));
      // degree 2(k-2)
      EXPECT_EQ(l5.adj[a].size(), 6);
    }
  }
  EXPECT_FALSE(l5.adjacent(line_vertex(5, 1, 2), line_vertex(5, 3, 4)));
  EXPECT_THROW(line_graph_of_clique(1), DomainError);
}

TEST(LineGraph, SmallExamples) {
  for (int k : {3, 4}) {
    auto lk = line_graph_of_clique(k);
    auto r = embed_into_line_graph(lk, k);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.vertex_depth, 1);
    EXPECT_TRUE(validate_embedding(lk, graph_as_hypergraph(lk), r.embedding).valid);
  }
  auto tri = embed_into_line_graph(graph_of("x y\ny z\nx z\n"), 3);
  ASSERT_TRUE(tri.found);
  EXPECT_EQ(tri.vertex_depth, 1);
  auto c4 = graph_of("p q\nq r\nr s\ns p\n");
  auto r4 = embed_into_line_graph(c4, 4);
  ASSERT_TRUE(r4.found);
  EXPECT_LE(r4.vertex_depth, 2);
  auto rep = validate_embedding(c4, graph_as_hypergraph(line_graph_of_clique(4)), r4.embedding);
  EXPECT_TRUE(rep.valid);
  EXPECT_EQ(rep.depths.vertex_depth, r4.vertex_depth);
}

TEST(LineGraph, GreedyForLargerGraphsAndBudgetFailure) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<VertexSet> edges;
    std::vector<std::string> names;
    const int n = 10 + trial;
    for (int i = 0; i < n; ++i) names.push_back("u" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
      edges.push_back(VertexSet{i, (i + 1) % n});
      edges.push_back(VertexSet{i, static_cast<int>(rng() % static_cast<std::uint64_t>(n))});
    }
    std::erase_if(edges, [](const VertexSet& e) { return e.size() < 2; });
    auto g = primal_graph(Hypergraph(names, edges));
    const int k = 3 + trial % 4;
    auto r = embed_into_line_graph(g, k);
    ASSERT_TRUE(r.found) << r.failure;
    EXPECT_EQ(r.method, "greedy");
    auto rep = validate_embedding(g, graph_as_hypergraph(line_graph_of_clique(k)), r.embedding);
    ASSERT_TRUE(rep.valid) << rep.violation;
    EXPECT_EQ(rep.depths.vertex_depth, r.vertex_depth);
    EXPECT_LE(r.vertex_depth, r.budget);
  }
  // K5 into L_2 (one vertex) needs depth 5
  auto k5 = primal_graph(Hypergraph::parse("a b c d e\n"));
  LineEmbeddingOptions tight;
  tight.budget = 4;
  auto r = embed_into_line_graph(k5, 2, tight);
  EXPECT_FALSE(r.found);
  EXPECT_FALSE(r.failure.empty());
  tight.budget = 5;
  EXPECT_TRUE(embed_into_line_graph(k5, 2, tight).found);
}

TEST(LineGraph, JobsDoNotChangeTheResult) {
  auto g = graph_of("a b\nb c\nc d\nd e\ne a\na c\n");
  LineEmbeddingOptions one, four;
  four.jobs = 4;
  auto r1 = embed_into_line_graph(g, 4, one);
  auto r4 = embed_into_line_graph(g, 4, four);
  ASSERT_TRUE(r1.found);
  EXPECT_EQ(r1.embedding.images, r4.embedding.images);
}

TEST(ConstructEmbedding, SingleEdgeIntoSingleHyperedge) {
  auto g = graph_of("x y\n");
  for (const char* text : {"a b\n", "a b c\n"}) {
    auto h = Hypergraph::parse(text);
    auto out = construct_embedding(g, h, frac(1, 100));
    auto rep = validate_embedding(g, h, out.embedding);
    ASSERT_TRUE(rep.valid) << rep.violation;
    EXPECT_LE(rep.depths.edge_depth, 2);
    EXPECT_EQ(out.depths.edge_depth, recount(h, out.embedding).edge_depth);
    EXPECT_GE(out.cliques.size(), 2U);
  }
}

TEST(ConstructEmbedding, K4IntoGrid) {
  auto g = primal_graph(Hypergraph::parse("p q r s\n"));
  auto h = grid3();
  ConstructOptions opts;
  opts.max_cliques = 4;
  auto out = construct_embedding(g, h, frac(1, 100), opts);
  auto rep = validate_embedding(g, h, out.embedding);
  ASSERT_TRUE(rep.valid) << rep.violation;
  auto want = recount(h, out.embedding);
  EXPECT_EQ(out.depths.edge_depth, want.edge_depth);
  EXPECT_EQ(out.depths.weak_edge_depth, want.weak_edge_depth);
  EXPECT_EQ(out.cliques.size(), 4U);
  EXPECT_GT(out.epsilon, 0);
  // cliques are disjoint cliques of H carrying mu-mass >= 1/2
  VertexSet seen;
  for (const auto& k : out.cliques) {
    EXPECT_FALSE(k.intersects(seen));
    seen |= k;
    EXPECT_TRUE(primal_graph(h).is_clique(k));
    EXPECT_GE(total(out.mu, k), frac(1, 2));
  }
  EXPECT_TRUE(is_fractional_independent_set(h, out.mu));
  // path capacities ceil((q/eps) w) respected
  for (const auto& p : out.paths) {
    EXPECT_LE(p.used, p.capacity);
    EXPECT_EQ(Rational(p.capacity), Rational(ceil_of(Rational(out.q) / out.epsilon * p.weight)));
  }
  // the untrimmed embedding also satisfies the proof's 4 q / eps bound when every
  // used path has (q/eps) w >= 1
  EXPECT_LE(out.depths.edge_depth, out.untrimmed.edge_depth);
}

TEST(ConstructEmbedding, RandomGraphsIntoFixtures) {
  std::mt19937_64 rng(19);
  const std::vector<Hypergraph> hs = {Hypergraph::parse("a b c\nc d\nd e f\ne f g h\nh i\n"),
                                      Hypergraph::parse("a b\na c\na d\nb c\nb d\nc d\n"),
                                      Hypergraph::parse("1 2 4\n2 3 5\n3 4 6\n4 5 7\n5 6 1\n6 7 2\n7 1 3\n")};
  for (int trial = 0; trial < 9; ++trial) {
    const auto& h = hs[static_cast<std::size_t>(trial) % hs.size()];
    std::vector<VertexSet> edges;
    std::vector<std::string> names;
    const int n = 3 + trial % 5;
    for (int i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 2) edges.push_back(VertexSet{i, j});
      }
    }
    auto g = primal_graph(Hypergraph(names, edges, VertexSet::range(n)));
    ConstructOptions opts;
    opts.max_cliques = 3;
    auto out = construct_embedding(g, h, frac(1, 50), opts);
    auto rep = validate_embedding(g, h, out.embedding);
    ASSERT_TRUE(rep.valid) << rep.violation;
    EXPECT_EQ(out.depths.edge_depth, recount(h, out.embedding).edge_depth);
    EXPECT_LE(out.depths.weak_edge_depth, out.depths.edge_depth);
  }
}

TEST(ConstructEmbedding, StageErrors) {
  auto g = graph_of("x y\n");
  auto disconnected = Hypergraph::parse("a b\nc d\n");
  try {
    construct_embedding(g, disconnected, frac(1, 100));
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "input");
  }
  EXPECT_THROW(construct_embedding(g, Hypergraph::parse("a b\n"), 0), StageError);
  EXPECT_THROW(construct_embedding(g, Hypergraph::parse("a b\n"), 1), StageError);
  ConstructOptions bad;
  bad.mu = {1, 1};
  try {
    construct_embedding(g, Hypergraph::parse("a b\n"), frac(1, 10), bad);
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "harvest");
  }
}

TEST(Simulation, IdentityEmbeddingIsEquisatisfiable) {
  std::mt19937_64 rng(23);
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto i1 = oracle::random_csp(rng, 5, 3, 7, 2, 0.45);
    auto h = i1.hypergraph();
    // the primal graph of I1 as a hypergraph: every binary scope is an edge
    auto g = primal_graph(h);
    auto gh = graph_as_hypergraph(g);
    if (gh.edge_count() == 0) continue;
    bool uncovered = false;
    g.vertices.for_each([&](int v) { uncovered |= gh.incident(v).empty(); });
    if (uncovered) continue;
    auto sim = simulate_csp_via_embedding(i1, gh, Embedding::identity(g));
    auto s1 = brute_force_solve(i1);
    auto s2 = brute_force_solve(sim.instance);
    ASSERT_EQ(s1.has_value(), s2.has_value());
    if (s1) {
      ++sat;
      EXPECT_TRUE(i1.satisfies(sim.decode(*s2, i1.universe_size())));
      EXPECT_TRUE(sim.instance.satisfies(sim.encode(*s1)));
    } else {
      ++unsat;
    }
    for (std::size_t e = 0; e < sim.relation_sizes.size(); ++e) {
      // |R_e| <= |D1|^(weak depth) <= |D1|^q
      EXPECT_LE(BigInt(static_cast<unsigned long>(sim.relation_sizes[e])), oracle_pow(3, sim.depths.weak_edge_depth));
      EXPECT_LE(sim.truth_table_sizes[e], oracle_pow(3, sim.depths.edge_depth));
    }
  }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}

TEST(Simulation, RandomEmbeddingsPreserveSatisfiability) {
  std::mt19937_64 rng(29);
  const std::vector<Hypergraph> hs = {grid3(), Hypergraph::parse("a b c\nc d\nd e f\ne f g h\nh i\n")};
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto& h = hs[static_cast<std::size_t>(trial) % hs.size()];
    auto [g, psi] = random_embedding(rng, h, 3 + trial % 3, 2, 0.7);
    // binary I1 on G's edges over two values
    std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> cons;
    for (auto [u, w] : g.edge_list()) {
      std::vector<Tuple> rel;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (rng() % 3) rel.push_back({a, b});
        }
      }
      cons.push_back({{u, w}, rel});
    }
    CspInstance i1(g.names, {"0", "1"}, cons);
    auto sim = simulate_csp_via_embedding(i1, h, psi);
    EXPECT_EQ(sim.instance.variable_count(), h.vertex_count());
    ASSERT_EQ(sim.relation_sizes.size(), static_cast<std::size_t>(h.edge_count()));
    auto s1 = brute_force_solve(i1);
    auto s2 = brute_force_solve(sim.instance);
    ASSERT_EQ(s1.has_value(), s2.has_value());
    if (s1) {
      ++sat;
      EXPECT_TRUE(i1.satisfies(sim.decode(*s2, i1.universe_size())));
    } else {
      ++unsat;
    }
    for (std::size_t e = 0; e < sim.relation_sizes.size(); ++e) {
      EXPECT_LE(BigInt(static_cast<unsigned long>(sim.relation_sizes[e])), oracle_pow(2, sim.depths.weak_edge_depth));
      EXPECT_LE(sim.truth_table_sizes[e], oracle_pow(2, sim.depths.edge_depth));
    }
  }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}

TEST(Simulation, RejectsBadInput) {
  auto i1 = CspInstance::parse("var a b c\ndomain 0 1\nconstraint a b c\n  0 0 0\nend\n");
  auto h = Hypergraph::parse("a b c\n");
  auto g = primal_graph(i1.hypergraph());
  EXPECT_THROW(simulate_csp_via_embedding(i1, h, Embedding::identity(g)), DomainError);
  auto i2 = CspInstance::parse("var a b\ndomain 0 1\nconstraint a b\n  0 1\nend\n");
  Embedding far;
  auto hp = Hypergraph::parse("p q\nq r\n");
  far.images = {VertexSet{hp.index_of("p")}, VertexSet{hp.index_of("r")}};
  EXPECT_THROW(simulate_csp_via_embedding(i2, hp, far), DomainError);
}

TEST(Transfer, IdentityKeepsBags) {
  auto h = Hypergraph::parse("a b c\nc d\nd e a\n");
  auto g = primal_graph(h);
  auto t = treewidth(h).decomposition;
  auto out = transfer_decomposition(g, h, Embedding::identity(g), t);
  EXPECT_EQ(out.bags, t.bags);
  EXPECT_EQ(out.parent, t.parent);
}

TEST(Transfer, RandomEmbeddingsGiveValidDecompositionsWithinBound) {
  std::mt19937_64 rng(31);
  const std::vector<Hypergraph> hs = {grid3(), Hypergraph::parse("a b c\nc d\nd e f\ne f g h\nh i\n"),
                                      Hypergraph::parse("a b\na c\na d\nb c\nb d\nc d\n")};
  for (int trial = 0; trial < 90; ++trial) {
    const auto& h = hs[static_cast<std::size_t>(trial) % hs.size()];
    auto [g, psi] = random_embedding(rng, h, 2 + trial % 8, trial % 2 ? 1 : 3, 0.6);
    const int q = embedding_depths(h, psi).edge_depth;
    auto mu = depth_weights(h, psi);
    ASSERT_TRUE(is_fractional_independent_set(h, mu));
    for (const auto& t : {treewidth(h).decomposition, mu_width(h, mu).decomposition,
                          TreeDecomposition::single_bag(h.vertices())}) {
      auto out = transfer_decomposition(g, h, psi, t);
      auto rep = validate_decomposition(g, out);
      ASSERT_TRUE(rep.valid) << rep.violation;
      Rational w = 0;
      for (const auto& b : t.bags) w = std::max(w, total(mu, b));
      for (const auto& b : out.bags) EXPECT_LE(Rational(b.size()), q * w);
    }
  }
}
