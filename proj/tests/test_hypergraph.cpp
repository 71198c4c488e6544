#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "subw/errors.hpp"
#include "subw/hypergraph.hpp"

using namespace subw;

namespace {

Hypergraph fano() {
  return Hypergraph::parse("1 2 3\n1 4 5\n1 6 7\n2 4 6\n2 5 7\n3 4 7\n3 5 6\n");
}

Hypergraph q2() { return Hypergraph::parse("A B\nA C\nA D\nB C\nB D\nC D\n"); }

}  // namespace

TEST(VertexSet, BasicAlgebraAcrossWordBoundary) {
  VertexSet a{1, 5, 70, 130};
  VertexSet b{5, 70, 200};
  EXPECT_EQ(a.size(), 4);
  EXPECT_EQ((a & b), (VertexSet{5, 70}));
  EXPECT_EQ((a | b).size(), 5);
  EXPECT_EQ((a - b), (VertexSet{1, 130}));
  EXPECT_TRUE((VertexSet{5, 70}).is_subset_of(a));
  EXPECT_FALSE(b.is_subset_of(a));
  a.erase(130);
  EXPECT_EQ(a, (VertexSet{1, 5, 70}));
  EXPECT_EQ(a.first(), 1);
  EXPECT_EQ((VertexSet{200}).first(), 200);
}

TEST(VertexSet, CanonicalOrderIsLexicographicOnElements) {
  EXPECT_LT((VertexSet{0, 5}), (VertexSet{1}));
  EXPECT_LT((VertexSet{0}), (VertexSet{0, 1}));
  EXPECT_LT((VertexSet{}), (VertexSet{0}));
  EXPECT_LT((VertexSet{2, 64}), (VertexSet{2, 65}));
  EXPECT_FALSE((VertexSet{3}) < (VertexSet{3}));
}

TEST(Hypergraph, NaturalOrderingOfNames) {
  EXPECT_TRUE(natural_less("x2", "x10"));
  EXPECT_FALSE(natural_less("x10", "x2"));
  EXPECT_TRUE(natural_less("a", "b"));
  Hypergraph h = Hypergraph::parse("x10 x2\nx1 x2\n");
  EXPECT_EQ(h.names(), (std::vector<std::string>{"x1", "x2", "x10"}));
}

TEST(Hypergraph, ParseDeduplicatesAndRoundTrips) {
  Hypergraph h = Hypergraph::parse("# comment\nb a\n\na b  # dup\nc\n");
  EXPECT_EQ(h.edge_count(), 2);
  EXPECT_EQ(h.to_text(), "a b\nc\n");
  EXPECT_EQ(Hypergraph::parse(h.to_text()), h);
}

TEST(Hypergraph, PrimalGraphOfSingleEdgeIsTriangle) {
  Graph g = primal_graph(Hypergraph::parse("a b c\n"));
  EXPECT_EQ(g.edge_count(), 3);
  EXPECT_TRUE(g.is_clique(g.vertices));
}

TEST(Hypergraph, PrimalGraphOfQ2IsK4) {
  Graph g = primal_graph(q2());
  EXPECT_EQ(g.edge_count(), 6);
  EXPECT_TRUE(g.is_clique(g.vertices));
}

TEST(Hypergraph, PrimalGraphOfFanoIsK7) {
  Graph g = primal_graph(fano());
  EXPECT_EQ(g.edge_count(), 21);
}

TEST(Hypergraph, InducedSubhypergraph) {
  Hypergraph h = Hypergraph::parse("a b c\n");
  EXPECT_EQ(induced_subhypergraph(h, h.vertices()), h);
  Hypergraph sub = induced_subhypergraph(h, h.set_of({"a", "b"}));
  EXPECT_EQ(sub.edge_count(), 1);
  EXPECT_EQ(sub.edges()[0], h.set_of({"a", "b"}));
  EXPECT_THROW(induced_subhypergraph(h, VertexSet{7}), DomainError);
}

TEST(Hypergraph, InducedFanoLine) {
  Hypergraph h = fano();
  VertexSet line = h.set_of({"1", "2", "3"});
  Hypergraph sub = induced_subhypergraph(h, line);
  // traces: the line itself, and every other line meets it in exactly one point
  std::vector<VertexSet> expected = {line, h.set_of({"1"}), h.set_of({"2"}), h.set_of({"3"})};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(sub.edges(), expected);
}

TEST(Hypergraph, MinimalPathChecks) {
  Hypergraph h = Hypergraph::parse("a b c\nc d\n");
  int a = h.index_of("a"), b = h.index_of("b"), c = h.index_of("c"), d = h.index_of("d");
  EXPECT_TRUE(is_minimal_path(h, Path{{a}}));
  EXPECT_FALSE(is_minimal_path(h, Path{{a, b, c}}));
  EXPECT_TRUE(is_minimal_path(h, Path{{a, c, d}}));
  EXPECT_THROW(is_minimal_path(h, Path{{a, d}}), DomainError);
}

TEST(Hypergraph, Touch) {
  Hypergraph h = q2();
  EXPECT_TRUE(touch(h, h.set_of({"A"}), h.set_of({"A"})));
  EXPECT_TRUE(touch(h, h.set_of({"A"}), h.set_of({"B"})));
  Hypergraph two = Hypergraph::parse("a b\nc d\n");
  EXPECT_FALSE(touch(two, two.set_of({"a"}), two.set_of({"c", "d"})));
}

TEST(Hypergraph, EnumerateMinimalPathsSmall) {
  Hypergraph h = Hypergraph::parse("a b\nb c\nc d\n");
  auto paths = enumerate_minimal_paths(h, h.set_of({"a"}), h.set_of({"d"}));
  ASSERT_EQ(paths.size(), 1U);
  EXPECT_EQ(h.names_of(paths[0].vertex_set()), (std::vector<std::string>{"a", "b", "c", "d"}));

  Hypergraph single = Hypergraph::parse("v\nw x\n");
  auto zero = enumerate_minimal_paths(single, single.set_of({"v"}), single.set_of({"v"}));
  ASSERT_EQ(zero.size(), 1U);
  EXPECT_EQ(zero[0].length(), 0);
}

TEST(Hypergraph, MinimalPathsMatchBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 6, 5);
    VertexSet x{0, 1}, y{3, 5};
    auto got = enumerate_minimal_paths(h, x, y);
    EXPECT_EQ(got, oracle::minimal_paths_brute(h, x, y));
    for (const auto& p : got) {
      EXPECT_TRUE(is_minimal_path(h, p));
      for (const auto& e : h.edges()) EXPECT_LE((e & p.vertex_set()).size(), 2);
    }
  }
}

TEST(Hypergraph, TouchIsSymmetricAndMonotone) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 7, 4);
    for (std::uint64_t xm = 1; xm < 128; xm += 13) {
      for (std::uint64_t ym = 1; ym < 128; ym += 11) {
        VertexSet x = VertexSet::from_mask(xm), y = VertexSet::from_mask(ym);
        bool t = touch(h, x, y);
        EXPECT_EQ(t, touch(h, y, x));
        if (t) EXPECT_TRUE(touch(h, x | VertexSet{6}, y));
      }
    }
  }
}

TEST(Hypergraph, InducedPrimalIsSubgraph) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 7, 5);
    VertexSet keep{0, 2, 3, 6};
    Graph sub = primal_graph(induced_subhypergraph(h, keep));
    Graph full = primal_graph(h);
    keep.for_each([&](int v) { EXPECT_TRUE(sub.adj[v].is_subset_of(full.adj[v] & keep)); });
  }
}

TEST(Hypergraph, SeparatesUsesReachability) {
  Hypergraph h = Hypergraph::parse("a b\nb c\nc d\n");
  EXPECT_TRUE(separates(h, h.set_of({"b"}), h.set_of({"a"}), h.set_of({"d"})));
  EXPECT_FALSE(separates(h, {}, h.set_of({"a"}), h.set_of({"d"})));
  EXPECT_FALSE(separates(h, {}, h.set_of({"a"}), h.set_of({"a"})));
}
