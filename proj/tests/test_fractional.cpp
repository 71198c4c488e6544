#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "subw/errors.hpp"
#include "subw/fractional.hpp"

using namespace subw;

namespace {

Hypergraph fano() { return Hypergraph::parse("1 2 3\n1 4 5\n1 6 7\n2 4 6\n2 5 7\n3 4 7\n3 5 6\n"); }
Hypergraph k4() { return Hypergraph::parse("A B\nA C\nA D\nB C\nB D\nC D\n"); }

VertexWeights uniform_mu(const Hypergraph& h, const Rational& value) { return VertexWeights(h.universe_size(), value); }

}  // namespace

TEST(Cover, FractionalCoverFixtures) {
  Hypergraph single = Hypergraph::parse("a b c\n");
  EXPECT_EQ(fractional_edge_cover_number(single, single.set_of({"a", "c"})), 1);
  EXPECT_EQ(fractional_edge_cover_number(k4(), k4().vertices()), 2);
  auto res = fractional_edge_cover(fano(), fano().vertices());
  EXPECT_EQ(res.value, frac(7, 3));
  EXPECT_EQ(fractional_edge_cover_number(fano(), {}), 0);
}

TEST(Cover, UniformThirdIsFeasibleOnFano) {
  // gamma = 1/3 on each line covers every point exactly once: a cross-check of 7/3
  Hypergraph h = fano();
  EdgeWeights gamma(h.edge_count(), frac(1, 3));
  h.vertices().for_each([&](int v) {
    Rational s;
    for (int e : h.incident(v)) s += gamma[e];
    EXPECT_EQ(s, 1);
  });
  // and mu = 1/3 on each point is an independent set of the same total
  EXPECT_TRUE(is_fractional_independent_set(h, uniform_mu(h, frac(1, 3))));
  EXPECT_EQ(total(uniform_mu(h, frac(1, 3)), h.vertices()), frac(7, 3));
}

TEST(Cover, IntegralCoverFixtures) {
  Hypergraph h = fano();
  EXPECT_EQ(edge_cover_number(h, h.set_of({"4"})), 1);
  EXPECT_EQ(edge_cover_number(h, h.vertices()), 3);
  EXPECT_EQ(edge_cover_number(k4(), k4().vertices()), 2);
}

TEST(Cover, IntegralCoverMatchesBruteForce) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 7, 6);
    EXPECT_EQ(edge_cover_number(h, h.vertices()), oracle::edge_cover_brute(h, h.vertices()));
  }
}

TEST(Cover, UncoverableVertexRejected) {
  Hypergraph h = Hypergraph::from_edges({{"a", "b"}}, {"z"});
  EXPECT_THROW(fractional_edge_cover_number(h, h.set_of({"z"})), DomainError);
  EXPECT_THROW(edge_cover_number(h, h.set_of({"z"})), DomainError);
}

TEST(Cover, MonotoneInX) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 6, 5);
    for (std::uint64_t m = 0; m < 64; m += 5) {
      VertexSet x = VertexSet::from_mask(m);
      VertexSet smaller = x - VertexSet{x.first()};
      EXPECT_LE(fractional_edge_cover_number(h, smaller), fractional_edge_cover_number(h, x));
    }
  }
}

TEST(Separator, Fixtures) {
  Hypergraph two = Hypergraph::parse("a b\nc d\n");
  EXPECT_EQ(min_fractional_separator(two, two.set_of({"a"}), two.set_of({"d"})).weight, 0);
  Hypergraph edge = Hypergraph::parse("a b\n");
  auto sep = min_fractional_separator(edge, edge.set_of({"a"}), edge.set_of({"b"}));
  EXPECT_EQ(sep.weight, 1);
  EXPECT_EQ(sep.s[0], 1);
  Hypergraph path = Hypergraph::parse("a b\nb c\nc d\n");
  EXPECT_EQ(min_fractional_separator(path, path.set_of({"a"}), path.set_of({"d"})).weight, 1);
  EXPECT_EQ(max_flow(path, path.set_of({"a"}), path.set_of({"d"})).value, 1);
}

TEST(Separator, ZeroLengthPathAtIsolatedVertexRejected) {
  Hypergraph h = Hypergraph::from_edges({{"a", "b"}}, {"z"});
  VertexSet z = h.set_of({"z"});
  EXPECT_THROW(min_fractional_separator(h, z, z), DomainError);
  EXPECT_THROW(max_flow(h, z, z), DomainError);
}

TEST(Flow, Fixtures) {
  Hypergraph two = Hypergraph::parse("a b\nc d\n");
  auto none = max_flow(two, two.set_of({"a"}), two.set_of({"c"}));
  EXPECT_EQ(none.value, 0);
  EXPECT_TRUE(none.flow.empty());
  Hypergraph edge = Hypergraph::parse("a b\n");
  EXPECT_EQ(max_flow(edge, edge.set_of({"a"}), edge.set_of({"b"})).value, 1);
}

TEST(Flow, DualityAgainstSeparatorOnRandomHypergraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 6, 4 + trial % 4);
    VertexSet x{0, 1}, y{4, 5};
    auto flow = max_flow(h, x, y);
    auto sep = min_fractional_separator(h, x, y);
    EXPECT_EQ(flow.value, sep.weight);
    EXPECT_TRUE(respects_capacities(h, flow.flow));
    EXPECT_EQ(flow.flow.value(), flow.value);
    EXPECT_TRUE(is_fractional_separator(h, x, y, sep.s));
    EXPECT_EQ(sep.weight, oracle::separator_over_all_paths(h, x, y));
  }
}

TEST(Multicommodity, Fixtures) {
  Hypergraph two = Hypergraph::parse("a b\nc d\n");
  auto r0 = max_mu_demand_multicommodity_flow(two, {{two.set_of({"a"}), two.set_of({"c"})}},
                                              uniform_mu(two, frac(1, 2)));
  EXPECT_EQ(r0.value, 0);
  Hypergraph edge = Hypergraph::parse("a b\n");
  auto r1 = max_mu_demand_multicommodity_flow(edge, {{edge.set_of({"a"}), edge.set_of({"b"})}},
                                              uniform_mu(edge, frac(1, 2)));
  EXPECT_EQ(r1.value, frac(1, 2));
}

TEST(Multicommodity, RejectsOverlappingPairs) {
  Hypergraph h = Hypergraph::parse("a b c\n");
  VertexSet a = h.set_of({"a"}), b = h.set_of({"b"});
  EXPECT_THROW(max_mu_demand_multicommodity_flow(h, {{a, b}, {a, h.set_of({"c"})}}, uniform_mu(h, frac(1, 3))),
               DomainError);
}

TEST(Multicommodity, RandomBoundsAndRelabelling) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 7, 6);
    VertexWeights mu(h.universe_size());
    // 1/(max edge size) is always independent
    int widest = 0;
    for (const auto& e : h.edges()) widest = std::max(widest, e.size());
    for (auto& m : mu) m = frac(1, widest);
    std::vector<std::pair<VertexSet, VertexSet>> pairs = {{VertexSet{0}, VertexSet{3, 4}}, {VertexSet{1, 2}, VertexSet{6}}};
    auto res = max_mu_demand_multicommodity_flow(h, pairs, mu);
    Rational bound;
    for (const auto& [a, b] : pairs) {
      Rational ma = total(mu, a), mb = total(mu, b);
      bound += ma < mb ? ma : mb;
    }
    EXPECT_LE(res.value, bound);
    EXPECT_TRUE(respects_capacities(h, res.flows));
    Rational dual = total(res.edge_duals);
    for (int v = 0; v < h.universe_size(); ++v) dual += mu[v] * res.vertex_duals[v];
    EXPECT_EQ(dual, res.value);
    std::swap(pairs[0], pairs[1]);
    EXPECT_EQ(max_mu_demand_multicommodity_flow(h, pairs, mu).value, res.value);
  }
}

TEST(ConcurrentFlow, Fixtures) {
  Hypergraph two = Hypergraph::parse("a b\nc d\n");
  EXPECT_EQ(max_uniform_concurrent_flow(two, {two.set_of({"a"}), two.set_of({"c"})}).epsilon, 0);
  Hypergraph edge = Hypergraph::parse("a b c\n");
  EXPECT_EQ(max_uniform_concurrent_flow(edge, {edge.set_of({"a"}), edge.set_of({"b", "c"})}).epsilon, 1);
  EXPECT_THROW(max_uniform_concurrent_flow(edge, {edge.set_of({"a"})}), DomainError);
}

TEST(ConcurrentFlow, ConnectedLowerBoundAndDuals) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 7, 7);
    if (components(h, h.vertices()).size() != 1) continue;
    std::vector<VertexSet> parts = {VertexSet{0}, VertexSet{2, 3}, VertexSet{5}, VertexSet{6}};
    auto res = max_uniform_concurrent_flow(h, parts);
    EXPECT_GE(res.epsilon, frac(1, 6));
    EXPECT_TRUE(respects_capacities(h, res.flows));
    for (const auto& f : res.flows) EXPECT_GE(f.value(), res.epsilon);
    EXPECT_EQ(total(res.edge_duals), res.epsilon);
    Rational sum_l;
    for (const auto& l : res.lengths) {
      EXPECT_GE(l, 0);
      sum_l += l;
    }
    EXPECT_GE(sum_l, 1);
  }
}

TEST(Connectivity, Fixtures) {
  Hypergraph h = Hypergraph::parse("a b\nc d\n");
  auto one = is_mu_lambda_connected(h, uniform_mu(h, frac(1, 2)), h.set_of({"a"}), frac(1, 1000));
  EXPECT_TRUE(one.connected);
  VertexWeights on_w(h.universe_size());
  on_w[h.index_of("a")] = 1;
  on_w[h.index_of("c")] = 1;
  auto split = is_mu_lambda_connected(h, on_w, h.set_of({"a", "c"}), frac(1, 1000));
  EXPECT_FALSE(split.connected);
  EXPECT_EQ(split.separator_weight, 0);
  EXPECT_TRUE(check_connectivity_certificate(h, split).empty());
}

TEST(Connectivity, K4MatchesExhaustiveOracle) {
  Hypergraph h = k4();
  VertexWeights mu = uniform_mu(h, frac(1, 3));
  auto cert = is_mu_lambda_connected(h, mu, h.vertices(), frac(1, 10));
  EXPECT_EQ(cert.connected, oracle::connected_brute(h, mu, h.vertices(), frac(1, 10)));
  EXPECT_TRUE(cert.connected);
  // with a huge lambda the cheap separators win
  auto strict = is_mu_lambda_connected(h, mu, h.vertices(), Rational(10));
  EXPECT_EQ(strict.connected, oracle::connected_brute(h, mu, h.vertices(), Rational(10)));
  EXPECT_TRUE(check_connectivity_certificate(h, strict).empty());
}

TEST(Connectivity, RandomAgreesWithOracleForLargeLambda) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 5, 4);
    int widest = 0;
    for (const auto& e : h.edges()) widest = std::max(widest, e.size());
    VertexWeights mu = uniform_mu(h, frac(1, widest));
    for (Rational lambda : {frac(1, 1000), Rational(1), Rational(3)}) {
      auto cert = is_mu_lambda_connected(h, mu, h.vertices(), lambda);
      EXPECT_EQ(cert.connected, oracle::connected_brute(h, mu, h.vertices(), lambda));
      EXPECT_TRUE(check_connectivity_certificate(h, cert).empty());
    }
  }
}

TEST(Connectivity, SmallerLambdaPreservesTrueVerdict) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 6, 5);
    VertexWeights mu = uniform_mu(h, frac(1, 4));
    if (is_mu_lambda_connected(h, mu, h.vertices(), Rational(2)).connected) {
      EXPECT_TRUE(is_mu_lambda_connected(h, mu, h.vertices(), Rational(1)).connected);
    }
  }
}

TEST(Connectivity, CapAndIsolatedVertex) {
  Hypergraph h = Hypergraph::from_edges({{"a", "b"}}, {"z"});
  EXPECT_THROW(is_mu_lambda_connected(h, uniform_mu(h, frac(1, 2)), h.set_of({"z"}), 1), DomainError);
  Hypergraph big = Hypergraph::parse("1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n8 9\n9 10\n10 11\n11 12\n");
  EXPECT_THROW(is_mu_lambda_connected(big, uniform_mu(big, frac(1, 2)), big.vertices(), 1), ResourceError);
}

TEST(ConLambda, Fixtures) {
  Hypergraph edgeless = Hypergraph::from_edges({}, {"x", "y"});
  EXPECT_EQ(con_lambda_lower_bound(edgeless, frac(1, 1000)).value, 0);
  Hypergraph edge = Hypergraph::parse("a b\n");
  auto res = con_lambda_lower_bound(edge, frac(1, 1000));
  EXPECT_GE(res.value, 1);
  EXPECT_TRUE(check_connectivity_certificate(edge, res.certificate).empty());
}

TEST(ConLambda, BoundedByIndependentSetAndCertified) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Hypergraph h = oracle::random_hypergraph(rng, 6, 5);
    auto res = con_lambda_lower_bound(h, frac(1, 1000));
    EXPECT_LE(res.value, max_fractional_independent_set(h, h.vertices()).value);
    EXPECT_EQ(total(res.certificate.mu, res.certificate.w), res.value);
    EXPECT_TRUE(oracle::connected_brute(h, res.certificate.mu, res.certificate.w, frac(1, 1000)));
  }
}
