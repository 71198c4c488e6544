#include <gtest/gtest.h>

#include <random>

#include "csp_oracles.hpp"
#include "subw/csp.hpp"
#include "subw/errors.hpp"

using namespace subw;

namespace {

const char* kPair = R"(var x y z
domain a b c
constraint x y
  a b
  b c
  c c
end
constraint y z
  b a
  c b
end
)";

// Chain of binary constraints shaped like the path of bags of the Q1 join tree.
const char* kChain = R"(var A B C D E
domain 0 1 2
constraint A B C
  0 1 2
  1 1 0
  2 0 1
end
constraint C D
  2 0
  0 1
  1 2
end
constraint D E
  0 0
  1 1
end
)";

VertexSet vars(const CspInstance& inst, std::initializer_list<const char*> names) {
  VertexSet s;
  for (const char* n : names) s.insert(inst.index_of(n));
  return s;
}

std::vector<std::vector<Tuple>> all_solution_sets(const CspInstance& inst) {
  std::vector<std::vector<Tuple>> out;
  for (const auto& s : oracle::nonempty_subsets(inst.variables())) out.push_back(solutions(inst, s).tuples);
  return out;
}

}  // namespace

TEST(CspFormat, TextRoundTrip) {
  auto inst = CspInstance::parse(kPair);
  EXPECT_EQ(inst.variable_count(), 3);
  EXPECT_EQ(inst.domain_size(), 3);
  ASSERT_EQ(inst.constraints().size(), 2U);
  auto again = CspInstance::parse(inst.to_text());
  EXPECT_EQ(again, inst);
  EXPECT_EQ(CspInstance::from_json(inst.to_json()), inst);
}

TEST(CspFormat, ScopesAreNormalizedAndMerged) {
  auto inst = CspInstance::parse(R"(var x y
domain a b
constraint y x
  a b
  b b
end
constraint x y
  b a
  a a
end
)");
  // (y,x) = (a,b) is (x,y) = (b,a); (b,b) is not in the second relation.
  ASSERT_EQ(inst.constraints().size(), 1U);
  const auto& c = inst.constraints()[0];
  ASSERT_EQ(c.relation.size(), 1U);
  EXPECT_EQ(inst.format(c.scope, c.relation[0]), "(x=b y=a)");
}

TEST(CspFormat, RepeatedVariableKeepsAgreeingTuples) {
  auto inst = CspInstance::parse("var x\ndomain a b\nconstraint x x\n  a a\n  a b\n  b b\nend\n");
  ASSERT_EQ(inst.constraints().size(), 1U);
  EXPECT_EQ(inst.constraints()[0].relation.size(), 2U);
  EXPECT_EQ(inst.constraints()[0].scope.size(), 1);
}

TEST(CspFormat, UnusedValuesArePruned) {
  auto inst = CspInstance::parse("var x y\ndomain a b c\nconstraint x y\n  a c\nend\n");
  EXPECT_EQ(inst.domain(), (std::vector<std::string>{"a", "c"}));
  // An unconstrained variable may take any value, so nothing is pruned.
  auto free = CspInstance::parse("var x y z\ndomain a b c\nconstraint x y\n  a c\nend\n");
  EXPECT_EQ(free.domain_size(), 3);
}

TEST(CspFormat, Errors) {
  EXPECT_THROW(CspInstance::parse("var x\ndomain a\nconstraint y\n  a\nend\n"), DomainError);
  EXPECT_THROW(CspInstance::parse("var x\ndomain a\nconstraint x\n  b\nend\n"), DomainError);
  EXPECT_THROW(CspInstance::parse("var x y\ndomain a\nconstraint x y\n  a\nend\n"), DomainError);
  EXPECT_THROW(CspInstance::parse("var x\ndomain a\nconstraint x\n  a\n"), DomainError);
  EXPECT_THROW(CspInstance::parse("var x x\n"), DomainError);
  EXPECT_THROW(CspInstance::parse("bogus\n"), DomainError);
  EXPECT_THROW(CspInstance::from_json("{\"variables\": 3}"), DomainError);
}

TEST(CspProjection, FullSetIsIdentity) {
  auto inst = CspInstance::parse(kPair);
  EXPECT_EQ(project_instance(inst, inst.variables()), inst);
  EXPECT_THROW(project_instance(inst, VertexSet{}), DomainError);
}

TEST(CspProjection, BinaryToUnary) {
  auto inst = CspInstance::parse("var x y\ndomain a b c\nconstraint x y\n  a b\n  c b\n  c a\nend\n");
  auto p = project_instance(inst, vars(inst, {"x"}));
  ASSERT_EQ(p.constraints().size(), 1U);
  EXPECT_EQ(p.constraints()[0].relation, (std::vector<Tuple>{{inst.value_index("a")}, {inst.value_index("c")}}));
}

TEST(CspProjection, SolutionsProjectToSolutions) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = oracle::random_csp(rng, 5, 3, 4, 3, 0.6);
    auto full = oracle::sol_brute(inst, inst.variables());
    for (const auto& vp : oracle::nonempty_subsets(inst.variables())) {
      if (vp.size() > 3) continue;
      auto p = project_instance(inst, vp);
      for (const auto& f : full) {
        Assignment g(inst.universe_size(), kUnassigned);
        std::vector<int> all = inst.variables().elements();
        for (std::size_t i = 0; i < all.size(); ++i) {
          if (vp.contains(all[i])) g[all[i]] = f[i];
        }
        EXPECT_TRUE(p.satisfies(g)) << p.first_violation(g);
      }
    }
  }
}

TEST(CspSolutions, Fixtures) {
  auto inst = CspInstance::parse("var x y z\ndomain a b c\nconstraint x y\n  a b\n  b a\nend\n");
  EXPECT_EQ(solutions(inst, vars(inst, {"z"})).size(), 3U);
  auto rel = solutions(inst, vars(inst, {"x", "y"}));
  EXPECT_EQ(rel.tuples, inst.constraints()[0].relation);
  EXPECT_THROW(solutions(inst, VertexSet{}), DomainError);
  SolutionOptions tiny;
  tiny.max_solutions = 4;
  EXPECT_THROW(solutions(inst, inst.variables(), tiny), ResourceError);
}

TEST(CspSolutions, MatchesFilterOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_csp(rng, 5, 3, 1 + trial % 5, 3, 0.5);
    for (const auto& s : oracle::nonempty_subsets(inst.variables())) {
      ASSERT_EQ(solutions(inst, s).tuples, oracle::sol_brute(inst, s)) << inst.to_text();
    }
  }
}

TEST(CspSmallSets, LargeMGivesEverySet) {
  auto inst = CspInstance::parse(kPair);
  auto small = enumerate_M_small(inst, 27);
  EXPECT_EQ(small.sets.size(), 7U);
}

TEST(CspSmallSets, OneWithTwoValuesExcludesVariable) {
  auto inst = CspInstance::parse("var x y\ndomain a b\nconstraint x\n  a\n  b\nend\nconstraint y\n  a\nend\n");
  auto small = enumerate_M_small(inst, 1);
  for (const auto& [s, sol] : small.sets) EXPECT_FALSE(s.contains(inst.index_of("x")));
  EXPECT_TRUE(small.is_small(vars(inst, {"y"})));
}

TEST(CspSmallSets, MatchesDefinition) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_csp(rng, 5, 3, 2 + trial % 4, 3, 0.5);
    std::uint64_t m = 1 + static_cast<std::uint64_t>(trial % 12);
    auto small = enumerate_M_small(inst, m);
    for (const auto& s : oracle::nonempty_subsets(inst.variables())) {
      bool expect = oracle::is_small_brute(inst, s, m);
      ASSERT_EQ(small.sets.count(s) > 0, expect) << "M=" << m << "\n" << inst.to_text();
      if (expect) {
        EXPECT_EQ(small.at(s).tuples, oracle::sol_brute(inst, s));
        // heredity
        for (const auto& sub : oracle::nonempty_subsets(s)) EXPECT_TRUE(small.is_small(sub));
      }
    }
  }
}

TEST(CspConsistency, AlreadyConsistentIsUnchanged) {
  auto inst = CspInstance::parse("var x y\ndomain a b\nconstraint x y\n  a b\n  b a\nend\n");
  auto result = make_M_consistent(inst, 4);
  EXPECT_EQ(result.constraints_added, 0);
  EXPECT_EQ(result.instance, inst);
}

TEST(CspConsistency, PrunesUnextendableValue) {
  // x = b survives projection onto {x}, but y = b is ruled out through the (y,z) constraint.
  auto inst = CspInstance::parse(
      "var x y z\ndomain a b\nconstraint x y\n  a a\n  b b\nend\nconstraint y z\n  a a\n  a b\nend\n");
  VertexSet x = vars(inst, {"x"});
  ASSERT_EQ(solutions(inst, x).size(), 2U);
  ASSERT_EQ(oracle::sol_brute(inst, vars(inst, {"x", "y"})).size(), 1U);
  auto result = make_M_consistent(inst, 9);
  EXPECT_GE(result.constraints_added, 1);
  auto sol = solutions(result.instance, x);
  EXPECT_EQ(sol.tuples, (std::vector<Tuple>{{inst.value_index("a")}}));
  EXPECT_TRUE(oracle::consistent_brute(result.instance, 9));
}

TEST(CspConsistency, RandomPreservesSolutions) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_csp(rng, 5, 3, 3 + trial % 3, 3, 0.55);
    std::uint64_t m = 1 + static_cast<std::uint64_t>(trial % 10);
    auto result = make_M_consistent(inst, m);
    EXPECT_EQ(oracle::sol_brute(result.instance, inst.variables()), oracle::sol_brute(inst, inst.variables()));
    EXPECT_TRUE(oracle::consistent_brute(result.instance, m)) << inst.to_text();
    EXPECT_TRUE(is_M_consistent(result.instance, m));
    EXPECT_TRUE(is_refinement(result.instance, inst));
    EXPECT_LE(static_cast<std::uint64_t>(result.constraints_added), (std::uint64_t{1} << 5) * m);
    // nontrivial + consistent: every small set has a solution
    if (is_nontrivial(result.instance)) {
      for (const auto& [s, sol] : enumerate_M_small(result.instance, m).sets) EXPECT_FALSE(sol.empty());
    }
  }
}

TEST(CspNontrivial, Fixtures) {
  auto free = CspInstance({"x", "y"}, {"a"}, {});
  EXPECT_TRUE(is_nontrivial(free));
  auto empty = CspInstance::parse("var x y\ndomain a\nconstraint x y\nend\n");
  EXPECT_FALSE(is_nontrivial(empty));
}

TEST(CspDecompositionSolve, SingleBag) {
  auto inst = CspInstance::parse(kPair);
  auto refined = make_M_consistent(inst, 27).instance;
  auto out = solve_with_decomposition(inst, refined, TreeDecomposition::single_bag(inst.variables()), 27);
  ASSERT_TRUE(out.preconditions_hold) << out.violation;
  EXPECT_TRUE(inst.satisfies(out.assignment));
}

TEST(CspDecompositionSolve, ChainWithPathDecomposition) {
  auto inst = CspInstance::parse(kChain);
  auto names = inst.names();
  auto td = TreeDecomposition::parse("node 0 parent - bag A B C\nnode 1 parent 0 bag C D\nnode 2 parent 1 bag D E\n",
                                     names);
  const std::uint64_t m = 3;
  auto refined = make_M_consistent(inst, m).instance;
  auto out = solve_with_decomposition(inst, refined, td, m);
  ASSERT_TRUE(out.preconditions_hold) << out.violation;
  EXPECT_TRUE(inst.satisfies(out.assignment));
  auto brute = brute_force_solve(inst);
  ASSERT_TRUE(brute.has_value());
}

TEST(CspDecompositionSolve, ReportsFailedPreconditions) {
  auto inst = CspInstance::parse(kChain);
  auto td = TreeDecomposition::single_bag(inst.variables());
  // Unrefined input is not 1-consistent here, and the whole set is not 1-small.
  auto out = solve_with_decomposition(inst, inst, td, 1);
  EXPECT_FALSE(out.preconditions_hold);
  EXPECT_FALSE(out.violation.empty());
  auto other = CspInstance::parse(kPair);
  auto mismatch = solve_with_decomposition(inst, other, td, 100);
  EXPECT_FALSE(mismatch.preconditions_hold);
}

TEST(CspDecompositionSolve, RandomFixtures) {
  std::mt19937_64 rng(29);
  int solved = 0;
  for (int trial = 0; trial < 80; ++trial) {
    auto inst = oracle::random_csp(rng, 5, 3, 3 + trial % 3, 3, 0.6);
    auto h = inst.hypergraph();
    auto td = treewidth(h).decomposition;
    // Smallest M for which every bag is small, then the refinement for that M.
    std::uint64_t m = 1;
    for (;; ++m) {
      auto refined = make_M_consistent(inst, m).instance;
      auto small = enumerate_M_small(refined, m);
      bool all_small = true;
      for (const auto& bag : td.bags) all_small = all_small && small.is_small(bag);
      if (!all_small) continue;
      auto brute = brute_force_solve(inst);
      if (!is_nontrivial(refined)) {
        // the bags cover every scope, so a trivial consistent refinement means no solution
        EXPECT_FALSE(brute.has_value());
        break;
      }
      auto out = solve_with_decomposition(inst, refined, td, m);
      ASSERT_TRUE(out.preconditions_hold) << out.violation;
      EXPECT_TRUE(inst.satisfies(out.assignment));
      EXPECT_TRUE(brute.has_value());
      ++solved;
      break;
    }
  }
  EXPECT_GT(solved, 10);
}

TEST(CspBruteForce, Fixtures) {
  auto free = CspInstance({"x", "y"}, {"a", "b"}, {});
  auto first = brute_force_solve(free);
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(free.format(*first), "x=a y=a");
  auto empty = CspInstance::parse("var x y\ndomain a\nconstraint x y\nend\n");
  EXPECT_FALSE(brute_force_solve(empty).has_value());
  BruteForceOptions tiny;
  tiny.max_nodes = 3;
  EXPECT_THROW(brute_force_solve(CspInstance({"x", "y", "z"}, {"a", "b"}, {{{0, 1}, {{1, 1}}}}), tiny),
               ResourceError);
}

TEST(CspBruteForce, LexicographicallyFirst) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_csp(rng, 5, 3, 4, 3, 0.6);
    auto all = oracle::sol_brute(inst, inst.variables());
    auto got = brute_force_solve(inst);
    ASSERT_EQ(got.has_value(), !all.empty());
    if (got) {
      EXPECT_EQ(Tuple(got->begin(), got->end()), all.front());
      EXPECT_TRUE(inst.satisfies(*got));
    }
    EXPECT_EQ(all_solutions(inst).tuples, all);
  }
}

TEST(CspBruteForce, CliqueEncoding) {
  // Triangle 1-2-3 with a pendant path 3-4-5; no 4-clique.
  Graph g = primal_graph(Hypergraph::parse("1 2\n2 3\n1 3\n3 4\n4 5\n"));
  auto three = clique_instance(g, 3);
  auto sol = brute_force_solve(three);
  ASSERT_TRUE(sol.has_value());
  VertexSet chosen;
  for (int v : three.variables().elements()) chosen.insert(g.vertices.elements()[(*sol)[v]]);
  EXPECT_EQ(chosen.size(), 3);
  EXPECT_TRUE(g.is_clique(chosen));
  EXPECT_FALSE(brute_force_solve(clique_instance(g, 4)).has_value());
  // clique enumeration agrees: exactly one triangle
  int triangles = 0;
  for (const auto& s : oracle::nonempty_subsets(g.vertices)) triangles += s.size() == 3 && g.is_clique(s);
  EXPECT_EQ(triangles, 1);
}

TEST(CspInstanceOps, RefinementAndConstraints) {
  auto inst = CspInstance::parse(kPair);
  VertexSet xy = vars(inst, {"x", "y"});
  auto tighter = inst.with_constraint(xy, {inst.constraints()[0].relation.front()});
  EXPECT_TRUE(is_refinement(tighter, inst));
  EXPECT_FALSE(is_refinement(inst, tighter));
  EXPECT_EQ(tighter.constraints().size(), inst.constraints().size());
  EXPECT_EQ(inst.max_relation_size(), 3U);
  auto h = inst.hypergraph();
  EXPECT_EQ(h.edge_count(), 2);
  EXPECT_EQ(all_solution_sets(inst).size(), 7U);
}

TEST(CspBruteForce, AnySearchOrderGivesItsFirstSolution) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 150; ++trial) {
    auto inst = oracle::random_csp(rng, 5, 3, 4, 3, 0.5);
    BruteForceOptions opts;
    opts.order = inst.variables().elements();
    std::shuffle(opts.order.begin(), opts.order.end(), rng);
    // first solution when tuples are read in search order
    std::optional<Tuple> want;
    for (const auto& t : oracle::sol_brute(inst, inst.variables())) {
      Tuple key;
      for (int v : opts.order) key.push_back(t[static_cast<std::size_t>(v)]);
      if (!want || key < *want) want = key;
    }
    auto got = brute_force_solve(inst, opts);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (!got) continue;
    Tuple key;
    for (int v : opts.order) key.push_back((*got)[static_cast<std::size_t>(v)]);
    EXPECT_EQ(key, *want);
  }
  BruteForceOptions bad;
  bad.order = {0, 0};
  EXPECT_THROW(brute_force_solve(oracle::random_csp(rng, 2, 2, 1, 2, 0.5), bad), DomainError);
}
