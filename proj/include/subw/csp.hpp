#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subw/decomposition.hpp"
#include "subw/hypergraph.hpp"
#include "subw/vertex_set.hpp"

namespace subw {

/// Values are domain indices; column order follows the increasing variable order of the scope.
using Tuple = std::vector<int>;

struct Constraint {
  VertexSet scope;
  std::vector<Tuple> relation;  // sorted, duplicate-free

  std::vector<int> columns() const { return scope.elements(); }
  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.scope == b.scope && a.relation == b.relation;
  }
};

/// Total on `scope`; tuples are listed in the scope's increasing variable order.
struct SolutionSet {
  VertexSet scope;
  std::vector<Tuple> tuples;  // sorted

  std::size_t size() const { return tuples.size(); }
  bool empty() const { return tuples.empty(); }
  bool contains(const Tuple& t) const;
};

inline constexpr int kUnassigned = -1;

/// Indexed by variable; kUnassigned marks variables outside the domain of the map.
using Assignment = std::vector<int>;

/// Restriction of an assignment on `from` to the variables of `onto` (onto ⊆ from).
Tuple restrict_tuple(const Tuple& t, const VertexSet& from, const VertexSet& onto);

class CspInstance {
 public:
  CspInstance() = default;
  /// Variable names are sorted naturally, constraints normalized and same-scope constraints
  /// intersected. Tuples must use indices into `domain`. The domain is kept as given.
  CspInstance(std::vector<std::string> variables, std::vector<std::string> domain,
              std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> constraints);

  /// Drops domain values used by no relation. Kept as-is when some variable is in no scope,
  /// since such a variable may take any value.
  CspInstance pruned() const;

  /// Format: `var` and `domain` lines, then blocks `constraint v1 v2 ...` / tuples / `end`.
  /// Parsed instances are pruned.
  static CspInstance parse(std::string_view text);
  static CspInstance load(const std::string& path);
  std::string to_text() const;
  static CspInstance from_json(const std::string& json);
  std::string to_json() const;

  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int v) const { return names_[v]; }
  int universe_size() const { return static_cast<int>(names_.size()); }
  const VertexSet& variables() const { return variables_; }
  int variable_count() const { return variables_.size(); }
  const std::vector<std::string>& domain() const { return domain_; }
  int domain_size() const { return static_cast<int>(domain_.size()); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  int index_of(const std::string& variable) const;
  int value_index(const std::string& value) const;
  /// Constraint with exactly this scope set, if any.
  const Constraint* find(const VertexSet& scope) const;
  /// Largest relation size (0 without constraints).
  std::size_t max_relation_size() const;
  /// Total tuple entries, a proxy for the input size.
  std::size_t size() const;

  /// Same instance with an extra constraint; intersected with any existing one on that scope.
  CspInstance with_constraint(const VertexSet& scope, std::vector<Tuple> relation) const;

  /// Vertices = variables, one edge per constraint scope.
  Hypergraph hypergraph() const;

  bool satisfies(const Assignment& f) const;
  /// Names each violated constraint; empty when f is a solution.
  std::string first_violation(const Assignment& f) const;
  std::string format(const Assignment& f) const;
  std::string format(const VertexSet& scope, const Tuple& t) const;

  friend bool operator==(const CspInstance& a, const CspInstance& b) {
    return a.names_ == b.names_ && a.variables_ == b.variables_ && a.domain_ == b.domain_ &&
           a.constraints_ == b.constraints_;
  }

 private:
  friend CspInstance project_instance(const CspInstance&, const VertexSet&);
  void add(Constraint c);

  std::vector<std::string> names_;
  VertexSet variables_;
  std::vector<std::string> domain_;
  std::vector<Constraint> constraints_;  // sorted by scope
};

/// Tuples of R restricted to the columns in `onto` (which must lie in the scope).
std::vector<Tuple> project_relation(const Constraint& c, const VertexSet& onto);

/// pr_{V'} I: constraints meeting V' projected coordinatewise. DomainError if V' is empty
/// or not a subset of the variables.
CspInstance project_instance(const CspInstance& instance, const VertexSet& v_prime);

struct SolutionOptions {
  std::size_t max_solutions = 1'000'000;
};

/// sol_I(S): all solutions of pr_S I, by backtracking. ResourceError past the cap.
SolutionSet solutions(const CspInstance& instance, const VertexSet& s, const SolutionOptions& options = {});

/// Nonempty M-small sets and their solution sets, found level by level.
struct SmallSets {
  std::uint64_t m = 1;
  std::map<VertexSet, SolutionSet> sets;

  bool is_small(const VertexSet& s) const { return s.empty() || sets.count(s) > 0; }
  const SolutionSet& at(const VertexSet& s) const { return sets.at(s); }
};

SmallSets enumerate_M_small(const CspInstance& instance, std::uint64_t m);

/// pr_B sol(A) for B ⊆ A.
std::vector<Tuple> project_solutions(const SolutionSet& a, const VertexSet& b);

struct ConsistencyViolation {
  VertexSet b;
  VertexSet a;
  std::vector<Tuple> unextendable;  // members of sol(B) outside pr_B sol(A)
};

/// First pair B ⊊ A of nonempty M-small sets (canonical order on A, then B) with
/// sol(B) ≠ pr_B sol(A), if any.
std::optional<ConsistencyViolation> find_consistency_violation(const CspInstance& instance, const SmallSets& small);
bool is_M_consistent(const CspInstance& instance, std::uint64_t m);

struct ConsistencyResult {
  CspInstance instance;
  int constraints_added = 0;
};

/// Adds ⟨B, pr_B sol(A)⟩ for violating pairs until none remain, rediscovering the M-small
/// sets each round. The round count is checked against 2^|V| * M.
ConsistencyResult make_M_consistent(const CspInstance& instance, std::uint64_t m);

/// sol({v}) nonempty for every variable.
bool is_nontrivial(const CspInstance& instance);

/// Every constraint of `base` has a same-scope constraint in `refined` with a smaller relation.
bool is_refinement(const CspInstance& refined, const CspInstance& base, std::string* why = nullptr);

struct DecompositionSolve {
  bool preconditions_hold = false;
  std::string violation;  // set when a precondition fails
  Assignment assignment;
};

/// Builds a solution of I along T, extending a consistent choice from each bag into its
/// children. Verifies that `refined` is an M-consistent nontrivial refinement of I, that T
/// decomposes the hypergraph of I and that every bag is M-small in `refined`.
DecompositionSolve solve_with_decomposition(const CspInstance& instance, const CspInstance& refined,
                                            const TreeDecomposition& t, std::uint64_t m);

struct BruteForceOptions {
  std::uint64_t max_nodes = 50'000'000;
  // variable order of the search; empty means index order
  std::vector<int> order;
};

/// Lexicographically first solution (variables in search order, values in index order), or nullopt.
std::optional<Assignment> brute_force_solve(const CspInstance& instance, const BruteForceOptions& options = {});

/// All solutions on V, sorted; ResourceError past the cap.
SolutionSet all_solutions(const CspInstance& instance, const SolutionOptions& options = {});

/// Encodes k-clique in a graph: variables 1..k over the graph's vertices, with one binary
/// constraint per pair listing the ordered edges.
CspInstance clique_instance(const Graph& g, int k);

}  // namespace subw
