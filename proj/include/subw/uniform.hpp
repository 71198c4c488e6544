#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subw/csp.hpp"
#include "subw/decomposition.hpp"
#include "subw/rational.hpp"
#include "subw/submodular.hpp"

namespace subw {

/// offset + Σ coef_i · log_N(arg_i), compared exactly by clearing denominators and comparing
/// integer powers. Values built from different bases cannot be combined.
class LogValue {
 public:
  LogValue() = default;
  LogValue(Rational offset);  // NOLINT: implicit on purpose, constants mix freely
  static LogValue log(unsigned long base, const Rational& arg, const Rational& coef = Rational(1));

  unsigned long base() const { return base_; }
  const Rational& offset() const { return offset_; }
  const std::map<Rational, Rational>& terms() const { return terms_; }
  bool is_rational() const { return terms_.empty(); }

  LogValue& operator+=(const LogValue& o);
  LogValue& operator-=(const LogValue& o);
  LogValue& operator*=(const Rational& k);
  friend LogValue operator+(LogValue a, const LogValue& b) { return a += b; }
  friend LogValue operator-(LogValue a, const LogValue& b) { return a -= b; }
  friend LogValue operator*(LogValue a, const Rational& k) { return a *= k; }

  /// -1, 0 or 1. Exact.
  int sign() const;
  friend bool operator<(const LogValue& a, const LogValue& b) { return (a - b).sign() < 0; }
  friend bool operator<=(const LogValue& a, const LogValue& b) { return (a - b).sign() <= 0; }
  friend bool operator==(const LogValue& a, const LogValue& b) { return (a - b).sign() == 0; }

  double approx() const;
  /// e.g. "3/4*log_16(5) + 7/64"
  std::string to_string() const;

 private:
  void merge_base(unsigned long other);
  unsigned long base_ = 0;  // 0: no log terms yet
  Rational offset_;
  std::map<Rational, Rational> terms_;  // argument -> coefficient; no zero coefficients, no argument 1
};

/// max_I(A|B): the largest number of extensions to sol(A) of one b ∈ sol(B).
/// max(A|∅) = |sol(A)| and max(∅|∅) = 1. DomainError unless B ⊆ A.
std::uint64_t max_extensions(const CspInstance& instance, const VertexSet& a, const VertexSet& b);
/// Same, from precomputed solution sets (b.scope ⊆ a.scope, both nonempty).
std::uint64_t max_extensions(const SolutionSet& a, const SolutionSet& b);

struct UniformityParams {
  std::uint64_t n = 1;
  Rational c = 1;
  Rational eps = 1;
};

/// floor(N^c), the largest solution count of an N^c-small set. ResourceError past 2^62.
std::uint64_t small_bound(std::uint64_t n, const Rational& c);

struct UniformityViolation {
  VertexSet a;
  VertexSet b;
  std::uint64_t max = 0;
  std::uint64_t sol_a = 0;
  std::uint64_t sol_b = 0;
};

/// First N^c-small A and nonempty B ⊊ A (canonical order) with
/// max(A|B) > N^eps · |sol(A)| / |sol(B)|.
std::optional<UniformityViolation> find_uniformity_violation(const SmallSets& small, const UniformityParams& params);
bool is_uniform(const CspInstance& instance, const UniformityParams& params,
                std::optional<UniformityViolation>* witness = nullptr);

/// Small X, Y with X ∪ Y not small although |sol(X ∪ Y)| <= M. Smallness is hereditary, so this
/// happens when another subset of X ∪ Y has more than M solutions; the truncated b of
/// build_submodular_from_uniform then fails submodularity at X, Y.
struct UnionGap {
  VertexSet x;
  VertexSet y;
  SolutionSet sol;  // sol(X ∪ Y)
};

std::optional<UnionGap> find_union_gap(const CspInstance& instance, const SmallSets& small);

struct ClosureResult {
  CspInstance instance;
  int constraints_added = 0;
};

/// M-consistent refinement without union gaps: each gap U = X ∪ Y gives every non-small Z ⊊ U the
/// constraint pr_Z sol(U), which makes U small. Solutions are kept, solution sets of small sets
/// only shrink and the family of small sets only grows.
ClosureResult make_union_closed(const CspInstance& instance, std::uint64_t m);

struct SplitNode {
  enum class Outcome { Trivial, Uniform, Split };
  int parent = -1;
  int depth = 0;
  Outcome outcome = Outcome::Trivial;
  int constraints_added = 0;  // by the consistency and union-closure steps
  // Σ log max(A|B) over small pairs B ⊆ A, for consistent nontrivial nodes
  LogValue weight;
  std::vector<VertexSet> small_sets;
  // split nodes
  VertexSet a;
  VertexSet b;
  std::uint64_t max = 0;
  std::uint64_t sol_a = 0;
  std::uint64_t sol_b = 0;
  std::size_t small_side = 0;
  std::size_t large_side = 0;
  std::vector<int> children;
  // uniform nodes
  int output = -1;
};

struct SplitTrace {
  UniformityParams params;
  std::uint64_t m = 1;  // floor(N^c)
  std::vector<SplitNode> nodes;

  /// One line per split: node, pair, threshold and branch sizes.
  std::string to_text(const CspInstance& instance) const;
};

struct SplitOptions {
  int max_nodes = 200000;
};

struct SplitResult {
  std::vector<CspInstance> outputs;
  SplitTrace trace;
};

/// Recursively splits I into (N, c, eps)-uniform N^c-consistent nontrivial refinements without
/// union gaps whose solution sets partition sol(I). Each split is checked to lower a weight term by at least
/// (eps/2) log N, and whole-node weights are compared whenever the small sets are unchanged.
SplitResult split_uniform(const CspInstance& instance, std::uint64_t n, const Rational& c, const Rational& eps,
                          const SplitOptions& options = {});

/// Bag cost valued in LogValue.
using LogSetFunction = std::function<LogValue(const VertexSet&)>;

/// (1-ε) log_N |sol(S)| + 2ε²|S| - ε³|S|² on N^c-small S, (1-ε)c + 2ε²|S| - ε³|S|² otherwise,
/// with ε = 1/|V|. Verifies N^c-consistency, absence of union gaps, (N, c, ε³)-uniformity, nontriviality and
/// |sol(e)| <= N on every edge of `h` (the hypergraph of the unrefined instance; scopes added
/// by refinement are exempt); DomainError otherwise. Requires N >= 2 and |V| >= 2.
LogSetFunction build_submodular_from_uniform(const CspInstance& instance, std::uint64_t n, const Rational& c,
                                             const Hypergraph& h);
/// Edges taken from the instance's own constraints.
LogSetFunction build_submodular_from_uniform(const CspInstance& instance, std::uint64_t n, const Rational& c);

/// Exhaustive zero/nonnegative/monotone/submodular/edge-dominated check.
PropertyReport check_log_properties(const LogSetFunction& b, const Hypergraph& h, int cap = 8);

struct FptOptions {
  SplitOptions split;
  WidthOptions width;
};

struct FptResult {
  enum class Verdict { Sat, Unsat, BoundViolated };
  Verdict verdict = Verdict::Unsat;
  Assignment assignment;   // Sat only, verified against every constraint
  std::string violation;   // BoundViolated only
  std::string method;      // "direct" or "uniform-split"
  std::uint64_t n = 0;
  Rational eps;
  Rational c;
  std::uint64_t m = 0;
  std::size_t outputs = 0;
  std::optional<LogValue> b_width;
  TreeDecomposition decomposition;
};

std::string to_string(FptResult::Verdict v);

/// Decides I given c0 >= subw of its hypergraph: split into uniform instances, build the
/// submodular function of the first one, take a b-width-optimal decomposition and extend
/// along it. Single-variable instances and instances with N <= 1 are solved directly.
FptResult solve_fpt(const CspInstance& instance, const Rational& c0, const FptOptions& options = {});

}  // namespace subw
