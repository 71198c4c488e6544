#pragma once

#include <climits>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subw/decomposition.hpp"
#include "subw/fractional.hpp"
#include "subw/hypergraph.hpp"
#include "subw/rational.hpp"

namespace subw {

enum class OracleKind { Modular, Submodular, Coverage, RhoStar, Flow, Table, Custom };

std::string to_string(OracleKind kind);

/// Set function with a shared, synchronized memo. Copies share the cache.
class SetFunctionOracle {
 public:
  using Fn = std::function<Rational(const VertexSet&)>;

  SetFunctionOracle(Fn f, OracleKind kind = OracleKind::Custom, std::string description = "custom");

  Rational operator()(const VertexSet& s) const;
  OracleKind kind() const;
  const std::string& description() const;
  /// Distinct sets evaluated so far.
  std::size_t evaluations() const;
  BagCost<Rational> as_bag_cost() const;

  static SetFunctionOracle modular(VertexWeights weights);
  /// b(S) = total weight of the listed sets that S meets.
  static SetFunctionOracle coverage(std::vector<std::pair<VertexSet, Rational>> sets);
  static SetFunctionOracle rho_star(const Hypergraph& h);
  /// Every subset of `vertices` must be listed; other sets raise DomainError.
  static SetFunctionOracle table(std::map<VertexSet, Rational> values);

  /// First non-comment word selects the kind: `modular`, `coverage`, `rho-star`, `flow` or
  /// `table`; each further line is `<rational> v1 v2 ...`.
  static SetFunctionOracle parse(std::string_view text, const Hypergraph& h);
  static SetFunctionOracle load(const std::string& path, const Hypergraph& h);

 private:
  struct State;
  std::shared_ptr<State> state_;
};

struct PropertyReport {
  bool zero_on_empty = true;
  bool nonnegative = true;
  bool monotone = true;
  bool submodular = true;
  bool edge_dominated = true;
  /// One line per failed property, naming the witnessing sets.
  std::vector<std::string> counterexamples;

  bool all_hold() const { return zero_on_empty && nonnegative && monotone && submodular && edge_dominated; }
};

/// Exhaustive check over all subsets of V(H); submodularity via the equivalent local
/// inequality b(S+u) + b(S+v) >= b(S+u+v) + b(S).
PropertyReport check_properties(const SetFunctionOracle& b, const Hypergraph& h, int cap = 8);

/// A sequence of distinct vertices; only relative positions matter.
using Ordering = std::vector<int>;

/// Marginal of v w.r.t. its neighbours in Z that precede it in pi.
Rational marginal(const SetFunctionOracle& b, const Hypergraph& h, const Ordering& pi, const VertexSet& z, int v);
/// Sum of the marginals over Z.
Rational b_pi(const SetFunctionOracle& b, const Hypergraph& h, const Ordering& pi, const VertexSet& z);

struct BStarResult {
  Rational value;
  /// A full ordering of V(H) attaining the value: Z first, then the rest canonically.
  Ordering ordering;
};

struct BStarOptions {
  int max_vertices = 14;
};

/// Minimum of b_pi(Z) over orderings. The marginal of v depends only on which vertices of Z
/// precede it, so a dynamic program over prefixes of Z is exact.
BStarResult b_star(const SetFunctionOracle& b, const Hypergraph& h, const VertexSet& z, const BStarOptions& options = {});

/// Memoized b* for repeated queries on one hypergraph.
class BStar {
 public:
  BStar(SetFunctionOracle b, const Hypergraph& h, BStarOptions options = {});
  const BStarResult& operator()(const VertexSet& z);
  const SetFunctionOracle& oracle() const { return b_; }

 private:
  SetFunctionOracle b_;
  const Hypergraph& h_;
  BStarOptions options_;
  std::map<VertexSet, BStarResult> cache_;
};

/// mu(v) = marginal of v w.r.t. W under pi, on W; zero elsewhere. Throws InternalError when
/// the result is not a fractional independent set (the oracle broke its contract).
VertexWeights independent_set_from_ordering(const SetFunctionOracle& b, const Hypergraph& h, const VertexSet& w,
                                            const Ordering& pi);

inline constexpr int kInfiniteClass = INT_MAX;

struct RoundingState {
  std::vector<Rational> x;
  std::vector<Rational> d;
  std::vector<bool> reachable;  // from X; d is meaningless otherwise
  std::vector<int> kappa;       // kInfiniteClass when x = 0
  std::vector<Rational> offset;
  Ordering order;
  std::vector<Rational> c;  // marginal w.r.t. all preceding neighbours
};

struct RoundingResult {
  VertexSet separator;
  Rational cost;     // b_pi of the separator, an upper bound on its b*
  Rational b_value;  // b of the separator
  Rational weight;   // weight of the fractional separator
  Rational threshold;
  RoundingState state;
};

/// Rounds a fractional (X,Y)-separator into a vertex separator whose b_pi cost is at most
/// 31 times the fractional weight. DomainError when s is not a fractional separator.
RoundingResult round_fractional_separator(const Hypergraph& h, const VertexSet& x, const VertexSet& y,
                                          const EdgeWeights& s, const SetFunctionOracle& b);

/// Vertices from which S is reachable along edges oriented forward in `order`.
VertexSet in_neighbour_closure(const Hypergraph& h, const Ordering& order, const VertexSet& s);
/// Length of the union of [d - x, d] along the path.
Rational interval_width(const RoundingState& state, const std::vector<int>& path);

/// b(S) = total weight of the flow paths meeting S.
SetFunctionOracle flow_to_submodular(const Flow& f);

struct DecomposeOptions {
  Rational lambda = frac(1, 1000);
  BStarOptions bstar;
  ConnectivityOptions connectivity;
};

struct DecomposeOutcome {
  bool decomposed = false;
  // decomposition branch
  TreeDecomposition decomposition;
  Rational width;  // maximum b* over bags
  // highly connected branch
  VertexSet w;
  VertexWeights mu;
  ConnectivityCertificate certificate;
};

/// Either a tree decomposition of b*-width at most 3/2 (w+1), or a (mu, lambda)-connected set W
/// with mu(W) >= w. The returned branch is verified before returning.
DecomposeOutcome decompose_or_highly_connected(const Hypergraph& h, const SetFunctionOracle& b, const Rational& w,
                                               const DecomposeOptions& options = {});

/// Largest lambda for which rounding always yields b*(S) < min(mu(A), mu(B)).
Rational max_supported_lambda();

}  // namespace subw
