#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subw/hypergraph.hpp"
#include "subw/rational.hpp"

namespace subw {

/// Indexed by universe vertex.
using VertexWeights = std::vector<Rational>;
/// Indexed by edge position in Hypergraph::edges().
using EdgeWeights = std::vector<Rational>;

Rational total(const VertexWeights& mu, const VertexSet& s);
Rational total(const EdgeWeights& s);

struct CoverResult {
  Rational value;
  EdgeWeights gamma;
};

/// rho*_H(X). Throws DomainError when some vertex of X lies in no edge.
CoverResult fractional_edge_cover(const Hypergraph& h, const VertexSet& x);
Rational fractional_edge_cover_number(const Hypergraph& h, const VertexSet& x);

struct IntegralCover {
  int size = 0;
  std::vector<int> edges;
};

/// rho_H(X) by branch-and-bound. Same error contract as the fractional version.
IntegralCover edge_cover(const Hypergraph& h, const VertexSet& x);
int edge_cover_number(const Hypergraph& h, const VertexSet& x);

/// mu(e) <= 1 on every edge and mu >= 0.
bool is_fractional_independent_set(const Hypergraph& h, const VertexWeights& mu);
/// Maximum mu(W) over fractional independent sets supported on W.
CoverResult max_fractional_independent_set(const Hypergraph& h, const VertexSet& w, VertexWeights* mu = nullptr);

struct Flow {
  std::vector<Path> paths;
  std::vector<Rational> weights;

  Rational value() const;
  bool empty() const { return paths.empty(); }
};

/// Total weight of flow paths meeting each edge.
EdgeWeights edge_loads(const Hypergraph& h, const Flow& f);
bool respects_capacities(const Hypergraph& h, const Flow& f);
bool respects_capacities(const Hypergraph& h, const std::vector<Flow>& compatible);

/// Sum of s(e) over edges meeting the path.
Rational covered_weight(const Hypergraph& h, const Path& p, const EdgeWeights& s);
/// Every minimal X-Y path gets weight >= 1.
bool is_fractional_separator(const Hypergraph& h, const VertexSet& x, const VertexSet& y, const EdgeWeights& s);

struct SeparatorResult {
  Rational weight;
  EdgeWeights s;
};

/// Minimum fractional (X,Y)-separator via the covering LP over minimal paths.
/// DomainError when a zero-length path sits on a vertex in no edge (nothing can cover it).
SeparatorResult min_fractional_separator(const Hypergraph& h, const VertexSet& x, const VertexSet& y);

struct FlowResult {
  Rational value;
  Flow flow;
  EdgeWeights edge_duals;
};

/// Maximum (X,Y)-flow via the packing LP over minimal paths. Same error contract.
FlowResult max_flow(const Hypergraph& h, const VertexSet& x, const VertexSet& y);

struct MulticommodityResult {
  Rational value;
  std::vector<Flow> flows;
  EdgeWeights edge_duals;
  VertexWeights vertex_duals;
};

/// The mu-demand multicommodity flow LP and its dual. Pairs must be pairwise disjoint.
MulticommodityResult max_mu_demand_multicommodity_flow(const Hypergraph& h,
                                                       const std::vector<std::pair<VertexSet, VertexSet>>& pairs,
                                                       const VertexWeights& mu);

struct ConcurrentFlowResult {
  Rational epsilon;
  /// Pair order (0,1), (0,2), ..., (k-2,k-1).
  std::vector<std::pair<int, int>> pairs;
  std::vector<Flow> flows;
  EdgeWeights edge_duals;
  std::vector<Rational> lengths;
};

/// The uniform concurrent flow LP on parts X_1..X_k (k >= 2, disjoint, nonempty).
ConcurrentFlowResult max_uniform_concurrent_flow(const Hypergraph& h, const std::vector<VertexSet>& parts);

struct ConnectivityOptions {
  int max_w = 10;
  int jobs = 1;
};

struct ConnectivityCertificate {
  VertexSet w;
  VertexWeights mu;
  Rational lambda;
  bool connected = true;
  // witness, filled when !connected
  VertexSet a, b;
  EdgeWeights separator;
  Rational separator_weight;
};

/// Exhaustive check of (mu, lambda)-connectivity of W. The witness is the first violating
/// pair by (|A|+|B|, A∪B, A) in canonical order, restricted to vertices of positive weight.
ConnectivityCertificate is_mu_lambda_connected(const Hypergraph& h, const VertexWeights& mu, const VertexSet& w,
                                               const Rational& lambda, const ConnectivityOptions& options = {});

/// Empty string when the certificate holds; a positive verdict is re-derived exhaustively.
std::string check_connectivity_certificate(const Hypergraph& h, const ConnectivityCertificate& cert,
                                           const ConnectivityOptions& options = {});

struct ConLambdaOptions {
  int max_w = 10;
  long max_subsets = 59049;
  int jobs = 1;
};

struct ConLambdaResult {
  Rational value;
  ConnectivityCertificate certificate;
  long subsets_examined = 0;
};

/// Certified lower bound on con_lambda(H) from a bounded search over W.
ConLambdaResult con_lambda_lower_bound(const Hypergraph& h, const Rational& lambda, const ConLambdaOptions& options = {});

}  // namespace subw
