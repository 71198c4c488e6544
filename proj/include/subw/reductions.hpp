#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subw/csp.hpp"
#include "subw/decomposition.hpp"
#include "subw/errors.hpp"
#include "subw/fractional.hpp"
#include "subw/hypergraph.hpp"
#include "subw/rational.hpp"

namespace subw {

// ---------------------------------------------------------------- 3SAT

/// Clauses hold DIMACS literals: +i / -i for variable i in 1..num_vars. At most three per clause.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  /// `c` comment lines, one `p cnf n m` header, clauses terminated by 0 (may span lines).
  static CnfFormula parse_dimacs(std::string_view text);
  static CnfFormula load_dimacs(const std::string& path);
  std::string to_dimacs() const;

  /// values[i] is the truth value of variable i+1.
  bool satisfied_by(const std::vector<bool>& values) const;
  int literal_count() const;
};

/// Variables x1..xn, y1..ym over domain {1,2,3}; one binary constraint per (variable, clause)
/// occurrence. Clauses with fewer than three literals also restrict y_j to the present
/// positions, inside the same constraints. An empty clause gives y_j an empty relation.
CspInstance sat_to_csp(const CnfFormula& phi);

/// Search order for sat_to_csp(phi): each clause variable y_j right after the x_i it
/// mentions, so brute force prunes clause by clause.
std::vector<int> clause_order(const CnfFormula& phi, const CspInstance& csp);

/// Truth values read off x1..xn of a solution of sat_to_csp(phi) (value 1 = true).
std::vector<bool> decode_sat_assignment(const CnfFormula& phi, const CspInstance& csp, const Assignment& a);

// ---------------------------------------------------------------- embeddings

/// psi: G-vertex -> set of H-vertices. Indexed by G's universe; dead G indices stay empty.
struct Embedding {
  std::vector<VertexSet> images;

  /// Lines `vertex: u -> {x y ...}` in G's canonical order.
  std::string to_text(const Graph& g, const std::vector<std::string>& h_names) const;
  /// Inverse of to_text; `#` comments and blank lines allowed. Unmentioned G vertices stay empty.
  static Embedding parse(std::string_view text, const Graph& g, const Hypergraph& h);
  static Embedding identity(const Graph& g);
};

struct DepthReport {
  int vertex_depth = 0;
  int edge_depth = 0;
  int weak_edge_depth = 0;
  // d(v) per H universe vertex
  std::vector<int> vertex_depths;
};

struct EmbeddingReport {
  bool valid = true;
  std::string violation;
  int witness = -1;  // G vertex
  DepthReport depths;
};

/// Depth accounting only; does not check validity.
DepthReport embedding_depths(const Hypergraph& h, const Embedding& psi);
/// Every live G vertex has a nonempty image inside V(H), connected in H, and adjacent G
/// vertices have touching images.
EmbeddingReport validate_embedding(const Graph& g, const Hypergraph& h, const Embedding& psi);

/// Edges are the graph's edges; isolated vertices kept.
Hypergraph graph_as_hypergraph(const Graph& g);

/// L_k: vertices v{i}_{j} for 1 <= i < j <= k, adjacent iff the index pairs meet.
Graph line_graph_of_clique(int k);
/// Universe index of v_{i,j} in line_graph_of_clique(k) (1 <= i < j <= k).
int line_vertex(int k, int i, int j);

/// Removes image vertices greedily (highest depth first) while the embedding stays valid.
/// Never increases any depth.
Embedding trim_embedding(const Graph& g, const Hypergraph& h, Embedding psi);

struct LineEmbeddingOptions {
  int exhaustive_max_vertices = 8;
  int max_image_size = 3;
  long max_nodes_per_branch = 200000;
  int budget = 0;  // vertex depth allowed; 0 means ceil(130 |E(G)| / k^2)
  int jobs = 1;
};

struct LineEmbeddingResult {
  bool found = false;
  Embedding embedding;
  int vertex_depth = 0;
  int budget = 0;
  std::string method;   // "exhaustive" or "greedy"
  std::string failure;  // when !found
};

/// Embedding of G into L_k with vertex depth within the budget: exhaustive iterative
/// deepening for small G, otherwise (or when the search runs out) star assignment + trimming.
LineEmbeddingResult embed_into_line_graph(const Graph& g, int k, const LineEmbeddingOptions& options = {});

/// A failure inside construct_embedding, tagged with the pipeline stage.
class StageError : public DomainError {
 public:
  StageError(std::string stage, const std::string& what)
      : DomainError("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ConstructOptions {
  VertexWeights mu;  // empty: 1/(max edge size) on every vertex
  int max_cliques = 6;
  int exhaustive_harvest_max_vertices = 8;
  bool trim = true;
  LineEmbeddingOptions line;
};

struct PathUse {
  int i = 0;  // clique indices, 0-based, i < j
  int j = 0;
  Path path;
  Rational weight;
  long capacity = 0;  // ceil((q/eps) * weight)
  long used = 0;
};

struct ConstructedEmbedding {
  Embedding embedding;
  DepthReport depths;
  DepthReport untrimmed;
  std::string harvest;  // "greedy" or "exhaustive"
  VertexWeights mu;
  std::vector<VertexSet> cliques;
  Rational epsilon;
  Rational lambda;
  Embedding line_embedding;
  int q = 0;  // vertex depth of the line-graph embedding
  std::vector<PathUse> paths;
};

/// Harvest cliques, solve the uniform concurrent flow LP on them, embed G into L_k and
/// replace every v_{i,j} by a path of F_{i,j} with capacity ceil((q/eps) w). Stage failures
/// throw StageError (or ResourceError when a cap is hit).
ConstructedEmbedding construct_embedding(const Graph& g, const Hypergraph& h, const Rational& lambda,
                                         const ConstructOptions& options = {});

// ---------------------------------------------------------------- simulation

struct SimulationOptions {
  std::uint64_t max_domain = 1U << 20;
  std::uint64_t max_tuples = 5000000;
};

struct SimulationResult {
  CspInstance instance;
  // U_v per variable of `instance` (sorted I1 variable indices)
  std::vector<std::vector<int>> codes;
  int d1 = 0;
  DepthReport depths;
  // per constraint of `instance`
  std::vector<std::size_t> relation_sizes;
  std::vector<BigInt> truth_table_sizes;

  /// pr_{U_v} of an I1 assignment, coded per H vertex.
  Assignment encode(const Assignment& a1) const;
  /// Inverse on solutions of `instance`; kUnassigned where no code covers a variable.
  Assignment decode(const Assignment& a2, int i1_universe) const;
};

/// I2 over the vertices of H (names kept), domain {1..max_v |D1|^|U_v|}, one constraint per
/// edge holding the coded consistent local assignments on U_e that satisfy every I1
/// constraint inside U_e. I1 must be binary, psi valid, and every image vertex in some edge.
SimulationResult simulate_csp_via_embedding(const CspInstance& i1, const Hypergraph& h, const Embedding& psi,
                                            const SimulationOptions& options = {});

// ---------------------------------------------------------------- transfer

/// B'_t = {u : psi(u) ∩ B_t != ∅} on the same tree.
TreeDecomposition transfer_decomposition(const Graph& g, const Hypergraph& h, const Embedding& psi,
                                         const TreeDecomposition& t);

/// mu(v) = d(v) / edge depth, a fractional independent set (all zero when the depth is 0).
VertexWeights depth_weights(const Hypergraph& h, const Embedding& psi);

}  // namespace subw
