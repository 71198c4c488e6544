#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "subw/vertex_set.hpp"

namespace subw {

/// Orders strings so that embedded digit runs compare numerically ("x2" < "x10").
bool natural_less(const std::string& a, const std::string& b);

/// Simple graph over a named universe. Only indices in `vertices` are live.
struct Graph {
  std::vector<std::string> names;
  VertexSet vertices;
  std::vector<VertexSet> adj;

  int universe_size() const { return static_cast<int>(names.size()); }
  bool adjacent(int u, int v) const { return adj[u].contains(v); }
  void add_edge(int u, int v);
  std::vector<std::pair<int, int>> edge_list() const;
  int edge_count() const;
  /// Neighbourhood of a set, excluding the set itself.
  VertexSet neighbourhood(const VertexSet& s) const;
  /// Connected components of the subgraph induced by `within`, in order of smallest element.
  std::vector<VertexSet> components(const VertexSet& within) const;
  bool is_clique(const VertexSet& s) const;
};

class Hypergraph {
 public:
  Hypergraph() = default;
  /// `names` is the universe (re-sorted naturally); vertices = union of edges plus `extra`.
  Hypergraph(std::vector<std::string> names, const std::vector<VertexSet>& edges, const VertexSet& extra = {});

  static Hypergraph from_edges(const std::vector<std::vector<std::string>>& edges,
                               const std::vector<std::string>& isolated = {});
  /// One edge per line; `#` starts a comment; blank lines ignored.
  static Hypergraph parse(std::string_view text);
  static Hypergraph load(const std::string& path);
  std::string to_text() const;

  int universe_size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int v) const { return names_[v]; }
  const VertexSet& vertices() const { return vertices_; }
  int vertex_count() const { return vertices_.size(); }
  const std::vector<VertexSet>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Index of a vertex name; throws DomainError when unknown.
  int index_of(const std::string& name) const;
  VertexSet set_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const VertexSet& s) const;
  /// "{a b c}"
  std::string format(const VertexSet& s) const;
  /// "a,b,c", used for edge keys in weight files
  std::string edge_key(int edge) const;
  int edge_by_key(const std::string& key) const;

  /// Edges containing v.
  const std::vector<int>& incident(int v) const { return incident_[v]; }
  bool has_isolated_vertices() const;
  VertexSet isolated_vertices() const;

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.names_ == b.names_ && a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  void canonicalize();

  std::vector<std::string> names_;
  VertexSet vertices_;
  std::vector<VertexSet> edges_;
  std::vector<std::vector<int>> incident_;
};

struct Path {
  std::vector<int> vertices;

  int first() const { return vertices.front(); }
  int second() const { return vertices.back(); }
  int length() const { return static_cast<int>(vertices.size()) - 1; }
  VertexSet vertex_set() const { return VertexSet::of(vertices); }
  friend bool operator==(const Path& a, const Path& b) { return a.vertices == b.vertices; }
  friend bool operator<(const Path& a, const Path& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  }
};

Graph primal_graph(const Hypergraph& h);
/// Edges are the nonempty traces e ∩ v_prime; throws DomainError unless v_prime ⊆ V(H).
Hypergraph induced_subhypergraph(const Hypergraph& h, const VertexSet& v_prime);
bool is_path(const Hypergraph& h, const Path& p);
/// Throws DomainError if `p` is not a path of `h`.
bool is_minimal_path(const Hypergraph& h, const Path& p);
bool touch(const Hypergraph& h, const VertexSet& x, const VertexSet& y);
/// Every minimal path of H (both orientations), sorted by (length, sequence).
std::vector<Path> all_minimal_paths(const Hypergraph& h);
/// Minimal paths with first endpoint in X and second in Y, sorted by (length, sequence).
std::vector<Path> enumerate_minimal_paths(const Hypergraph& h, const VertexSet& x, const VertexSet& y);
/// Edges of H meeting the path's vertices.
std::vector<int> edges_hit(const Hypergraph& h, const Path& p);
/// Connected components of H[within] (via the primal graph).
std::vector<VertexSet> components(const Hypergraph& h, const VertexSet& within);
/// True when no path connects X and Y inside H minus `removed`.
bool separates(const Hypergraph& h, const VertexSet& removed, const VertexSet& x, const VertexSet& y);

}  // namespace subw
