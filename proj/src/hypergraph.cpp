#include "subw/hypergraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "subw/errors.hpp"

namespace subw {

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && digit(a[i2])) ++i2;
      while (j2 < b.size() && digit(b[j2])) ++j2;
      // strip leading zeros, then compare by length and digits
      std::size_t ia = i, jb = j;
      while (ia + 1 < i2 && a[ia] == '0') ++ia;
      while (jb + 1 < j2 && b[jb] == '0') ++jb;
      std::size_t la = i2 - ia, lb = j2 - jb;
      if (la != lb) return la < lb;
      int c = a.compare(ia, la, b, jb, lb);
      if (c != 0) return c < 0;
      if (i2 - i != j2 - j) return i2 - i < j2 - j;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

void Graph::add_edge(int u, int v) {
  if (u == v) return;
  adj[u].insert(v);
  adj[v].insert(u);
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
  std::vector<std::pair<int, int>> out;
  vertices.for_each([&](int u) {
    adj[u].for_each([&](int v) {
      if (u < v) out.emplace_back(u, v);
    });
  });
  return out;
}

int Graph::edge_count() const { return static_cast<int>(edge_list().size()); }

VertexSet Graph::neighbourhood(const VertexSet& s) const {
  VertexSet out;
  s.for_each([&](int v) { out |= adj[v]; });
  return out - s;
}

std::vector<VertexSet> Graph::components(const VertexSet& within) const {
  std::vector<VertexSet> out;
  VertexSet left = within & vertices;
  while (!left.empty()) {
    VertexSet comp;
    VertexSet frontier;
    frontier.insert(left.first());
    while (!frontier.empty()) {
      comp |= frontier;
      VertexSet next;
      frontier.for_each([&](int v) { next |= adj[v]; });
      frontier = (next & left) - comp;
    }
    out.push_back(comp);
    left -= comp;
  }
  return out;
}

bool Graph::is_clique(const VertexSet& s) const {
  bool ok = true;
  s.for_each([&](int v) {
    if (ok && !(s - VertexSet{v}).is_subset_of(adj[v])) ok = false;
  });
  return ok;
}

Hypergraph::Hypergraph(std::vector<std::string> names, const std::vector<VertexSet>& edges, const VertexSet& extra) {
  // re-sort the universe naturally and remap the given sets
  std::vector<int> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return natural_less(names[a], names[b]); });
  std::vector<int> remap(names.size());
  names_.resize(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = static_cast<int>(i);
    names_[i] = names[order[i]];
  }
  for (std::size_t i = 1; i < names_.size(); ++i) {
    if (names_[i] == names_[i - 1]) throw DomainError("duplicate vertex name: " + names_[i]);
  }
  auto translate = [&](const VertexSet& s) {
    VertexSet out;
    s.for_each([&](int v) {
      if (v >= static_cast<int>(remap.size())) throw DomainError("edge refers to a vertex outside the universe");
      out.insert(remap[v]);
    });
    return out;
  };
  for (const auto& e : edges) {
    if (e.empty()) throw DomainError("empty hyperedge");
    edges_.push_back(translate(e));
  }
  vertices_ = translate(extra);
  canonicalize();
}

void Hypergraph::canonicalize() {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& e : edges_) vertices_ |= e;
  incident_.assign(names_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edges_[i].for_each([&](int v) { incident_[v].push_back(static_cast<int>(i)); });
  }
}

Hypergraph Hypergraph::from_edges(const std::vector<std::vector<std::string>>& edges,
                                  const std::vector<std::string>& isolated) {
  std::map<std::string, int> ids;
  std::vector<std::string> names;
  auto id = [&](const std::string& n) {
    auto [it, fresh] = ids.emplace(n, static_cast<int>(names.size()));
    if (fresh) names.push_back(n);
    return it->second;
  };
  std::vector<VertexSet> sets;
  for (const auto& e : edges) {
    VertexSet s;
    for (const auto& n : e) s.insert(id(n));
    sets.push_back(s);
  }
  VertexSet extra;
  for (const auto& n : isolated) extra.insert(id(n));
  return Hypergraph(std::move(names), sets, extra);
}

Hypergraph Hypergraph::parse(std::string_view text) {
  std::vector<std::vector<std::string>> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> edge;
    std::string w;
    while (words >> w) edge.push_back(w);
    if (!edge.empty()) edges.push_back(std::move(edge));
  }
  return from_edges(edges);
}

Hypergraph Hypergraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open hypergraph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Hypergraph::to_text() const {
  if (has_isolated_vertices()) throw DomainError("text format cannot represent isolated vertices");
  std::string out;
  for (const auto& e : edges_) {
    bool first = true;
    e.for_each([&](int v) {
      if (!first) out += ' ';
      out += names_[v];
      first = false;
    });
    out += '\n';
  }
  return out;
}

int Hypergraph::index_of(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name, natural_less);
  if (it == names_.end() || *it != name) throw DomainError("unknown vertex: " + name);
  return static_cast<int>(it - names_.begin());
}

VertexSet Hypergraph::set_of(const std::vector<std::string>& names) const {
  VertexSet s;
  for (const auto& n : names) s.insert(index_of(n));
  return s;
}

std::vector<std::string> Hypergraph::names_of(const VertexSet& s) const {
  std::vector<std::string> out;
  s.for_each([&](int v) { out.push_back(names_[v]); });
  return out;
}

std::string Hypergraph::format(const VertexSet& s) const {
  std::string out = "{";
  bool first = true;
  s.for_each([&](int v) {
    if (!first) out += ' ';
    out += names_[v];
    first = false;
  });
  return out + "}";
}

std::string Hypergraph::edge_key(int edge) const {
  std::string out;
  edges_[edge].for_each([&](int v) {
    if (!out.empty()) out += ',';
    out += names_[v];
  });
  return out;
}

int Hypergraph::edge_by_key(const std::string& key) const {
  std::vector<std::string> parts;
  std::stringstream in(key);
  std::string part;
  while (std::getline(in, part, ',')) parts.push_back(part);
  VertexSet s = set_of(parts);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), s);
  if (it == edges_.end() || *it != s) throw DomainError("unknown edge: " + key);
  return static_cast<int>(it - edges_.begin());
}

VertexSet Hypergraph::isolated_vertices() const {
  VertexSet covered;
  for (const auto& e : edges_) covered |= e;
  return vertices_ - covered;
}

bool Hypergraph::has_isolated_vertices() const { return !isolated_vertices().empty(); }

Graph primal_graph(const Hypergraph& h) {
  Graph g;
  g.names = h.names();
  g.vertices = h.vertices();
  g.adj.assign(h.names().size(), {});
  for (const auto& e : h.edges()) {
    e.for_each([&](int v) { g.adj[v] |= e - VertexSet{v}; });
  }
  return g;
}

Hypergraph induced_subhypergraph(const Hypergraph& h, const VertexSet& v_prime) {
  if (!v_prime.is_subset_of(h.vertices())) throw DomainError("induced_subhypergraph: V' is not a subset of V(H)");
  std::vector<VertexSet> edges;
  for (const auto& e : h.edges()) {
    VertexSet t = e & v_prime;
    if (!t.empty()) edges.push_back(t);
  }
  // names are already sorted, so the constructor keeps indices stable
  return Hypergraph(h.names(), edges, v_prime);
}

namespace {

bool adjacent(const Hypergraph& h, int u, int v) {
  if (u == v) return false;
  for (int e : h.incident(u)) {
    if (h.edges()[e].contains(v)) return true;
  }
  return false;
}

}  // namespace

bool is_path(const Hypergraph& h, const Path& p) {
  if (p.vertices.empty()) return false;
  for (int v : p.vertices) {
    if (!h.vertices().contains(v)) return false;
  }
  for (std::size_t i = 1; i < p.vertices.size(); ++i) {
    if (!adjacent(h, p.vertices[i - 1], p.vertices[i])) return false;
  }
  return true;
}

bool is_minimal_path(const Hypergraph& h, const Path& p) {
  if (!is_path(h, p)) throw DomainError("not a path of the hypergraph");
  const auto& vs = p.vertices;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 2; j < vs.size(); ++j) {
      if (vs[i] == vs[j] || adjacent(h, vs[i], vs[j])) return false;
    }
    if (i + 1 < vs.size() && vs[i] == vs[i + 1]) return false;
  }
  return true;
}

bool touch(const Hypergraph& h, const VertexSet& x, const VertexSet& y) {
  if (x.intersects(y)) return true;
  for (const auto& e : h.edges()) {
    if (e.intersects(x) && e.intersects(y)) return true;
  }
  return false;
}

namespace {

constexpr std::size_t kMaxPaths = 2'000'000;

// Extends minimal paths from `path`; `blocked` holds the path and the neighbours of all
// but its last vertex.
template <class Emit>
void extend_paths(const Graph& g, std::vector<int>& path, const VertexSet& blocked, std::size_t& count, Emit&& emit) {
  emit(path);
  if (++count > kMaxPaths) throw ResourceError("minimal path enumeration exceeded its cap");
  int last = path.back();
  VertexSet next_blocked = blocked | g.adj[last];
  (g.adj[last] - blocked).for_each([&](int u) {
    path.push_back(u);
    VertexSet b = next_blocked;
    b.insert(u);
    extend_paths(g, path, b, count, emit);
    path.pop_back();
  });
}

std::vector<Path> paths_from(const Hypergraph& h, const VertexSet& x, const VertexSet* y) {
  Graph g = primal_graph(h);
  std::vector<Path> out;
  std::size_t count = 0;
  (x & h.vertices()).for_each([&](int start) {
    std::vector<int> path{start};
    VertexSet blocked{start};
    extend_paths(g, path, blocked, count, [&](const std::vector<int>& p) {
      if (y == nullptr || y->contains(p.back())) out.push_back(Path{p});
    });
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Path> all_minimal_paths(const Hypergraph& h) { return paths_from(h, h.vertices(), nullptr); }

std::vector<Path> enumerate_minimal_paths(const Hypergraph& h, const VertexSet& x, const VertexSet& y) {
  return paths_from(h, x, &y);
}

std::vector<int> edges_hit(const Hypergraph& h, const Path& p) {
  VertexSet s = p.vertex_set();
  std::vector<int> out;
  for (int e = 0; e < h.edge_count(); ++e) {
    if (h.edges()[e].intersects(s)) out.push_back(e);
  }
  return out;
}

std::vector<VertexSet> components(const Hypergraph& h, const VertexSet& within) {
  return primal_graph(h).components(within);
}

bool separates(const Hypergraph& h, const VertexSet& removed, const VertexSet& x, const VertexSet& y) {
  Graph g = primal_graph(h);
  VertexSet alive = h.vertices() - removed;
  VertexSet start = x & alive;
  VertexSet target = y & alive;
  VertexSet seen = start;
  VertexSet frontier = start;
  while (!frontier.empty()) {
    if (frontier.intersects(target)) return false;
    VertexSet next;
    frontier.for_each([&](int v) { next |= g.adj[v]; });
    frontier = (next & alive) - seen;
    seen |= frontier;
  }
  return !seen.intersects(target);
}

}  // namespace subw
