#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subw/errors.hpp"
#include "subw/fractional.hpp"
#include "subw/hypergraph.hpp"
#include "subw/rational.hpp"

namespace subw {

struct TreeDecomposition {
  // parent[i] == -1 marks the root
  std::vector<int> parent;
  std::vector<VertexSet> bags;

  int size() const { return static_cast<int>(bags.size()); }
  int add_node(int parent_node, const VertexSet& bag);
  /// Lines `node <id> parent <id|-> bag v1 v2 ...`.
  std::string to_text(const std::vector<std::string>& names) const;
  static TreeDecomposition parse(std::string_view text, const std::vector<std::string>& names);
  static TreeDecomposition single_bag(const VertexSet& bag);
};

struct ValidationReport {
  bool valid = true;
  std::string violation;
};

/// Checks the tree shape, edge containment and the connected-occurrence condition.
ValidationReport validate_decomposition(const Hypergraph& h, const TreeDecomposition& t);
/// Graph version (edges are the graph's edges).
ValidationReport validate_decomposition(const Graph& g, const TreeDecomposition& t);

struct PmcOptions {
  int max_vertices = 16;
};

/// Maximal cliques of minimal triangulations, in canonical order, over the live vertices of G.
std::vector<VertexSet> enumerate_potential_maximal_cliques(const Graph& g, const PmcOptions& options = {});
bool is_potential_maximal_clique(const Graph& g, const VertexSet& omega);

struct WidthOptions {
  int max_vertices = 16;
  // exhaustive monotonicity check up to this many vertices; the DP always checks
  // f(Ω \ v) <= f(Ω) on the sets it evaluates
  int verify_cap = 8;
};

template <class Value>
struct WidthResult {
  Value width{};
  TreeDecomposition decomposition;
};

template <class Value>
using BagCost = std::function<Value(const VertexSet&)>;

namespace detail {

// Nonempty subsets of `s`, enumerated by position mask over its element list.
template <class Fn>
void for_each_nonempty_subset(const VertexSet& s, Fn&& fn) {
  const std::vector<int> elems = s.elements();
  const std::uint64_t limit = std::uint64_t{1} << elems.size();
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    VertexSet sub;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if ((mask >> i) & 1U) sub.insert(elems[i]);
    }
    fn(sub);
  }
}

template <class Value>
class FWidthSolver {
 public:
  FWidthSolver(const Hypergraph& h, BagCost<Value> f, const WidthOptions& options)
      : h_(h), g_(primal_graph(h)), f_(std::move(f)), options_(options) {}

  WidthResult<Value> run() {
    VertexSet live = h_.vertices() - h_.isolated_vertices();
    g_.vertices = live;
    if (live.size() > options_.max_vertices) {
      throw ResourceError("f-width DP limited to " + std::to_string(options_.max_vertices) + " vertices");
    }
    if (live.size() <= options_.verify_cap) verify_monotone_exhaustive(live);
    PmcOptions popts;
    popts.max_vertices = options_.max_vertices;
    pmcs_ = enumerate_potential_maximal_cliques(g_, popts);
    WidthResult<Value> result;
    if (live.empty()) {
      result.width = cost(VertexSet{});
      result.decomposition = TreeDecomposition::single_bag(VertexSet{});
      return result;
    }
    std::optional<Value> width;
    int root = -1;
    for (const auto& comp : g_.components(live)) {
      Choice top = best_for(VertexSet{}, comp);
      if (!width || *width < top.value) width = top.value;
      int node = emit(result.decomposition, root, top);
      if (root < 0) root = node;
    }
    result.width = *width;
    return result;
  }

 private:
  struct Choice {
    Value value{};
    VertexSet omega;
    std::vector<VertexSet> children;  // components handled below
  };

  const Value& cost(const VertexSet& s) {
    auto it = cost_.find(s);
    if (it != cost_.end()) return it->second;
    return cost_.emplace(s, f_(s)).first->second;
  }

  void verify_monotone_exhaustive(const VertexSet& live) {
    for_each_nonempty_subset(live, [&](const VertexSet& s) {
      s.for_each([&](int v) {
        if (cost(s) < cost(s - VertexSet{v})) {
          throw DomainError("bag cost is not monotone at vertex " + h_.name(v));
        }
      });
    });
  }

  void verify_local(const VertexSet& omega) {
    omega.for_each([&](int v) {
      if (cost(omega) < cost(omega - VertexSet{v})) {
        throw DomainError("bag cost is not monotone at vertex " + h_.name(v));
      }
    });
  }

  // Best decomposition of the block (S, C): bags inside S ∪ C, some bag containing S.
  // S is empty for a whole connected component.
  Choice best_for(const VertexSet& s, const VertexSet& c) {
    auto memo = memo_.find(c);
    if (memo != memo_.end()) return memo->second;
    const VertexSet scope = s | c;
    std::optional<Choice> best;
    for (const auto& omega : pmcs_) {
      if (!omega.is_subset_of(scope) || !s.is_subset_of(omega) || omega == s) continue;
      verify_local(omega);
      Choice cand;
      cand.omega = omega;
      cand.value = cost(omega);
      bool pruned = best && best->value < cand.value;
      if (pruned) continue;
      for (const auto& sub : g_.components(c - omega)) {
        const Value& v = best_for(g_.neighbourhood(sub), sub).value;
        if (cand.value < v) cand.value = v;
        cand.children.push_back(sub);
        if (best && best->value < cand.value) {
          pruned = true;
          break;
        }
      }
      if (pruned) continue;
      if (!best || cand.value < best->value) best = std::move(cand);
    }
    if (!best) throw InternalError("no potential maximal clique fits block " + h_.format(scope));
    memo_.emplace(c, *best);
    return *best;
  }

  int emit(TreeDecomposition& td, int parent, const Choice& choice) {
    int node = td.add_node(parent, choice.omega);
    for (const auto& sub : choice.children) emit(td, node, memo_.at(sub));
    return node;
  }

  const Hypergraph& h_;
  Graph g_;
  BagCost<Value> f_;
  WidthOptions options_;
  std::vector<VertexSet> pmcs_;
  std::map<VertexSet, Value> cost_;
  std::map<VertexSet, Choice> memo_;
};

}  // namespace detail

/// Exact minimum f-width over tree decompositions, for monotone f, by dynamic programming
/// over potential maximal cliques of the primal graph. Vertices in no edge are ignored.
/// `Value` needs a default constructor, copy and operator<.
template <class Value>
WidthResult<Value> min_f_width(const Hypergraph& h, BagCost<Value> f, const WidthOptions& options = {}) {
  return detail::FWidthSolver<Value>(h, std::move(f), options).run();
}

/// f-width of a given decomposition: the maximum bag cost.
template <class Value>
Value width_of(const TreeDecomposition& t, const BagCost<Value>& f) {
  std::optional<Value> w;
  for (const auto& bag : t.bags) {
    Value v = f(bag);
    if (!w || *w < v) w = v;
  }
  return w ? *w : Value{};
}

WidthResult<int> treewidth(const Hypergraph& h, const WidthOptions& options = {});
WidthResult<int> generalized_hypertree_width(const Hypergraph& h, const WidthOptions& options = {});
WidthResult<Rational> fractional_hypertree_width(const Hypergraph& h, const WidthOptions& options = {});
/// mu must be a fractional independent set.
WidthResult<Rational> mu_width(const Hypergraph& h, const VertexWeights& mu, const WidthOptions& options = {});
/// b must be monotone, edge-dominated and zero on the empty set; verified exhaustively when
/// |V| <= options.verify_cap, otherwise on the evaluated sets only.
WidthResult<Rational> b_width(const Hypergraph& h, const BagCost<Rational>& b, const WidthOptions& options = {});

/// Memoized rho_H and rho*_H bag costs.
BagCost<int> rho_cost(const Hypergraph& h);
BagCost<Rational> rho_star_cost(const Hypergraph& h);

}  // namespace subw
