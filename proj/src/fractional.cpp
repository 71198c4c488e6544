#include "subw/fractional.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "subw/errors.hpp"
#include "subw/linprog.hpp"
#include "subw/parallel.hpp"

namespace subw {

Rational total(const VertexWeights& mu, const VertexSet& s) {
  Rational sum;
  s.for_each([&](int v) {
    if (v < static_cast<int>(mu.size())) sum += mu[v];
  });
  return sum;
}

Rational total(const EdgeWeights& s) {
  Rational sum;
  for (const auto& v : s) sum += v;
  return sum;
}

Rational Flow::value() const {
  Rational sum;
  for (const auto& w : weights) sum += w;
  return sum;
}

namespace {

void require_subset(const Hypergraph& h, const VertexSet& s, const char* what) {
  if (!s.is_subset_of(h.vertices())) throw DomainError(std::string(what) + " is not a subset of V(H)");
}

void require_coverable(const Hypergraph& h, const VertexSet& x) {
  VertexSet bad = x & h.isolated_vertices();
  if (!bad.empty()) throw DomainError("vertex " + h.format(bad) + " lies in no edge");
}

VertexSet hit_set(const Hypergraph& h, const Path& p) {
  VertexSet hit;
  for (int v : p.vertices) {
    for (int e : h.incident(v)) hit.insert(e);
  }
  return hit;
}

// Paths sharing a key whose edge sets are supersets of another's are dominated for
// both the packing and the covering LP; keep one representative per minimal edge set.
struct PathColumn {
  Path path;
  VertexSet hit;
  int key = 0;
};

std::vector<PathColumn> undominated(std::vector<PathColumn> cols) {
  std::stable_sort(cols.begin(), cols.end(), [](const PathColumn& a, const PathColumn& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.hit.size() < b.hit.size();
  });
  std::vector<PathColumn> out;
  std::size_t group_start = 0;
  for (auto& c : cols) {
    if (!out.empty() && out.back().key != c.key) group_start = out.size();
    bool dominated = false;
    for (std::size_t i = group_start; i < out.size() && !dominated; ++i) {
      dominated = out[i].hit.is_subset_of(c.hit);
    }
    if (!dominated) out.push_back(std::move(c));
  }
  return out;
}

std::vector<PathColumn> columns_for(const Hypergraph& h, const std::vector<Path>& paths, const VertexSet& x,
                                    const VertexSet& y, int key) {
  std::vector<PathColumn> cols;
  for (const auto& p : paths) {
    if (x.contains(p.first()) && y.contains(p.second())) cols.push_back(PathColumn{p, hit_set(h, p), key});
  }
  return cols;
}

void reject_uncoverable(const Hypergraph& h, const std::vector<PathColumn>& cols) {
  for (const auto& c : cols) {
    if (c.hit.empty()) {
      throw DomainError("zero-length path at isolated vertex " + h.name(c.path.first()) +
                        " cannot be covered or capacity-bounded");
    }
  }
}

SeparatorResult separator_from_paths(const Hypergraph& h, const std::vector<Path>& paths, const VertexSet& x,
                                     const VertexSet& y) {
  auto cols = undominated(columns_for(h, paths, x, y, 0));
  reject_uncoverable(h, cols);
  SeparatorResult res;
  res.s.assign(h.edge_count(), Rational(0));
  if (cols.empty()) return res;
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  for (int e = 0; e < h.edge_count(); ++e) lp.add_variable(1);
  for (const auto& c : cols) {
    std::vector<Rational> row(h.edge_count());
    c.hit.for_each([&](int e) { row[e] = 1; });
    lp.add_constraint(std::move(row), Relation::GreaterEqual, 1);
  }
  auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) throw InternalError("separator LP not optimal");
  res.weight = sol.objective;
  res.s = sol.primal;
  return res;
}

}  // namespace

CoverResult fractional_edge_cover(const Hypergraph& h, const VertexSet& x) {
  require_subset(h, x, "X");
  require_coverable(h, x);
  CoverResult res;
  res.gamma.assign(h.edge_count(), Rational(0));
  if (x.empty()) return res;
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  for (int e = 0; e < h.edge_count(); ++e) lp.add_variable(1);
  x.for_each([&](int v) {
    std::vector<Rational> row(h.edge_count());
    for (int e : h.incident(v)) row[e] = 1;
    lp.add_constraint(std::move(row), Relation::GreaterEqual, 1);
  });
  auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) throw InternalError("cover LP not optimal");
  res.value = sol.objective;
  res.gamma = sol.primal;
  return res;
}

Rational fractional_edge_cover_number(const Hypergraph& h, const VertexSet& x) {
  return fractional_edge_cover(h, x).value;
}

IntegralCover edge_cover(const Hypergraph& h, const VertexSet& x) {
  require_subset(h, x, "X");
  require_coverable(h, x);
  IntegralCover best;
  best.size = x.size() + 1;
  std::vector<int> chosen;
  std::function<void(const VertexSet&)> rec = [&](const VertexSet& uncovered) {
    if (uncovered.empty()) {
      if (static_cast<int>(chosen.size()) < best.size) {
        best.size = static_cast<int>(chosen.size());
        best.edges = chosen;
      }
      return;
    }
    if (static_cast<int>(chosen.size()) + 1 >= best.size) return;
    // branch on the uncovered vertex with the fewest covering edges
    int pivot = -1;
    std::size_t fewest = 0;
    uncovered.for_each([&](int v) {
      if (pivot < 0 || h.incident(v).size() < fewest) {
        pivot = v;
        fewest = h.incident(v).size();
      }
    });
    for (int e : h.incident(pivot)) {
      chosen.push_back(e);
      rec(uncovered - h.edges()[e]);
      chosen.pop_back();
    }
  };
  rec(x);
  std::sort(best.edges.begin(), best.edges.end());
  return best;
}

int edge_cover_number(const Hypergraph& h, const VertexSet& x) { return edge_cover(h, x).size; }

bool is_fractional_independent_set(const Hypergraph& h, const VertexWeights& mu) {
  if (static_cast<int>(mu.size()) < h.universe_size()) return false;
  for (const auto& m : mu) {
    if (sgn(m) < 0) return false;
  }
  for (const auto& e : h.edges()) {
    if (total(mu, e) > 1) return false;
  }
  return true;
}

CoverResult max_fractional_independent_set(const Hypergraph& h, const VertexSet& w, VertexWeights* mu) {
  require_subset(h, w, "W");
  require_coverable(h, w);
  std::vector<int> verts = w.elements();
  CoverResult res;
  VertexWeights weights(h.universe_size());
  if (!verts.empty()) {
    LinearProgram lp;
    for (std::size_t i = 0; i < verts.size(); ++i) lp.add_variable(1);
    for (const auto& e : h.edges()) {
      std::vector<Rational> row(verts.size());
      bool any = false;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        if (e.contains(verts[i])) {
          row[i] = 1;
          any = true;
        }
      }
      if (any) lp.add_constraint(std::move(row), Relation::LessEqual, 1);
    }
    auto sol = solve(lp);
    if (sol.status != LpStatus::Optimal) throw InternalError("independent set LP not optimal");
    res.value = sol.objective;
    for (std::size_t i = 0; i < verts.size(); ++i) weights[verts[i]] = sol.primal[i];
  }
  if (mu != nullptr) *mu = weights;
  res.gamma.clear();
  return res;
}

EdgeWeights edge_loads(const Hypergraph& h, const Flow& f) {
  EdgeWeights load(h.edge_count());
  for (std::size_t i = 0; i < f.paths.size(); ++i) {
    hit_set(h, f.paths[i]).for_each([&](int e) { load[e] += f.weights[i]; });
  }
  return load;
}

bool respects_capacities(const Hypergraph& h, const Flow& f) { return respects_capacities(h, std::vector<Flow>{f}); }

bool respects_capacities(const Hypergraph& h, const std::vector<Flow>& compatible) {
  EdgeWeights load(h.edge_count());
  for (const auto& f : compatible) {
    for (std::size_t i = 0; i < f.paths.size(); ++i) {
      if (sgn(f.weights[i]) < 0 || !is_path(h, f.paths[i])) return false;
      VertexSet hit = hit_set(h, f.paths[i]);
      if (hit.empty() && sgn(f.weights[i]) > 0) return false;
      hit.for_each([&](int e) { load[e] += f.weights[i]; });
    }
  }
  for (const auto& l : load) {
    if (l > 1) return false;
  }
  return true;
}

Rational covered_weight(const Hypergraph& h, const Path& p, const EdgeWeights& s) {
  Rational sum;
  hit_set(h, p).for_each([&](int e) { sum += s[e]; });
  return sum;
}

bool is_fractional_separator(const Hypergraph& h, const VertexSet& x, const VertexSet& y, const EdgeWeights& s) {
  if (static_cast<int>(s.size()) != h.edge_count()) return false;
  for (const auto& w : s) {
    if (sgn(w) < 0) return false;
  }
  for (const auto& p : enumerate_minimal_paths(h, x, y)) {
    if (covered_weight(h, p, s) < 1) return false;
  }
  return true;
}

SeparatorResult min_fractional_separator(const Hypergraph& h, const VertexSet& x, const VertexSet& y) {
  require_subset(h, x, "X");
  require_subset(h, y, "Y");
  return separator_from_paths(h, enumerate_minimal_paths(h, x, y), x, y);
}

FlowResult max_flow(const Hypergraph& h, const VertexSet& x, const VertexSet& y) {
  require_subset(h, x, "X");
  require_subset(h, y, "Y");
  auto cols = undominated(columns_for(h, enumerate_minimal_paths(h, x, y), x, y, 0));
  reject_uncoverable(h, cols);
  FlowResult res;
  res.edge_duals.assign(h.edge_count(), Rational(0));
  if (cols.empty()) return res;
  LinearProgram lp;
  for (std::size_t j = 0; j < cols.size(); ++j) lp.add_variable(1);
  for (int e = 0; e < h.edge_count(); ++e) {
    std::vector<Rational> row(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].hit.contains(e)) row[j] = 1;
    }
    lp.add_constraint(std::move(row), Relation::LessEqual, 1);
  }
  auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) throw InternalError("flow LP not optimal");
  res.value = sol.objective;
  res.edge_duals = sol.dual;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (sgn(sol.primal[j]) > 0) {
      res.flow.paths.push_back(cols[j].path);
      res.flow.weights.push_back(sol.primal[j]);
    }
  }
  return res;
}

MulticommodityResult max_mu_demand_multicommodity_flow(const Hypergraph& h,
                                                       const std::vector<std::pair<VertexSet, VertexSet>>& pairs,
                                                       const VertexWeights& mu) {
  if (!is_fractional_independent_set(h, mu)) throw DomainError("mu is not a fractional independent set");
  VertexSet seen;
  for (const auto& [a, b] : pairs) {
    require_subset(h, a, "A_i");
    require_subset(h, b, "B_i");
    if (a.intersects(seen) || b.intersects(seen) || a.intersects(b)) {
      throw DomainError("pairs (A_i, B_i) do not form a partition");
    }
    seen |= a | b;
  }
  const int r = static_cast<int>(pairs.size());
  auto paths = all_minimal_paths(h);
  // group by (pair, first endpoint, second endpoint) so endpoint demands stay intact
  std::vector<PathColumn> raw;
  std::vector<int> pair_of;
  for (int i = 0; i < r; ++i) {
    for (auto& c : columns_for(h, paths, pairs[i].first, pairs[i].second, 0)) {
      c.key = (i * h.universe_size() + c.path.first()) * h.universe_size() + c.path.second();
      raw.push_back(std::move(c));
    }
  }
  auto cols = undominated(std::move(raw));
  MulticommodityResult res;
  res.flows.assign(r, Flow{});
  res.edge_duals.assign(h.edge_count(), Rational(0));
  res.vertex_duals.assign(h.universe_size(), Rational(0));
  if (cols.empty()) return res;
  const int n = h.universe_size();
  LinearProgram lp;
  for (std::size_t j = 0; j < cols.size(); ++j) lp.add_variable(1);
  for (int e = 0; e < h.edge_count(); ++e) {
    std::vector<Rational> row(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].hit.contains(e)) row[j] = 1;
    }
    lp.add_constraint(std::move(row), Relation::LessEqual, 1);
  }
  std::vector<int> vertex_row(n, -1);
  seen.for_each([&](int v) {
    std::vector<Rational> row(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].path.first() == v || cols[j].path.second() == v) row[j] = 1;
    }
    vertex_row[v] = lp.add_constraint(std::move(row), Relation::LessEqual, mu[v]);
  });
  auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) throw InternalError("multicommodity LP not optimal");
  res.value = sol.objective;
  for (int e = 0; e < h.edge_count(); ++e) res.edge_duals[e] = sol.dual[e];
  for (int v = 0; v < n; ++v) {
    if (vertex_row[v] >= 0) res.vertex_duals[v] = sol.dual[vertex_row[v]];
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (sgn(sol.primal[j]) == 0) continue;
    int i = cols[j].key / (n * n);
    res.flows[i].paths.push_back(cols[j].path);
    res.flows[i].weights.push_back(sol.primal[j]);
  }
  return res;
}

ConcurrentFlowResult max_uniform_concurrent_flow(const Hypergraph& h, const std::vector<VertexSet>& parts) {
  const int k = static_cast<int>(parts.size());
  if (k < 2) throw DomainError("concurrent flow needs at least two parts");
  VertexSet seen;
  for (const auto& p : parts) {
    require_subset(h, p, "X_i");
    if (p.empty()) throw DomainError("empty part");
    if (p.intersects(seen)) throw DomainError("parts are not disjoint");
    seen |= p;
  }
  ConcurrentFlowResult res;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) res.pairs.emplace_back(i, j);
  }
  const int m = static_cast<int>(res.pairs.size());
  auto paths = all_minimal_paths(h);
  std::vector<PathColumn> raw;
  for (int q = 0; q < m; ++q) {
    auto cols = columns_for(h, paths, parts[res.pairs[q].first], parts[res.pairs[q].second], q);
    raw.insert(raw.end(), cols.begin(), cols.end());
  }
  auto cols = undominated(std::move(raw));
  LinearProgram lp;
  const int eps = lp.add_variable(1);
  for (std::size_t j = 0; j < cols.size(); ++j) lp.add_variable(0);
  for (int e = 0; e < h.edge_count(); ++e) {
    std::vector<Rational> row(cols.size() + 1);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].hit.contains(e)) row[j + 1] = 1;
    }
    lp.add_constraint(std::move(row), Relation::LessEqual, 1);
  }
  for (int q = 0; q < m; ++q) {
    std::vector<Rational> row(cols.size() + 1);
    row[eps] = -1;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].key == q) row[j + 1] = 1;
    }
    lp.add_constraint(std::move(row), Relation::GreaterEqual, 0);
  }
  auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) throw InternalError("concurrent flow LP not optimal");
  res.epsilon = sol.objective;
  res.flows.assign(m, Flow{});
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (sgn(sol.primal[j + 1]) == 0) continue;
    res.flows[cols[j].key].paths.push_back(cols[j].path);
    res.flows[cols[j].key].weights.push_back(sol.primal[j + 1]);
  }
  res.edge_duals.assign(sol.dual.begin(), sol.dual.begin() + h.edge_count());
  for (int q = 0; q < m; ++q) res.lengths.push_back(-sol.dual[h.edge_count() + q]);
  return res;
}

namespace {

struct PairCandidate {
  VertexSet a, b;
  Rational threshold;  // lambda * min(mu(A), mu(B))
};

// Disjoint pairs (A,B) of nonempty subsets of `support`, each unordered pair once
// (A holds the smallest vertex), ordered by (|A|+|B|, A∪B, A).
template <class Visit>
void for_each_pair(const VertexSet& support, Visit&& visit) {
  std::vector<int> verts = support.elements();
  const int n = static_cast<int>(verts.size());
  std::vector<int> idx;
  std::function<bool(int, int)> choose;
  for (int size = 2; size <= n; ++size) {
    idx.clear();
    choose = [&](int start, int need) -> bool {
      if (need == 0) {
        VertexSet u;
        for (int i : idx) u.insert(verts[i]);
        const int lead = verts[idx[0]];
        std::vector<int> rest(idx.begin() + 1, idx.end());
        std::vector<VertexSet> as;
        const int r = static_cast<int>(rest.size());
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << r); ++m) {
          VertexSet a{lead};
          for (int t = 0; t < r; ++t) {
            if ((m >> t) & 1U) a.insert(verts[rest[t]]);
          }
          if (a != u) as.push_back(a);
        }
        std::sort(as.begin(), as.end());
        for (const auto& a : as) {
          if (!visit(a, u - a)) return false;
        }
        return true;
      }
      for (int i = start; i <= n - need; ++i) {
        idx.push_back(i);
        bool go = choose(i + 1, need - 1);
        idx.pop_back();
        if (!go) return false;
      }
      return true;
    };
    if (!choose(0, size)) return;
  }
}

bool joined(const std::vector<VertexSet>& comps, const VertexSet& a, const VertexSet& b) {
  for (const auto& c : comps) {
    if (c.intersects(a) && c.intersects(b)) return true;
  }
  return false;
}

void validate_connectivity_inputs(const Hypergraph& h, const VertexWeights& mu, const VertexSet& w,
                                  const Rational& lambda) {
  if (sgn(lambda) <= 0) throw DomainError("lambda must be positive");
  require_subset(h, w, "W");
  VertexSet bad = w & h.isolated_vertices();
  if (!bad.empty()) throw DomainError("isolated vertex " + h.format(bad) + " not allowed in W");
  if (!is_fractional_independent_set(h, mu)) throw DomainError("mu is not a fractional independent set");
}

}  // namespace

ConnectivityCertificate is_mu_lambda_connected(const Hypergraph& h, const VertexWeights& mu, const VertexSet& w,
                                               const Rational& lambda, const ConnectivityOptions& options) {
  validate_connectivity_inputs(h, mu, w, lambda);
  if (w.size() > options.max_w) {
    throw ResourceError("|W| = " + std::to_string(w.size()) + " exceeds the pair-enumeration cap " +
                        std::to_string(options.max_w));
  }
  ConnectivityCertificate cert;
  cert.w = w;
  cert.mu = mu;
  cert.lambda = lambda;
  cert.connected = true;
  VertexSet support;
  w.for_each([&](int v) {
    if (sgn(mu[v]) > 0) support.insert(v);
  });
  auto comps = components(h, h.vertices());
  // Any A-B path forces separator weight >= 1, so an LP is only needed when the
  // threshold exceeds 1; unjoined pairs have a zero separator.
  std::vector<PairCandidate> order;
  for_each_pair(support, [&](const VertexSet& a, const VertexSet& b) {
    Rational ma = total(mu, a), mb = total(mu, b);
    order.push_back(PairCandidate{a, b, lambda * (ma < mb ? ma : mb)});
    return true;
  });
  std::vector<int> lp_needed;
  std::vector<char> cheap_violation(order.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!joined(comps, order[i].a, order[i].b)) {
      cheap_violation[i] = 1;
      break;  // everything after the first violation is irrelevant
    }
    if (order[i].threshold > 1) lp_needed.push_back(static_cast<int>(i));
  }
  std::vector<SeparatorResult> seps(lp_needed.size());
  std::vector<Path> paths;
  if (!lp_needed.empty()) paths = all_minimal_paths(h);
  parallel_for(lp_needed.size(), options.jobs, [&](std::size_t t) {
    const auto& c = order[lp_needed[t]];
    seps[t] = separator_from_paths(h, paths, c.a, c.b);
  });
  std::size_t next_lp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& c = order[i];
    if (cheap_violation[i]) {
      cert.connected = false;
      cert.a = c.a;
      cert.b = c.b;
      cert.separator.assign(h.edge_count(), Rational(0));
      cert.separator_weight = 0;
      return cert;
    }
    if (next_lp < lp_needed.size() && lp_needed[next_lp] == static_cast<int>(i)) {
      const auto& sep = seps[next_lp++];
      if (sep.weight < c.threshold) {
        cert.connected = false;
        cert.a = c.a;
        cert.b = c.b;
        cert.separator = sep.s;
        cert.separator_weight = sep.weight;
        return cert;
      }
    }
  }
  return cert;
}

std::string check_connectivity_certificate(const Hypergraph& h, const ConnectivityCertificate& cert,
                                           const ConnectivityOptions& options) {
  try {
    validate_connectivity_inputs(h, cert.mu, cert.w, cert.lambda);
  } catch (const DomainError& e) {
    return e.what();
  }
  if (cert.connected) {
    auto again = is_mu_lambda_connected(h, cert.mu, cert.w, cert.lambda, options);
    if (!again.connected) return "W is not connected: pair " + h.format(again.a) + " / " + h.format(again.b);
    return {};
  }
  if (cert.a.empty() || cert.b.empty() || cert.a.intersects(cert.b)) return "witness sets not disjoint and nonempty";
  if (!(cert.a | cert.b).is_subset_of(cert.w)) return "witness sets leave W";
  if (!is_fractional_separator(h, cert.a, cert.b, cert.separator)) return "witness is not a fractional separator";
  if (total(cert.separator) != cert.separator_weight) return "separator weight misreported";
  Rational ma = total(cert.mu, cert.a), mb = total(cert.mu, cert.b);
  if (!(cert.separator_weight < cert.lambda * (ma < mb ? ma : mb))) return "separator is not cheap enough";
  return {};
}

ConLambdaResult con_lambda_lower_bound(const Hypergraph& h, const Rational& lambda, const ConLambdaOptions& options) {
  if (sgn(lambda) <= 0) throw DomainError("lambda must be positive");
  ConLambdaResult best;
  best.certificate.mu.assign(h.universe_size(), Rational(0));
  best.certificate.lambda = lambda;
  std::vector<int> verts = (h.vertices() - h.isolated_vertices()).elements();
  const int n = static_cast<int>(verts.size());
  auto comps = components(h, h.vertices());
  std::vector<Path> paths;
  std::vector<int> idx;
  bool stop = false;
  std::function<void(int, int)> choose = [&](int start, int need) {
    if (stop) return;
    if (need == 0) {
      if (best.subsets_examined >= options.max_subsets) {
        stop = true;
        return;
      }
      ++best.subsets_examined;
      VertexSet w;
      for (int i : idx) w.insert(verts[i]);
      VertexWeights mu;
      Rational value = max_fractional_independent_set(h, w, &mu).value;
      if (value <= best.value) return;
      VertexSet support;
      w.for_each([&](int v) {
        if (sgn(mu[v]) > 0) support.insert(v);
      });
      Rational scale = 1;
      for_each_pair(support, [&](const VertexSet& a, const VertexSet& b) {
        Rational ma = total(mu, a), mb = total(mu, b);
        Rational m = ma < mb ? ma : mb;
        if (!joined(comps, a, b)) {
          scale = 0;
          return false;
        }
        if (lambda * scale * m > 1) {
          if (paths.empty()) paths = all_minimal_paths(h);
          Rational sep = separator_from_paths(h, paths, a, b).weight;
          Rational limit = sep / (lambda * m);
          if (limit < scale) scale = limit;
        }
        return true;
      });
      if (sgn(scale) == 0 || scale * value <= best.value) return;
      for (auto& m : mu) m *= scale;
      ConnectivityOptions copts;
      copts.max_w = options.max_w;
      copts.jobs = options.jobs;
      auto cert = is_mu_lambda_connected(h, mu, w, lambda, copts);
      if (!cert.connected) throw InternalError("scaled independent set failed its connectivity certificate");
      best.value = scale * value;
      best.certificate = cert;
      return;
    }
    for (int i = start; i <= n - need && !stop; ++i) {
      idx.push_back(i);
      choose(i + 1, need - 1);
      idx.pop_back();
    }
  };
  for (int size = 1; size <= std::min(n, options.max_w) && !stop; ++size) choose(0, size);
  return best;
}

}  // namespace subw
