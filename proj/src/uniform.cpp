#include "subw/uniform.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "subw/errors.hpp"

namespace subw {

namespace {

BigInt lcm_of(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigInt pow_of(const BigInt& base, const BigInt& exponent) {
  if (!exponent.fits_ulong_p()) throw ResourceError("exponent too large for exact log comparison");
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent.get_ui());
  return out;
}

std::vector<VertexSet> proper_nonempty_subsets(const VertexSet& a) {
  std::vector<VertexSet> out;
  detail::for_each_nonempty_subset(a, [&](const VertexSet& b) {
    if (b != a) out.push_back(b);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::string names_of(const CspInstance& inst, const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](int v) {
    if (!first) out += ' ';
    out += inst.name(v);
    first = false;
  });
  return out + "}";
}

}  // namespace

LogValue::LogValue(Rational offset) : offset_(std::move(offset)) {}

LogValue LogValue::log(unsigned long base, const Rational& arg, const Rational& coef) {
  if (base < 2) throw DomainError("logarithm base must be at least 2");
  if (sgn(arg) <= 0) throw DomainError("logarithm of a nonpositive number");
  LogValue out;
  out.base_ = base;
  if (arg != 1 && sgn(coef) != 0) out.terms_.emplace(arg, coef);
  return out;
}

void LogValue::merge_base(unsigned long other) {
  if (other == 0 || other == base_) return;
  if (base_ != 0) throw DomainError("log values with different bases");
  base_ = other;
}

LogValue& LogValue::operator+=(const LogValue& o) {
  merge_base(o.base_);
  offset_ += o.offset_;
  for (const auto& [arg, coef] : o.terms_) {
    Rational& mine = terms_[arg];
    mine += coef;
    if (sgn(mine) == 0) terms_.erase(arg);
  }
  return *this;
}

LogValue& LogValue::operator-=(const LogValue& o) {
  LogValue neg = o;
  neg *= Rational(-1);
  return *this += neg;
}

LogValue& LogValue::operator*=(const Rational& k) {
  offset_ *= k;
  if (sgn(k) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [arg, coef] : terms_) coef *= k;
  return *this;
}

int LogValue::sign() const {
  if (terms_.empty()) return sgn(offset_);
  // L * value = Σ a_i log_N x_i + k with integers a_i, k; compare Π x_i^a_i * N^k with 1.
  BigInt l = offset_.get_den();
  for (const auto& [arg, coef] : terms_) l = lcm_of(l, coef.get_den());
  BigInt lhs = 1, rhs = 1;
  for (const auto& [arg, coef] : terms_) {
    BigInt a = coef.get_num() * (l / coef.get_den());
    BigInt e = abs(a);
    BigInt num = pow_of(arg.get_num(), e), den = pow_of(arg.get_den(), e);
    if (sgn(a) > 0) {
      lhs *= num;
      rhs *= den;
    } else {
      lhs *= den;
      rhs *= num;
    }
  }
  BigInt k = offset_.get_num() * (l / offset_.get_den());
  BigInt nk = pow_of(BigInt(base_), abs(k));
  if (sgn(k) > 0) {
    lhs *= nk;
  } else {
    rhs *= nk;
  }
  int c = cmp(lhs, rhs);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

double LogValue::approx() const {
  double out = offset_.get_d();
  for (const auto& [arg, coef] : terms_) out += coef.get_d() * std::log(arg.get_d()) / std::log(double(base_));
  return out;
}

std::string LogValue::to_string() const {
  std::string out;
  for (const auto& [arg, coef] : terms_) {
    if (!out.empty()) out += " + ";
    out += subw::to_string(coef) + "*log_" + std::to_string(base_) + "(" + subw::to_string(arg) + ")";
  }
  if (out.empty() || sgn(offset_) != 0) {
    if (!out.empty()) out += " + ";
    out += subw::to_string(offset_);
  }
  return out;
}

std::uint64_t max_extensions(const SolutionSet& a, const SolutionSet& b) {
  if (!b.scope.is_subset_of(a.scope)) throw DomainError("max_extensions needs B ⊆ A");
  if (b.empty()) return 0;
  std::map<Tuple, std::uint64_t> counts;
  for (const auto& t : a.tuples) ++counts[restrict_tuple(t, a.scope, b.scope)];
  std::uint64_t best = 0;
  for (const auto& [t, n] : counts) {
    if (!b.contains(t)) throw InternalError("an extension projects outside sol(B)");
    best = std::max(best, n);
  }
  return best;
}

std::uint64_t max_extensions(const CspInstance& instance, const VertexSet& a, const VertexSet& b) {
  if (!b.is_subset_of(a)) throw DomainError("max_extensions needs B ⊆ A");
  if (a.empty()) return 1;
  SolutionSet sa = solutions(instance, a);
  if (b.empty()) return sa.size();
  return max_extensions(sa, solutions(instance, b));
}

std::uint64_t small_bound(std::uint64_t n, const Rational& c) {
  if (n < 1) throw DomainError("N must be at least 1");
  if (sgn(c) < 0) throw DomainError("c must be nonnegative");
  BigInt m = floor_power(n, c);
  if (m > BigInt(std::uint64_t{1} << 62)) throw ResourceError("N^c is too large");
  return m.get_ui();
}

std::optional<UniformityViolation> find_uniformity_violation(const SmallSets& small, const UniformityParams& params) {
  for (const auto& [a, sol_a] : small.sets) {
    if (a.size() < 2 || sol_a.empty()) continue;
    for (const auto& b : proper_nonempty_subsets(a)) {
      const SolutionSet& sol_b = small.at(b);
      std::uint64_t mx = max_extensions(sol_a, sol_b);
      if (mx == 0) continue;
      Rational ratio(BigInt(mx) * BigInt(sol_b.size()), BigInt(sol_a.size()));
      ratio.canonicalize();
      if (compare_to_power(ratio, params.n, params.eps) > 0) {
        return UniformityViolation{a, b, mx, sol_a.size(), sol_b.size()};
      }
    }
  }
  return std::nullopt;
}

bool is_uniform(const CspInstance& instance, const UniformityParams& params, std::optional<UniformityViolation>* witness) {
  auto v = find_uniformity_violation(enumerate_M_small(instance, small_bound(params.n, params.c)), params);
  if (witness) *witness = v;
  return !v.has_value();
}

namespace {

// sol(X ∪ Y) from the join of sol(X) and sol(Y), checked against every projected constraint.
SolutionSet union_solutions(const CspInstance& instance, const SolutionSet& x, const SolutionSet& y) {
  const VertexSet u = x.scope | y.scope;
  const VertexSet both = x.scope & y.scope;
  struct Part {
    VertexSet cols;
    std::vector<Tuple> rel;
  };
  std::vector<Part> parts;
  for (const auto& c : instance.constraints()) {
    VertexSet cols = c.scope & u;
    if (!cols.empty()) parts.push_back({cols, project_relation(c, cols)});
  }
  const std::vector<int> elems = u.elements();
  SolutionSet out;
  out.scope = u;
  for (const auto& tx : x.tuples) {
    const Tuple shared = restrict_tuple(tx, x.scope, both);
    for (const auto& ty : y.tuples) {
      if (restrict_tuple(ty, y.scope, both) != shared) continue;
      Tuple t;
      t.reserve(elems.size());
      std::size_t ix = 0, iy = 0;
      for (int v : elems) {
        const bool in_x = x.scope.contains(v), in_y = y.scope.contains(v);
        t.push_back(in_x ? tx[ix] : ty[iy]);
        ix += in_x;
        iy += in_y;
      }
      bool ok = true;
      for (const auto& p : parts) {
        if (!std::binary_search(p.rel.begin(), p.rel.end(), restrict_tuple(t, u, p.cols))) {
          ok = false;
          break;
        }
      }
      if (ok) out.tuples.push_back(std::move(t));
    }
  }
  std::sort(out.tuples.begin(), out.tuples.end());
  return out;
}

}  // namespace

std::optional<UnionGap> find_union_gap(const CspInstance& instance, const SmallSets& small) {
  std::set<VertexSet> seen;
  for (auto ix = small.sets.begin(); ix != small.sets.end(); ++ix) {
    for (auto iy = std::next(ix); iy != small.sets.end(); ++iy) {
      const VertexSet u = ix->first | iy->first;
      if (u == ix->first || u == iy->first || small.is_small(u) || !seen.insert(u).second) continue;
      SolutionSet sol = union_solutions(instance, ix->second, iy->second);
      if (sol.size() <= small.m) return UnionGap{ix->first, iy->first, std::move(sol)};
    }
  }
  return std::nullopt;
}

ClosureResult make_union_closed(const CspInstance& instance, std::uint64_t m) {
  ClosureResult out{instance, 0};
  const int n = instance.variable_count();
  for (int round = 0;; ++round) {
    ConsistencyResult cons = make_M_consistent(out.instance, m);
    out.instance = std::move(cons.instance);
    out.constraints_added += cons.constraints_added;
    SmallSets small = enumerate_M_small(out.instance, m);
    auto gap = find_union_gap(out.instance, small);
    if (!gap) return out;
    // each round makes a new set small
    if (n < 62 && round > (1 << std::min(n, 30))) throw InternalError("union closure did not terminate");
    for (const auto& z : proper_nonempty_subsets(gap->sol.scope)) {
      if (small.is_small(z)) continue;
      out.instance = out.instance.with_constraint(z, project_solutions(gap->sol, z));
      ++out.constraints_added;
    }
    if (!enumerate_M_small(out.instance, m).is_small(gap->sol.scope)) {
      throw InternalError("closing a union gap left the union non-small");
    }
  }
}

namespace {

// Σ log_N max(A|B) over small A and B ⊊ A (B = ∅ contributes log |sol(A)|).
LogValue split_weight(const SmallSets& small, std::uint64_t n) {
  LogValue w;
  for (const auto& [a, sol_a] : small.sets) {
    if (sol_a.empty()) throw InternalError("empty small set in a consistent nontrivial instance");
    w += LogValue::log(n, Rational(BigInt(sol_a.size())));
    for (const auto& b : proper_nonempty_subsets(a)) {
      std::uint64_t mx = max_extensions(sol_a, small.at(b));
      if (mx == 0) throw InternalError("unextendable assignment in a consistent instance");
      w += LogValue::log(n, Rational(BigInt(mx)));
    }
  }
  return w;
}

}  // namespace

std::string SplitTrace::to_text(const CspInstance& instance) const {
  std::ostringstream out;
  out << "# N=" << params.n << " c=" << to_string(params.c) << " eps=" << to_string(params.eps) << " M=" << m << '\n';
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (node.outcome != SplitNode::Outcome::Split) continue;
    out << "split node " << i << " depth " << node.depth << " A=" << names_of(instance, node.a)
        << " B=" << names_of(instance, node.b) << " max=" << node.max << " sol(A)=" << node.sol_a
        << " sol(B)=" << node.sol_b << " threshold=sqrt(N^eps)*" << node.sol_a << "/" << node.sol_b
        << " small=" << node.small_side << " large=" << node.large_side << '\n';
  }
  return out.str();
}

SplitResult split_uniform(const CspInstance& instance, std::uint64_t n, const Rational& c, const Rational& eps,
                          const SplitOptions& options) {
  if (n < 1) throw DomainError("N must be at least 1");
  if (c < 1) throw DomainError("c must be at least 1");
  if (sgn(eps) <= 0) throw DomainError("eps must be positive");
  SplitResult result;
  auto& trace = result.trace;
  trace.params = UniformityParams{n, c, eps};
  trace.m = small_bound(n, c);
  const std::uint64_t m = trace.m;
  const Rational half_eps = eps / 2;

  struct Pending {
    CspInstance inst;
    int parent;
  };
  std::vector<Pending> stack{{instance, -1}};
  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(trace.nodes.size()) >= options.max_nodes) {
      throw ResourceError("uniform splitting exceeded " + std::to_string(options.max_nodes) + " nodes");
    }
    const int id = static_cast<int>(trace.nodes.size());
    trace.nodes.emplace_back();
    {
      auto& node = trace.nodes.back();
      node.parent = item.parent;
      node.depth = item.parent < 0 ? 0 : trace.nodes[item.parent].depth + 1;
    }
    if (item.parent >= 0) trace.nodes[item.parent].children.push_back(id);
    if (!is_nontrivial(item.inst)) continue;
    ClosureResult cons = make_union_closed(item.inst, m);
    trace.nodes[id].constraints_added = cons.constraints_added;
    CspInstance j = std::move(cons.instance);
    if (!is_nontrivial(j)) continue;
    SmallSets small = enumerate_M_small(j, m);
    {
      auto& node = trace.nodes[id];
      for (const auto& [s, sol] : small.sets) node.small_sets.push_back(s);
      if (n >= 2) {
        node.weight = split_weight(small, n);
        if (node.parent >= 0) {
          const auto& up = trace.nodes[node.parent];
          if (up.small_sets == node.small_sets &&
              !(node.weight <= up.weight - LogValue(half_eps))) {
            throw InternalError("split weight did not drop by (eps/2) log N");
          }
        }
      }
    }
    auto violation = find_uniformity_violation(small, trace.params);
    if (!violation) {
      trace.nodes[id].outcome = SplitNode::Outcome::Uniform;
      trace.nodes[id].output = static_cast<int>(result.outputs.size());
      result.outputs.push_back(std::move(j));
      continue;
    }
    const SolutionSet& sol_a = small.at(violation->a);
    const SolutionSet& sol_b = small.at(violation->b);
    std::map<Tuple, std::uint64_t> counts;
    for (const auto& t : sol_a.tuples) ++counts[restrict_tuple(t, sol_a.scope, sol_b.scope)];
    std::vector<Tuple> small_rel, large_rel;
    for (const auto& t : sol_b.tuples) {
      auto it = counts.find(t);
      std::uint64_t k = it == counts.end() ? 0 : it->second;
      // small side: k <= sqrt(N^eps) |sol(A)| / |sol(B)|; ties go small
      bool is_small = k == 0;
      if (!is_small) {
        Rational ratio(BigInt(k) * BigInt(sol_b.size()), BigInt(sol_a.size()));
        ratio.canonicalize();
        is_small = compare_to_power(ratio, n, half_eps) <= 0;
      }
      (is_small ? small_rel : large_rel).push_back(t);
    }
    if (small_rel.empty() || large_rel.empty()) throw InternalError("a uniformity split left one side empty");
    {
      Rational shrink(BigInt(sol_b.size()), BigInt(large_rel.size()));
      shrink.canonicalize();
      if (compare_to_power(shrink, n, half_eps) < 0) throw InternalError("large side exceeds |sol(B)| / sqrt(N^eps)");
    }
    CspInstance i_small = j.with_constraint(violation->b, small_rel);
    CspInstance i_large = j.with_constraint(violation->b, large_rel);
    // The split term drops by (eps/2) log N on both sides.
    {
      std::uint64_t after = max_extensions(i_small, violation->a, violation->b);
      if (after > 0) {
        Rational drop(BigInt(violation->max), BigInt(after));
        drop.canonicalize();
        if (compare_to_power(drop, n, half_eps) < 0) throw InternalError("small side did not lower max(A|B) enough");
      }
      std::uint64_t large_b = solutions(i_large, violation->b).size();
      if (large_b != large_rel.size()) throw InternalError("large side constraint did not restrict sol(B) exactly");
    }
    {
      auto& node = trace.nodes[id];
      node.outcome = SplitNode::Outcome::Split;
      node.a = violation->a;
      node.b = violation->b;
      node.max = violation->max;
      node.sol_a = violation->sol_a;
      node.sol_b = violation->sol_b;
      node.small_side = small_rel.size();
      node.large_side = large_rel.size();
    }
    // depth-first, small side first
    stack.push_back({std::move(i_large), id});
    stack.push_back({std::move(i_small), id});
  }
  return result;
}

LogSetFunction build_submodular_from_uniform(const CspInstance& instance, std::uint64_t n, const Rational& c) {
  return build_submodular_from_uniform(instance, n, c, instance.hypergraph());
}

LogSetFunction build_submodular_from_uniform(const CspInstance& instance, std::uint64_t n, const Rational& c,
                                             const Hypergraph& h) {
  const int vars = instance.variable_count();
  if (vars < 2) throw DomainError("the uniform construction needs at least two variables");
  if (n < 2) throw DomainError("the uniform construction needs N >= 2");
  if (c < 1) throw DomainError("c must be at least 1");
  const Rational eps = frac(1, vars);
  const std::uint64_t m = small_bound(n, c);
  if (!is_nontrivial(instance)) throw DomainError("instance is trivial");
  SmallSets small = enumerate_M_small(instance, m);
  if (auto v = find_consistency_violation(instance, small)) throw DomainError("instance is not N^c-consistent");
  if (auto g = find_union_gap(instance, small)) {
    throw DomainError("instance has a union gap: " + names_of(instance, g->x) + " and " + names_of(instance, g->y) +
                      " are small, their union has " + std::to_string(g->sol.size()) + " solutions but is not small");
  }
  const Rational eps3 = eps * eps * eps;
  if (auto v = find_uniformity_violation(small, UniformityParams{n, c, eps3})) {
    throw DomainError("instance is not (N, c, eps^3)-uniform at A=" + names_of(instance, v->a) +
                      " B=" + names_of(instance, v->b));
  }
  if (h.names() != instance.names()) throw DomainError("hypergraph and instance name different variables");
  for (const auto& e : h.edges()) {
    std::size_t count = small.is_small(e) ? small.at(e).size() : solutions(instance, e).size();
    if (count > n) throw DomainError("edge " + names_of(instance, e) + " has more than N solutions");
  }
  auto sizes = std::make_shared<std::map<VertexSet, std::uint64_t>>();
  for (const auto& [s, sol] : small.sets) sizes->emplace(s, sol.size());
  const VertexSet universe = instance.variables();
  return [sizes, universe, n, c, eps](const VertexSet& s) -> LogValue {
    if (!s.is_subset_of(universe)) throw DomainError("set outside the variables");
    if (s.empty()) return LogValue(Rational(0));
    const Rational k(s.size());
    const Rational h = 2 * eps * eps * k - eps * eps * eps * k * k;
    const Rational keep = 1 - eps;
    auto it = sizes->find(s);
    if (it == sizes->end()) return LogValue(Rational(keep * c + h));
    LogValue out = LogValue::log(n, Rational(BigInt(it->second)), keep);
    out += LogValue(h);
    return out;
  };
}

PropertyReport check_log_properties(const LogSetFunction& b, const Hypergraph& h, int cap) {
  if (h.vertex_count() > cap) throw ResourceError("property check limited to " + std::to_string(cap) + " vertices");
  std::map<VertexSet, LogValue> memo;
  auto val = [&](const VertexSet& s) -> const LogValue& {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    return memo.emplace(s, b(s)).first->second;
  };
  PropertyReport report;
  auto note = [&](bool& flag, const std::string& why) {
    if (flag) report.counterexamples.push_back(why);
    flag = false;
  };
  if (val(VertexSet{}).sign() != 0) note(report.zero_on_empty, "b({}) = " + val(VertexSet{}).to_string());
  std::vector<VertexSet> all{VertexSet{}};
  detail::for_each_nonempty_subset(h.vertices(), [&](const VertexSet& s) { all.push_back(s); });
  const std::vector<int> verts = h.vertices().elements();
  for (const auto& s : all) {
    if (val(s).sign() < 0) note(report.nonnegative, "b(" + h.format(s) + ") < 0");
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const int u = verts[i];
      if (s.contains(u)) continue;
      VertexSet su = s;
      su.insert(u);
      if (val(su) < val(s)) note(report.monotone, "b(" + h.format(su) + ") < b(" + h.format(s) + ")");
      for (std::size_t j = i + 1; j < verts.size(); ++j) {
        const int v = verts[j];
        if (s.contains(v)) continue;
        VertexSet sv = s, suv = su;
        sv.insert(v);
        suv.insert(v);
        if (val(su) + val(sv) < val(suv) + val(s)) {
          note(report.submodular, "b(" + h.format(su) + ") + b(" + h.format(sv) + ") < b(" + h.format(suv) +
                                      ") + b(" + h.format(s) + ")");
        }
      }
    }
  }
  for (const auto& e : h.edges()) {
    if (LogValue(Rational(1)) < val(e)) note(report.edge_dominated, "b(" + h.format(e) + ") > 1");
  }
  return report;
}

std::string to_string(FptResult::Verdict v) {
  switch (v) {
    case FptResult::Verdict::Sat:
      return "SAT";
    case FptResult::Verdict::Unsat:
      return "UNSAT";
    case FptResult::Verdict::BoundViolated:
      return "BOUND-VIOLATED";
  }
  return "?";
}

namespace {

// Instances where the logarithmic construction degenerates: one variable, or every relation
// has at most one tuple.
FptResult solve_direct(const CspInstance& instance) {
  FptResult r;
  r.method = "direct";
  r.n = instance.max_relation_size();
  Assignment f(static_cast<std::size_t>(instance.universe_size()), kUnassigned);
  if (instance.variable_count() == 1) {
    SolutionSet sol = solutions(instance, instance.variables());
    if (sol.empty()) return r;
    f[instance.variables().first()] = sol.tuples.front()[0];
  } else {
    for (const auto& c : instance.constraints()) {
      if (c.relation.empty()) return r;
      std::size_t i = 0;
      bool clash = false;
      c.scope.for_each([&](int v) {
        int want = c.relation.front()[i++];
        if (f[v] != kUnassigned && f[v] != want) clash = true;
        f[v] = want;
      });
      if (clash) return r;
    }
    bool stuck = false;
    instance.variables().for_each([&](int v) {
      if (f[v] != kUnassigned) return;
      if (instance.domain_size() == 0) stuck = true;
      f[v] = 0;
    });
    if (stuck) return r;
  }
  if (auto bad = instance.first_violation(f); !bad.empty()) throw InternalError("direct solution fails: " + bad);
  r.verdict = FptResult::Verdict::Sat;
  r.assignment = std::move(f);
  return r;
}

}  // namespace

FptResult solve_fpt(const CspInstance& instance, const Rational& c0, const FptOptions& options) {
  if (sgn(c0) < 0) throw DomainError("c0 must be nonnegative");
  const int vars = instance.variable_count();
  if (vars == 0) {
    FptResult r;
    r.method = "direct";
    r.verdict = FptResult::Verdict::Sat;
    r.assignment.assign(static_cast<std::size_t>(instance.universe_size()), kUnassigned);
    return r;
  }
  const std::uint64_t n = instance.max_relation_size();
  if (vars == 1 || n <= 1) return solve_direct(instance);

  FptResult r;
  r.method = "uniform-split";
  r.n = n;
  r.eps = frac(1, vars);
  r.c = c0 / (1 - r.eps);
  // Splitting needs c >= 1; raising c keeps b(B) <= c0 implying smallness.
  if (r.c < 1) r.c = 1;
  r.m = small_bound(n, r.c);
  SplitResult split = split_uniform(instance, n, r.c, r.eps * r.eps * r.eps, options.split);
  r.outputs = split.outputs.size();
  if (split.outputs.empty()) return r;

  const CspInstance& first = split.outputs.front();
  const Hypergraph h = instance.hypergraph();
  LogSetFunction b = build_submodular_from_uniform(first, n, r.c, h);
  BagCost<LogValue> cost = [b](const VertexSet& s) { return b(s); };
  WidthResult<LogValue> wr = min_f_width<LogValue>(h, cost, options.width);
  r.b_width = wr.width;
  r.decomposition = wr.decomposition;
  SmallSets small = enumerate_M_small(first, r.m);
  for (const auto& bag : wr.decomposition.bags) {
    if (!small.is_small(bag)) {
      r.verdict = FptResult::Verdict::BoundViolated;
      r.violation = "bag " + h.format(bag) + " is not N^c-small; b-width " + wr.width.to_string() +
                    " exceeds the supplied c0 = " + to_string(c0);
      return r;
    }
  }
  DecompositionSolve ds = solve_with_decomposition(instance, first, wr.decomposition, r.m);
  if (!ds.preconditions_hold) throw InternalError("uniform output failed the extension preconditions: " + ds.violation);
  r.verdict = FptResult::Verdict::Sat;
  r.assignment = std::move(ds.assignment);
  return r;
}

}  // namespace subw
