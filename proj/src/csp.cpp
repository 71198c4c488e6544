#include "subw/csp.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "subw/errors.hpp"

namespace subw {

namespace {

void sort_unique(std::vector<Tuple>& tuples) {
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
}

// Positions of `onto` within the increasing element list of `from`.
std::vector<std::size_t> positions(const VertexSet& from, const VertexSet& onto) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  from.for_each([&](int v) {
    if (onto.contains(v)) out.push_back(i);
    ++i;
  });
  return out;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

// Tuple over `scope` read off a total-enough assignment.
Tuple read_tuple(const Assignment& f, const VertexSet& scope) {
  Tuple t;
  t.reserve(static_cast<std::size_t>(scope.size()));
  scope.for_each([&](int v) { t.push_back(f[static_cast<std::size_t>(v)]); });
  return t;
}

void write_tuple(Assignment& f, const VertexSet& scope, const Tuple& t) {
  std::size_t i = 0;
  scope.for_each([&](int v) { f[static_cast<std::size_t>(v)] = t[i++]; });
}

bool contains_sorted(const std::vector<Tuple>& tuples, const Tuple& t) {
  return std::binary_search(tuples.begin(), tuples.end(), t);
}

// Constraints of pr_S I, checked as soon as their last variable in S is assigned.
class ProjectedChecker {
 public:
  ProjectedChecker(const CspInstance& instance, const VertexSet& s) : ProjectedChecker(instance, s, s.elements()) {}

  // `order` lists the elements of s in search order.
  ProjectedChecker(const CspInstance& instance, const VertexSet& s, std::vector<int> order) : order_(std::move(order)) {
    last_.resize(order_.size());
    std::vector<std::size_t> where(static_cast<std::size_t>(instance.universe_size()), 0);
    for (std::size_t i = 0; i < order_.size(); ++i) where[static_cast<std::size_t>(order_[i])] = i;
    for (const auto& c : instance.constraints()) {
      VertexSet cols = c.scope & s;
      if (cols.empty()) continue;
      std::size_t pos = 0;
      cols.for_each([&](int v) { pos = std::max(pos, where[static_cast<std::size_t>(v)]); });
      parts_.push_back({cols, project_relation(c, cols)});
      last_[pos].push_back(parts_.size() - 1);
    }
  }

  const std::vector<int>& order() const { return order_; }

  // Checks the constraints completed by assigning order_[pos].
  bool ok_at(std::size_t pos, const Assignment& f) const {
    for (std::size_t idx : last_[pos]) {
      const auto& part = parts_[idx];
      if (!contains_sorted(part.relation, read_tuple(f, part.scope))) return false;
    }
    return true;
  }

 private:
  struct Part {
    VertexSet scope;
    std::vector<Tuple> relation;
  };
  std::vector<int> order_;
  std::vector<Part> parts_;
  std::vector<std::vector<std::size_t>> last_;
};

}  // namespace

bool SolutionSet::contains(const Tuple& t) const { return contains_sorted(tuples, t); }

Tuple restrict_tuple(const Tuple& t, const VertexSet& from, const VertexSet& onto) {
  if (!onto.is_subset_of(from)) throw DomainError("restriction target is not a subset of the scope");
  Tuple out;
  for (std::size_t p : positions(from, onto)) out.push_back(t[p]);
  return out;
}

std::vector<Tuple> project_relation(const Constraint& c, const VertexSet& onto) {
  if (!onto.is_subset_of(c.scope)) throw DomainError("projection columns outside the constraint scope");
  const auto pos = positions(c.scope, onto);
  std::vector<Tuple> out;
  out.reserve(c.relation.size());
  for (const auto& t : c.relation) {
    Tuple r;
    r.reserve(pos.size());
    for (std::size_t p : pos) r.push_back(t[p]);
    out.push_back(std::move(r));
  }
  sort_unique(out);
  return out;
}

CspInstance::CspInstance(std::vector<std::string> variables, std::vector<std::string> domain,
                         std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> constraints)
    : domain_(std::move(domain)) {
  {
    std::set<std::string> seen;
    for (const auto& v : domain_) {
      if (!seen.insert(v).second) throw DomainError("duplicate domain value '" + v + "'");
    }
  }
  std::vector<int> order(variables.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return natural_less(variables[a], variables[b]); });
  std::vector<int> remap(variables.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && variables[order[i]] == variables[order[i - 1]]) {
      throw DomainError("duplicate variable '" + variables[order[i]] + "'");
    }
    remap[order[i]] = static_cast<int>(i);
    names_.push_back(variables[order[i]]);
  }
  variables_ = VertexSet::range(static_cast<int>(names_.size()));

  for (auto& [vars, tuples] : constraints) {
    if (vars.empty()) throw DomainError("constraint with an empty scope");
    Constraint c;
    std::vector<int> mapped;
    for (int v : vars) {
      if (v < 0 || v >= static_cast<int>(remap.size())) throw DomainError("constraint variable out of range");
      mapped.push_back(remap[v]);
      c.scope.insert(remap[v]);
    }
    const std::vector<int> cols = c.scope.elements();
    for (const auto& t : tuples) {
      if (t.size() != vars.size()) {
        throw DomainError("tuple arity " + std::to_string(t.size()) + " differs from scope arity " +
                          std::to_string(vars.size()));
      }
      for (int d : t) {
        if (d < 0 || d >= domain_size()) throw DomainError("tuple value out of domain range");
      }
      // A repeated variable keeps only tuples that agree on its columns.
      Tuple out(cols.size(), kUnassigned);
      bool agree = true;
      for (std::size_t i = 0; i < mapped.size() && agree; ++i) {
        auto at = static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), mapped[i]) - cols.begin());
        if (out[at] == kUnassigned) {
          out[at] = t[i];
        } else if (out[at] != t[i]) {
          agree = false;
        }
      }
      if (agree) c.relation.push_back(std::move(out));
    }
    sort_unique(c.relation);
    add(std::move(c));
  }
}

void CspInstance::add(Constraint c) {
  auto it = std::lower_bound(constraints_.begin(), constraints_.end(), c.scope,
                             [](const Constraint& a, const VertexSet& s) { return a.scope < s; });
  if (it != constraints_.end() && it->scope == c.scope) {
    std::vector<Tuple> both;
    std::set_intersection(it->relation.begin(), it->relation.end(), c.relation.begin(), c.relation.end(),
                          std::back_inserter(both));
    it->relation = std::move(both);
    return;
  }
  constraints_.insert(it, std::move(c));
}

CspInstance CspInstance::pruned() const {
  VertexSet covered;
  for (const auto& c : constraints_) covered |= c.scope;
  if (!variables_.is_subset_of(covered) || constraints_.empty()) return *this;
  std::vector<bool> used(domain_.size(), false);
  for (const auto& c : constraints_) {
    for (const auto& t : c.relation) {
      for (int d : t) used[static_cast<std::size_t>(d)] = true;
    }
  }
  if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return *this;
  std::vector<int> remap(domain_.size(), kUnassigned);
  CspInstance out = *this;
  out.domain_.clear();
  for (std::size_t d = 0; d < domain_.size(); ++d) {
    if (!used[d]) continue;
    remap[d] = static_cast<int>(out.domain_.size());
    out.domain_.push_back(domain_[d]);
  }
  for (auto& c : out.constraints_) {
    for (auto& t : c.relation) {
      for (int& d : t) d = remap[static_cast<std::size_t>(d)];
    }
    sort_unique(c.relation);
  }
  return out;
}

CspInstance CspInstance::parse(std::string_view text) {
  std::vector<std::string> vars;
  std::vector<std::string> domain;
  std::map<std::string, int> var_index, value_index;
  std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> constraints;
  bool in_block = false;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto fail = [&](const std::string& msg) { throw DomainError("line " + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto words = split_words(raw);
    if (words.empty()) continue;
    if (in_block) {
      if (words.size() == 1 && words[0] == "end") {
        in_block = false;
        continue;
      }
      auto& [scope, tuples] = constraints.back();
      if (words.size() != scope.size()) fail("tuple has " + std::to_string(words.size()) + " values, scope has " +
                                             std::to_string(scope.size()));
      Tuple t;
      for (const auto& w : words) {
        auto it = value_index.find(w);
        if (it == value_index.end()) fail("unknown value '" + w + "'");
        t.push_back(it->second);
      }
      tuples.push_back(std::move(t));
      continue;
    }
    const std::string& kw = words[0];
    if (kw == "var") {
      for (std::size_t i = 1; i < words.size(); ++i) {
        if (!var_index.emplace(words[i], static_cast<int>(vars.size())).second) fail("duplicate variable '" + words[i] + "'");
        vars.push_back(words[i]);
      }
    } else if (kw == "domain") {
      for (std::size_t i = 1; i < words.size(); ++i) {
        if (!value_index.emplace(words[i], static_cast<int>(domain.size())).second) {
          fail("duplicate value '" + words[i] + "'");
        }
        domain.push_back(words[i]);
      }
    } else if (kw == "constraint") {
      if (words.size() < 2) fail("constraint without variables");
      std::vector<int> scope;
      for (std::size_t i = 1; i < words.size(); ++i) {
        auto it = var_index.find(words[i]);
        if (it == var_index.end()) fail("unknown variable '" + words[i] + "'");
        scope.push_back(it->second);
      }
      constraints.push_back({std::move(scope), {}});
      in_block = true;
    } else {
      fail("unexpected '" + kw + "'");
    }
  }
  if (in_block) throw DomainError("constraint block not terminated by 'end'");
  return CspInstance(std::move(vars), std::move(domain), std::move(constraints)).pruned();
}

CspInstance CspInstance::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string CspInstance::to_text() const {
  std::ostringstream out;
  out << "var";
  variables_.for_each([&](int v) { out << ' ' << names_[v]; });
  out << "\ndomain";
  for (const auto& d : domain_) out << ' ' << d;
  out << '\n';
  for (const auto& c : constraints_) {
    out << "constraint";
    c.scope.for_each([&](int v) { out << ' ' << names_[v]; });
    out << '\n';
    for (const auto& t : c.relation) {
      out << ' ';
      for (int d : t) out << ' ' << domain_[d];
      out << '\n';
    }
    out << "end\n";
  }
  return out.str();
}

CspInstance CspInstance::from_json(const std::string& json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad CSP json: ") + e.what());
  }
  try {
    auto vars = j.at("variables").get<std::vector<std::string>>();
    auto domain = j.at("domain").get<std::vector<std::string>>();
    std::map<std::string, int> vi, di;
    for (std::size_t i = 0; i < vars.size(); ++i) vi[vars[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < domain.size(); ++i) di[domain[i]] = static_cast<int>(i);
    std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> constraints;
    for (const auto& c : j.at("constraints")) {
      std::vector<int> scope;
      for (const auto& name : c.at("scope").get<std::vector<std::string>>()) {
        auto it = vi.find(name);
        if (it == vi.end()) throw DomainError("unknown variable '" + name + "'");
        scope.push_back(it->second);
      }
      std::vector<Tuple> tuples;
      for (const auto& row : c.at("tuples")) {
        Tuple t;
        for (const auto& value : row.get<std::vector<std::string>>()) {
          auto it = di.find(value);
          if (it == di.end()) throw DomainError("unknown value '" + value + "'");
          t.push_back(it->second);
        }
        tuples.push_back(std::move(t));
      }
      constraints.push_back({std::move(scope), std::move(tuples)});
    }
    return CspInstance(std::move(vars), std::move(domain), std::move(constraints));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad CSP json: ") + e.what());
  }
}

std::string CspInstance::to_json() const {
  nlohmann::json j;
  j["variables"] = nlohmann::json::array();
  variables_.for_each([&](int v) { j["variables"].push_back(names_[v]); });
  j["domain"] = domain_;
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : constraints_) {
    nlohmann::json jc;
    jc["scope"] = nlohmann::json::array();
    c.scope.for_each([&](int v) { jc["scope"].push_back(names_[v]); });
    jc["tuples"] = nlohmann::json::array();
    for (const auto& t : c.relation) {
      nlohmann::json row = nlohmann::json::array();
      for (int d : t) row.push_back(domain_[d]);
      jc["tuples"].push_back(row);
    }
    j["constraints"].push_back(jc);
  }
  return j.dump();
}

int CspInstance::index_of(const std::string& variable) const {
  for (int v = 0; v < universe_size(); ++v) {
    if (names_[v] == variable) return v;
  }
  throw DomainError("unknown variable '" + variable + "'");
}

int CspInstance::value_index(const std::string& value) const {
  for (int d = 0; d < domain_size(); ++d) {
    if (domain_[d] == value) return d;
  }
  throw DomainError("unknown value '" + value + "'");
}

const Constraint* CspInstance::find(const VertexSet& scope) const {
  auto it = std::lower_bound(constraints_.begin(), constraints_.end(), scope,
                             [](const Constraint& a, const VertexSet& s) { return a.scope < s; });
  if (it != constraints_.end() && it->scope == scope) return &*it;
  return nullptr;
}

std::size_t CspInstance::max_relation_size() const {
  std::size_t best = 0;
  for (const auto& c : constraints_) best = std::max(best, c.relation.size());
  return best;
}

std::size_t CspInstance::size() const {
  std::size_t total = 0;
  for (const auto& c : constraints_) total += c.relation.size() * static_cast<std::size_t>(c.scope.size());
  return total;
}

CspInstance CspInstance::with_constraint(const VertexSet& scope, std::vector<Tuple> relation) const {
  if (scope.empty() || !scope.is_subset_of(variables_)) throw DomainError("new constraint scope outside the variables");
  for (const auto& t : relation) {
    if (t.size() != static_cast<std::size_t>(scope.size())) throw DomainError("tuple arity differs from scope");
  }
  CspInstance out = *this;
  Constraint c{scope, std::move(relation)};
  sort_unique(c.relation);
  out.add(std::move(c));
  return out;
}

Hypergraph CspInstance::hypergraph() const {
  std::vector<VertexSet> edges;
  for (const auto& c : constraints_) edges.push_back(c.scope);
  return Hypergraph(names_, edges, variables_);
}

bool CspInstance::satisfies(const Assignment& f) const { return first_violation(f).empty(); }

std::string CspInstance::first_violation(const Assignment& f) const {
  if (f.size() < names_.size()) return "assignment shorter than the variable universe";
  std::string missing;
  variables_.for_each([&](int v) {
    if (missing.empty() && (f[v] < 0 || f[v] >= domain_size())) missing = "variable " + names_[v] + " is unassigned";
  });
  if (!missing.empty()) return missing;
  for (const auto& c : constraints_) {
    Tuple t = read_tuple(f, c.scope);
    if (!contains_sorted(c.relation, t)) return "constraint on " + format(c.scope, t) + " is violated";
  }
  return {};
}

std::string CspInstance::format(const Assignment& f) const {
  std::string out;
  variables_.for_each([&](int v) {
    if (!out.empty()) out += ' ';
    out += names_[v] + "=" + (f[v] >= 0 && f[v] < domain_size() ? domain_[f[v]] : std::string("?"));
  });
  return out;
}

std::string CspInstance::format(const VertexSet& scope, const Tuple& t) const {
  std::string out = "(";
  std::size_t i = 0;
  scope.for_each([&](int v) {
    if (i > 0) out += ' ';
    out += names_[v] + "=" + domain_[t[i]];
    ++i;
  });
  return out + ")";
}

CspInstance project_instance(const CspInstance& instance, const VertexSet& v_prime) {
  if (v_prime.empty()) throw DomainError("projection onto an empty set of variables");
  if (!v_prime.is_subset_of(instance.variables())) throw DomainError("projection onto unknown variables");
  CspInstance out;
  out.names_ = instance.names_;
  out.variables_ = v_prime;
  out.domain_ = instance.domain_;
  for (const auto& c : instance.constraints()) {
    VertexSet cols = c.scope & v_prime;
    if (cols.empty()) continue;
    out.add(Constraint{cols, project_relation(c, cols)});
  }
  return out;
}

SolutionSet solutions(const CspInstance& instance, const VertexSet& s, const SolutionOptions& options) {
  if (s.empty()) throw DomainError("solutions requested for an empty set of variables");
  if (!s.is_subset_of(instance.variables())) throw DomainError("solutions requested for unknown variables");
  ProjectedChecker checker(instance, s);
  const auto& order = checker.order();
  const int nd = instance.domain_size();
  SolutionSet out;
  out.scope = s;
  Assignment f(static_cast<std::size_t>(instance.universe_size()), kUnassigned);
  std::size_t pos = 0;
  // Iterative backtracking; f[order[pos]] is the value being tried at depth pos.
  while (true) {
    int v = order[pos];
    ++f[v];
    if (f[v] >= nd) {
      f[v] = kUnassigned;
      if (pos == 0) break;
      --pos;
      continue;
    }
    if (!checker.ok_at(pos, f)) continue;
    if (pos + 1 == order.size()) {
      out.tuples.push_back(read_tuple(f, s));
      if (out.tuples.size() > options.max_solutions) {
        throw ResourceError("more than " + std::to_string(options.max_solutions) + " partial solutions");
      }
      continue;
    }
    ++pos;
  }
  // Values are tried in increasing order along increasing variables, so tuples come out sorted.
  return out;
}

SolutionSet all_solutions(const CspInstance& instance, const SolutionOptions& options) {
  if (instance.variables().empty()) return SolutionSet{{}, {Tuple{}}};
  return solutions(instance, instance.variables(), options);
}

std::vector<Tuple> project_solutions(const SolutionSet& a, const VertexSet& b) {
  if (!b.is_subset_of(a.scope)) throw DomainError("projection target is not a subset of the scope");
  const auto pos = positions(a.scope, b);
  std::vector<Tuple> out;
  out.reserve(a.tuples.size());
  for (const auto& t : a.tuples) {
    Tuple r;
    r.reserve(pos.size());
    for (std::size_t p : pos) r.push_back(t[p]);
    out.push_back(std::move(r));
  }
  sort_unique(out);
  return out;
}

SmallSets enumerate_M_small(const CspInstance& instance, std::uint64_t m) {
  if (m < 1) throw DomainError("M must be at least 1");
  SmallSets out;
  out.m = m;
  std::vector<VertexSet> level;
  instance.variables().for_each([&](int v) {
    SolutionSet sol = solutions(instance, VertexSet{v});
    if (sol.size() <= m) {
      out.sets.emplace(VertexSet{v}, std::move(sol));
      level.push_back(VertexSet{v});
    }
  });
  // Projections of each constraint onto subsets of its scope, shared across the levels.
  std::map<std::pair<std::size_t, VertexSet>, std::vector<Tuple>> projections;
  auto projected = [&](std::size_t ci, const VertexSet& cols) -> const std::vector<Tuple>& {
    auto key = std::make_pair(ci, cols);
    auto it = projections.find(key);
    if (it != projections.end()) return it->second;
    return projections.emplace(key, project_relation(instance.constraints()[ci], cols)).first->second;
  };
  const auto& cons = instance.constraints();
  while (!level.empty()) {
    std::set<VertexSet> next;
    for (const auto& s : level) {
      (instance.variables() - s).for_each([&](int v) {
        VertexSet grown = s | VertexSet{v};
        if (next.count(grown) || out.sets.count(grown)) return;
        bool hereditary = true;
        grown.for_each([&](int u) {
          if (hereditary && !out.sets.count(grown - VertexSet{u})) hereditary = false;
        });
        if (!hereditary) return;
        // Candidates: sol(S) extended by a value of sol({v}); only constraints through v can
        // reject, the others project onto S ∪ {v} exactly as onto S.
        const SolutionSet& base = out.sets.at(s);
        const SolutionSet& single = out.sets.at(VertexSet{v});
        std::vector<std::size_t> through;
        for (std::size_t ci = 0; ci < cons.size(); ++ci) {
          if (cons[ci].scope.contains(v)) through.push_back(ci);
        }
        const std::size_t at = static_cast<std::size_t>((s & VertexSet::range(v)).size());
        SolutionSet sol;
        sol.scope = grown;
        Assignment f(static_cast<std::size_t>(instance.universe_size()), kUnassigned);
        bool too_many = false;
        for (const auto& t : base.tuples) {
          write_tuple(f, s, t);
          for (const auto& dv : single.tuples) {
            f[v] = dv[0];
            bool ok = true;
            for (std::size_t ci : through) {
              VertexSet cols = cons[ci].scope & grown;
              if (!contains_sorted(projected(ci, cols), read_tuple(f, cols))) {
                ok = false;
                break;
              }
            }
            if (!ok) continue;
            Tuple r = t;
            r.insert(r.begin() + static_cast<std::ptrdiff_t>(at), dv[0]);
            sol.tuples.push_back(std::move(r));
            if (sol.tuples.size() > m) {
              too_many = true;
              break;
            }
          }
          if (too_many) break;
        }
        if (too_many) return;
        std::sort(sol.tuples.begin(), sol.tuples.end());
        out.sets.emplace(grown, std::move(sol));
        next.insert(grown);
      });
    }
    level.assign(next.begin(), next.end());
  }
  return out;
}

std::optional<ConsistencyViolation> find_consistency_violation(const CspInstance& instance, const SmallSets& small) {
  (void)instance;
  for (const auto& [a, sol_a] : small.sets) {
    if (a.size() < 2) continue;
    std::vector<VertexSet> subsets;
    detail::for_each_nonempty_subset(a, [&](const VertexSet& b) {
      if (b != a) subsets.push_back(b);
    });
    std::sort(subsets.begin(), subsets.end());
    for (const auto& b : subsets) {
      const SolutionSet& sol_b = small.at(b);
      std::vector<Tuple> proj = project_solutions(sol_a, b);
      if (proj.size() == sol_b.size()) continue;
      ConsistencyViolation v{b, a, {}};
      std::set_difference(sol_b.tuples.begin(), sol_b.tuples.end(), proj.begin(), proj.end(),
                          std::back_inserter(v.unextendable));
      if (v.unextendable.size() + proj.size() != sol_b.size()) {
        throw InternalError("projected solutions of a superset are not solutions of the subset");
      }
      return v;
    }
  }
  return std::nullopt;
}

bool is_M_consistent(const CspInstance& instance, std::uint64_t m) {
  return !find_consistency_violation(instance, enumerate_M_small(instance, m)).has_value();
}

ConsistencyResult make_M_consistent(const CspInstance& instance, std::uint64_t m) {
  if (m < 1) throw DomainError("M must be at least 1");
  const int n = instance.variable_count();
  // 2^|V| * M, saturating
  std::uint64_t bound = std::numeric_limits<std::uint64_t>::max();
  if (n < 63 && m <= (bound >> n)) bound = (std::uint64_t{1} << n) * m;
  ConsistencyResult out{instance, 0};
  while (true) {
    SmallSets small = enumerate_M_small(out.instance, m);
    auto violation = find_consistency_violation(out.instance, small);
    if (!violation) break;
    out.instance = out.instance.with_constraint(violation->b, project_solutions(small.at(violation->a), violation->b));
    ++out.constraints_added;
    if (static_cast<std::uint64_t>(out.constraints_added) > bound) {
      throw InternalError("consistency refinement exceeded 2^|V| * M rounds");
    }
  }
  return out;
}

bool is_nontrivial(const CspInstance& instance) {
  bool ok = true;
  instance.variables().for_each([&](int v) {
    if (ok && solutions(instance, VertexSet{v}).empty()) ok = false;
  });
  return ok;
}

bool is_refinement(const CspInstance& refined, const CspInstance& base, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (refined.names() != base.names() || refined.variables() != base.variables()) {
    return fail("variable sets differ");
  }
  if (refined.domain() != base.domain()) return fail("domains differ");
  for (const auto& c : base.constraints()) {
    const Constraint* r = refined.find(c.scope);
    if (!r) return fail("no constraint on scope " + base.hypergraph().format(c.scope));
    if (!std::includes(c.relation.begin(), c.relation.end(), r->relation.begin(), r->relation.end())) {
      return fail("constraint on " + base.hypergraph().format(c.scope) + " is not a subset");
    }
  }
  return true;
}

DecompositionSolve solve_with_decomposition(const CspInstance& instance, const CspInstance& refined,
                                            const TreeDecomposition& t, std::uint64_t m) {
  DecompositionSolve out;
  std::string why;
  if (!is_refinement(refined, instance, &why)) {
    out.violation = "not a refinement: " + why;
    return out;
  }
  const Hypergraph h = instance.hypergraph();
  auto report = validate_decomposition(h, t);
  if (!report.valid) {
    out.violation = "invalid decomposition: " + report.violation;
    return out;
  }
  if (!is_nontrivial(refined)) {
    out.violation = "refined instance is trivial";
    return out;
  }
  SmallSets small = enumerate_M_small(refined, m);
  if (auto v = find_consistency_violation(refined, small)) {
    out.violation = "refined instance is not M-consistent at " + h.format(v->b) + " within " + h.format(v->a);
    return out;
  }
  for (const auto& bag : t.bags) {
    if (!small.is_small(bag)) {
      out.violation = "bag " + h.format(bag) + " is not M-small";
      return out;
    }
  }
  out.preconditions_hold = true;

  Assignment f(static_cast<std::size_t>(instance.universe_size()), kUnassigned);
  std::vector<std::vector<int>> children(static_cast<std::size_t>(t.size()));
  int root = -1;
  for (int i = 0; i < t.size(); ++i) {
    if (t.parent[i] < 0) {
      root = i;
    } else {
      children[t.parent[i]].push_back(i);
    }
  }
  // Top-down: each bag takes the first member of sol(B) agreeing with its parent on the
  // shared variables. Consistency guarantees one exists.
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    const VertexSet& bag = t.bags[node];
    if (!bag.empty()) {
      VertexSet fixed = node == root ? VertexSet{} : (bag & t.bags[t.parent[node]]);
      Tuple want = read_tuple(f, fixed);
      const SolutionSet& sol = small.at(bag);
      const Tuple* pick = nullptr;
      for (const auto& cand : sol.tuples) {
        if (restrict_tuple(cand, bag, fixed) == want) {
          pick = &cand;
          break;
        }
      }
      if (!pick) throw InternalError("bag " + h.format(bag) + " has no extension of its parent's assignment");
      write_tuple(f, bag, *pick);
    }
    for (int c : children[node]) stack.push_back(c);
  }
  instance.variables().for_each([&](int v) {
    if (f[v] == kUnassigned) f[v] = solutions(refined, VertexSet{v}).tuples.front()[0];
  });
  if (auto bad = instance.first_violation(f); !bad.empty()) {
    throw InternalError("decomposition-guided assignment fails: " + bad);
  }
  out.assignment = std::move(f);
  return out;
}

std::optional<Assignment> brute_force_solve(const CspInstance& instance, const BruteForceOptions& options) {
  Assignment f(static_cast<std::size_t>(instance.universe_size()), kUnassigned);
  if (instance.variables().empty()) return f;
  std::vector<int> search = options.order.empty() ? instance.variables().elements() : options.order;
  {
    std::vector<int> sorted = search;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != instance.variables().elements()) throw DomainError("search order is not a permutation of the variables");
  }
  ProjectedChecker checker(instance, instance.variables(), std::move(search));
  const auto& order = checker.order();
  // closed[p]: every constraint on order[p] is complete at p, so the subtree below p does not
  // depend on its value and a failed subtree refutes the other values too
  std::vector<bool> closed(order.size(), true);
  {
    std::vector<std::size_t> where(static_cast<std::size_t>(instance.universe_size()), 0);
    for (std::size_t i = 0; i < order.size(); ++i) where[static_cast<std::size_t>(order[i])] = i;
    for (const auto& c : instance.constraints()) {
      std::size_t last = 0;
      c.scope.for_each([&](int v) { last = std::max(last, where[static_cast<std::size_t>(v)]); });
      c.scope.for_each([&](int v) {
        if (where[static_cast<std::size_t>(v)] < last) closed[where[static_cast<std::size_t>(v)]] = false;
      });
    }
  }
  const int nd = instance.domain_size();
  std::uint64_t nodes = 0;
  std::size_t pos = 0;
  while (true) {
    int v = order[pos];
    ++f[v];
    if (f[v] >= nd) {
      f[v] = kUnassigned;
      if (pos == 0) return std::nullopt;
      --pos;
      while (closed[pos]) {
        f[order[pos]] = kUnassigned;
        if (pos == 0) return std::nullopt;
        --pos;
      }
      continue;
    }
    if (++nodes > options.max_nodes) {
      throw ResourceError("brute-force search exceeded " + std::to_string(options.max_nodes) + " nodes");
    }
    if (!checker.ok_at(pos, f)) continue;
    if (pos + 1 == order.size()) return f;
    ++pos;
  }
}

CspInstance clique_instance(const Graph& g, int k) {
  if (k < 1) throw DomainError("clique size must be positive");
  std::vector<std::string> vars;
  for (int i = 1; i <= k; ++i) vars.push_back("k" + std::to_string(i));
  std::vector<int> verts = g.vertices.elements();
  std::vector<std::string> domain;
  for (int v : verts) domain.push_back(g.names[v]);
  std::vector<Tuple> edges;
  for (std::size_t a = 0; a < verts.size(); ++a) {
    for (std::size_t b = 0; b < verts.size(); ++b) {
      if (g.adjacent(verts[a], verts[b])) edges.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
  }
  std::vector<std::pair<std::vector<int>, std::vector<Tuple>>> constraints;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) constraints.push_back({{i, j}, edges});
  }
  return CspInstance(std::move(vars), std::move(domain), std::move(constraints));
}

}  // namespace subw
