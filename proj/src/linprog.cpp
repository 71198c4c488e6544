#include "subw/linprog.hpp"

#include <sstream>

#include "subw/errors.hpp"

namespace subw {

int LinearProgram::add_variable(const Rational& cost, bool nonneg) {
  const bool track = !nonnegative.empty() || !nonneg;
  if (track) nonnegative.resize(objective.size(), true);
  objective.push_back(cost);
  if (track) nonnegative.push_back(nonneg);
  for (auto& c : constraints) c.row.resize(objective.size());
  return num_variables() - 1;
}

int LinearProgram::add_constraint(std::vector<Rational> row, Relation relation, const Rational& rhs) {
  if (static_cast<int>(row.size()) > num_variables()) throw DomainError("constraint row longer than variable count");
  row.resize(objective.size());
  constraints.push_back(LpConstraint{std::move(row), relation, rhs});
  return num_constraints() - 1;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(rows, std::vector<Rational>(cols + 1)), obj_(cols), basis_(rows, -1), cols_(cols) {}

  Rational& at(int i, int j) { return t_[i][j]; }
  Rational& rhs(int i) { return t_[i][cols_]; }
  std::vector<Rational>& obj() { return obj_; }
  Rational& value() { return value_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.size()); }
  int cols() const { return cols_; }

  void pivot(int r, int c) {
    auto& prow = t_[r];
    Rational inv = 1 / prow[c];
    std::vector<int> nz;
    for (int j = 0; j <= cols_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    }
    Rational f;
    for (int i = 0; i < rows(); ++i) {
      if (i == r || sgn(t_[i][c]) == 0) continue;
      f = t_[i][c];
      for (int j : nz) t_[i][j] -= f * prow[j];
    }
    if (sgn(obj_[c]) != 0) {
      f = obj_[c];
      for (int j : nz) {
        if (j == cols_) {
          value_ += f * prow[j];
        } else {
          obj_[j] -= f * prow[j];
        }
      }
    }
    basis_[r] = c;
  }

  // Bland's rule. Returns false on unboundedness.
  bool optimize(const std::vector<bool>& barred) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (!barred[j] && sgn(obj_[j]) > 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best, ratio;
      for (int i = 0; i < rows(); ++i) {
        if (sgn(t_[i][enter]) <= 0) continue;
        ratio = t_[i][cols_] / t_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  // Sets the objective row to c - c_B B^-1 A for the given column costs.
  void load_objective(const std::vector<Rational>& cost) {
    value_ = 0;
    for (int j = 0; j < cols_; ++j) obj_[j] = cost[j];
    for (int i = 0; i < rows(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (int j = 0; j < cols_; ++j) {
        if (sgn(t_[i][j]) != 0) obj_[j] -= cb * t_[i][j];
      }
      value_ += cb * t_[i][cols_];
    }
  }

 private:
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> obj_;
  Rational value_;
  std::vector<int> basis_;
  int cols_;
};

// Solves the maximization form; duals are those of the max problem.
LpSolution solve_max(const LinearProgram& lp, const std::vector<Rational>& c) {
  const int n = lp.num_variables();
  const int m = lp.num_constraints();
  std::vector<int> pos_col(n), neg_col(n, -1);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[j] = cols++;
    if (!lp.is_nonnegative(j)) neg_col[j] = cols++;
  }
  std::vector<bool> flipped(m);
  std::vector<Relation> rel(m);
  std::vector<int> id_col(m), surplus_col(m, -1);
  std::vector<bool> artificial;
  for (int i = 0; i < m; ++i) {
    flipped[i] = sgn(lp.constraints[i].rhs) < 0;
    rel[i] = lp.constraints[i].relation;
    if (flipped[i] && rel[i] != Relation::Equal) {
      rel[i] = rel[i] == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
    }
    if (rel[i] == Relation::GreaterEqual) surplus_col[i] = cols++;
    id_col[i] = cols++;
  }
  artificial.assign(cols, false);
  for (int i = 0; i < m; ++i) {
    if (rel[i] != Relation::LessEqual) artificial[id_col[i]] = true;
  }

  Tableau tab(m, cols);
  for (int i = 0; i < m; ++i) {
    const auto& con = lp.constraints[i];
    const int sign = flipped[i] ? -1 : 1;
    for (int j = 0; j < n; ++j) {
      if (sgn(con.row[j]) == 0) continue;
      tab.at(i, pos_col[j]) = sign * con.row[j];
      if (neg_col[j] >= 0) tab.at(i, neg_col[j]) = -sign * con.row[j];
    }
    if (surplus_col[i] >= 0) tab.at(i, surplus_col[i]) = -1;
    tab.at(i, id_col[i]) = 1;
    tab.rhs(i) = sign * con.rhs;
    tab.basis()[i] = id_col[i];
  }

  std::vector<bool> barred(cols, false);
  bool any_artificial = false;
  for (int j = 0; j < cols; ++j) any_artificial = any_artificial || artificial[j];
  if (any_artificial) {
    std::vector<Rational> phase1(cols);
    for (int j = 0; j < cols; ++j) {
      if (artificial[j]) phase1[j] = -1;
    }
    tab.load_objective(phase1);
    tab.optimize(barred);
    if (sgn(tab.value()) < 0) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    for (int i = 0; i < m; ++i) {
      if (!artificial[tab.basis()[i]]) continue;
      for (int j = 0; j < cols; ++j) {
        if (!artificial[j] && sgn(tab.at(i, j)) != 0) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    barred = artificial;
  }

  std::vector<Rational> phase2(cols);
  for (int j = 0; j < n; ++j) {
    phase2[pos_col[j]] = c[j];
    if (neg_col[j] >= 0) phase2[neg_col[j]] = -c[j];
  }
  tab.load_objective(phase2);
  LpSolution sol;
  if (!tab.optimize(barred)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  sol.status = LpStatus::Optimal;
  std::vector<Rational> colval(cols);
  for (int i = 0; i < m; ++i) colval[tab.basis()[i]] = tab.rhs(i);
  sol.primal.resize(n);
  for (int j = 0; j < n; ++j) {
    sol.primal[j] = colval[pos_col[j]];
    if (neg_col[j] >= 0) sol.primal[j] -= colval[neg_col[j]];
  }
  sol.dual.resize(m);
  for (int i = 0; i < m; ++i) {
    sol.dual[i] = -tab.obj()[id_col[i]];
    if (flipped[i]) sol.dual[i] = -sol.dual[i];
  }
  sol.objective = tab.value();
  return sol;
}

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  for (const auto& con : lp.constraints) {
    if (static_cast<int>(con.row.size()) != lp.num_variables()) throw DomainError("LP row length mismatch");
  }
  if (!lp.nonnegative.empty() && static_cast<int>(lp.nonnegative.size()) != lp.num_variables()) {
    throw DomainError("LP bound flags length mismatch");
  }
  // mpq arithmetic assumes canonical operands; callers may hand us raw p/q pairs
  LinearProgram canon = lp;
  for (auto& v : canon.objective) v.canonicalize();
  for (auto& con : canon.constraints) {
    for (auto& v : con.row) v.canonicalize();
    con.rhs.canonicalize();
  }
  const bool minimize = lp.sense == Sense::Minimize;
  std::vector<Rational> c = canon.objective;
  if (minimize) {
    for (auto& v : c) v = -v;
  }
  LpSolution sol = solve_max(canon, c);
  if (sol.status == LpStatus::Optimal && minimize) {
    sol.objective = -sol.objective;
    for (auto& y : sol.dual) y = -y;
  }
  if (sol.status == LpStatus::Optimal) {
    std::string problem = check_certificate(canon, sol);
    if (!problem.empty()) throw InternalError("LP certificate check failed: " + problem);
  }
  return sol;
}

std::string check_certificate(const LinearProgram& lp, const LpSolution& sol) {
  const int n = lp.num_variables();
  const int m = lp.num_constraints();
  if (static_cast<int>(sol.primal.size()) != n || static_cast<int>(sol.dual.size()) != m) return "size mismatch";
  const bool maximize = lp.sense == Sense::Maximize;
  Rational primal_obj, dual_obj, activity, tmp;
  for (int j = 0; j < n; ++j) {
    if (lp.is_nonnegative(j) && sgn(sol.primal[j]) < 0) return "negative primal variable " + std::to_string(j);
    primal_obj += lp.objective[j] * sol.primal[j];
  }
  for (int i = 0; i < m; ++i) {
    const auto& con = lp.constraints[i];
    activity = 0;
    for (int j = 0; j < n; ++j) {
      if (sgn(con.row[j]) != 0) activity += con.row[j] * sol.primal[j];
    }
    int slack = cmp(activity, con.rhs);
    if ((con.relation == Relation::LessEqual && slack > 0) || (con.relation == Relation::GreaterEqual && slack < 0) ||
        (con.relation == Relation::Equal && slack != 0)) {
      return "primal row " + std::to_string(i) + " violated";
    }
    const int ys = sgn(sol.dual[i]);
    // sign of y required on this row: +1 means y >= 0, -1 means y <= 0
    int need = 0;
    if (con.relation == Relation::LessEqual) need = maximize ? 1 : -1;
    if (con.relation == Relation::GreaterEqual) need = maximize ? -1 : 1;
    if (need != 0 && ys != 0 && ys != need) return "dual sign wrong on row " + std::to_string(i);
    if (ys != 0 && slack != 0) return "complementary slackness fails on row " + std::to_string(i);
    dual_obj += con.rhs * sol.dual[i];
  }
  for (int j = 0; j < n; ++j) {
    Rational aty;
    for (int i = 0; i < m; ++i) {
      if (sgn(lp.constraints[i].row[j]) != 0) aty += lp.constraints[i].row[j] * sol.dual[i];
    }
    int reduced = cmp(aty, lp.objective[j]);
    if (!lp.is_nonnegative(j)) {
      if (reduced != 0) return "dual equality fails for free column " + std::to_string(j);
      continue;
    }
    if ((maximize && reduced < 0) || (!maximize && reduced > 0)) return "dual column " + std::to_string(j) + " infeasible";
    if (reduced != 0 && sgn(sol.primal[j]) != 0) return "complementary slackness fails on column " + std::to_string(j);
  }
  if (primal_obj != dual_obj) return "objective gap";
  if (primal_obj != sol.objective) return "reported objective differs";
  return {};
}

std::string dump(const LinearProgram& lp) {
  std::ostringstream out;
  out << (lp.sense == Sense::Maximize ? "maximize" : "minimize");
  for (int j = 0; j < lp.num_variables(); ++j) out << ' ' << to_string(lp.objective[j]) << "*x" << j;
  out << '\n';
  for (const auto& con : lp.constraints) {
    for (int j = 0; j < lp.num_variables(); ++j) {
      if (sgn(con.row[j]) != 0) out << ' ' << to_string(con.row[j]) << "*x" << j;
    }
    out << (con.relation == Relation::LessEqual ? " <= " : con.relation == Relation::GreaterEqual ? " >= " : " = ")
        << to_string(con.rhs) << '\n';
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (!lp.is_nonnegative(j)) out << "free x" << j << '\n';
  }
  return out.str();
}

}  // namespace subw
