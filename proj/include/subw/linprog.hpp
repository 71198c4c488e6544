#pragma once

#include <string>
#include <vector>

#include "subw/rational.hpp"

namespace subw {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpConstraint {
  std::vector<Rational> row;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

struct LinearProgram {
  Sense sense = Sense::Maximize;
  std::vector<Rational> objective;
  std::vector<LpConstraint> constraints;
  // empty means every variable is nonnegative
  std::vector<bool> nonnegative;

  int num_variables() const { return static_cast<int>(objective.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  bool is_nonnegative(int j) const { return nonnegative.empty() || nonnegative[j]; }

  /// Appends a column; existing rows are padded with zero.
  int add_variable(const Rational& cost, bool nonneg = true);
  /// Row may be shorter than the variable count; it is padded with zero.
  int add_constraint(std::vector<Rational> row, Relation relation, const Rational& rhs);
};

/// Dual sign convention follows the textbook dual of the stated problem:
/// for a maximization, y >= 0 on <= rows, y <= 0 on >= rows; for a minimization,
/// y >= 0 on >= rows, y <= 0 on <= rows; equality rows are free.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
  Rational objective;
};

/// Exact two-phase simplex with Bland's rule. The certificate of an optimal result is
/// verified before returning; a failure throws InternalError.
LpSolution solve(const LinearProgram& lp);

/// Checks primal and dual feasibility, equal objectives and complementary slackness.
/// Returns an empty string when everything holds, else a description of the first failure.
std::string check_certificate(const LinearProgram& lp, const LpSolution& sol);

/// Plain-text rendering of the LP, for debugging.
std::string dump(const LinearProgram& lp);

const char* to_string(LpStatus status);

}  // namespace subw
