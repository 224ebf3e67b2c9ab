#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qtube {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class VarBound { kNonNegative, kFree };

/// minimize c.z  subject to  A_i.z (<=|=|>=) b_i,  z_j >= 0 or free.
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<RowSense> sense;
  std::vector<VarBound> bounds;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t num_vars)
      : c(num_vars, 0.0), bounds(num_vars, VarBound::kNonNegative) {}

  std::size_t num_rows() const { return b.size(); }
  std::size_t num_vars() const { return c.size(); }

  /// Appends a constraint row; `coeffs` must have num_vars() entries.
  std::size_t add_row(std::vector<double> coeffs, RowSense s, double rhs);

  /// Throws std::invalid_argument if dimensions disagree or entries are non-finite.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericFailure };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kNumericFailure;
  std::vector<double> z;
  double objective = 0.0;
  /// Rows satisfied with equality at z (within the feasibility tolerance).
  std::vector<std::size_t> active_rows;
  /// Row duals y with c_j - sum_i y_i A_ij >= 0 on nonnegative variables (= 0 on basic ones).
  /// y_i <= 0 on <= rows and >= 0 on >= rows.
  std::vector<double> duals;
  /// Objective evaluated from the duals, b.y; equals `objective` at an optimum.
  double dual_objective = 0.0;
  /// Original variable indices carried in the final basis.
  std::vector<std::size_t> basic_vars;
  double max_violation = 0.0;
  std::size_t pivots = 0;
  bool used_bland = false;
  std::string message;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

struct LpOptions {
  double feasibility_tol = 1e-9;  // relative to 1 + |b|_inf
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-12;       // smaller pivots are a numeric breakdown
  double ratio_tol = 1e-9;        // entries below this are skipped by the ratio test
  std::size_t max_pivots = 1'000'000;
  /// Consecutive degenerate pivots before switching to Bland's entering rule.
  std::size_t degenerate_run_for_bland = 25;
  /// Use Bland's rule from the first pivot.
  bool always_bland = false;
};

/// Two-phase primal simplex on a dense tableau. Never throws on infeasible or unbounded
/// problems; those come back as a status. Throws std::invalid_argument on malformed input.
LpSolution solve(const LinearProgram& lp, const LpOptions& options = {});

/// Distinct sample indices behind the active rows, in ascending order.
/// `row_map[r]` names the sample owning row r, or nullopt for rows that belong to no sample.
std::vector<std::size_t> active_sample_set(const LpSolution& sol,
                                           std::span<const std::optional<std::size_t>> row_map);

}  // namespace qtube
