#include "qtube/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace qtube {

std::size_t LinearProgram::add_row(std::vector<double> coeffs, RowSense s, double rhs) {
  if (coeffs.size() != num_vars()) throw std::invalid_argument("add_row: coefficient count != num_vars");
  A.push_back(std::move(coeffs));
  sense.push_back(s);
  b.push_back(rhs);
  return b.size() - 1;
}

void LinearProgram::validate() const {
  if (bounds.size() != c.size()) throw std::invalid_argument("LP: bounds size != number of variables");
  if (A.size() != b.size() || sense.size() != b.size()) {
    throw std::invalid_argument("LP: A, b and row senses disagree on the number of rows");
  }
  for (double v : c) {
    if (!std::isfinite(v)) throw std::invalid_argument("LP: non-finite objective coefficient");
  }
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != c.size()) throw std::invalid_argument("LP: row " + std::to_string(i) + " has wrong width");
    if (!std::isfinite(b[i])) throw std::invalid_argument("LP: non-finite right-hand side");
    for (double v : A[i]) {
      if (!std::isfinite(v)) throw std::invalid_argument("LP: non-finite constraint coefficient");
    }
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kNumericFailure:
      return "numeric-failure";
  }
  return "?";
}

namespace {

constexpr double kDropTol = 1e-14;

enum class ColumnRole { kStructural, kSlack, kArtificial };

struct Column {
  ColumnRole role;
  std::size_t var = 0;  // original variable (structural only)
  double sign = 1.0;    // +1, or -1 for the negative half of a free variable
};

// Dense tableau in row-major order. Reduced-cost rows for both phases are kept current
// through every pivot so that phase 2 starts without a recomputation.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const LpOptions& opt) : opt_(opt) { build(lp); }

  LpSolution run(const LinearProgram& lp);

 private:
  enum class Outcome { kOptimal, kUnbounded, kBreakdown, kIterationLimit };

  void build(const LinearProgram& lp);
  Outcome iterate(bool phase_one);
  void pivot(std::size_t r, std::size_t q);
  bool drive_out_artificials();
  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }

  const LpOptions& opt_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> t_;
  std::vector<double> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Column> columns_;
  std::vector<double> cost1_, cost2_;  // column costs per phase
  std::vector<double> d1_, d2_;        // reduced costs per phase
  std::vector<double> row_flip_;       // -1 where the row was negated to make b >= 0
  std::vector<std::size_t> unit_col_;  // per row: a column that is a (scaled) unit vector in the original system
  std::vector<double> unit_coef_;      // its coefficient in the (flipped) row
  std::size_t pivots_ = 0;
  bool used_bland_ = false;
  std::vector<double> pivot_row_vals_;
  std::vector<std::size_t> pivot_row_idx_;
};

void Tableau::build(const LinearProgram& lp) {
  rows_ = lp.num_rows();
  const std::size_t nvars = lp.num_vars();

  std::vector<std::size_t> first_col(nvars);
  for (std::size_t j = 0; j < nvars; ++j) {
    first_col[j] = columns_.size();
    columns_.push_back({ColumnRole::kStructural, j, 1.0});
    if (lp.bounds[j] == VarBound::kFree) columns_.push_back({ColumnRole::kStructural, j, -1.0});
  }
  const std::size_t structural_cols = columns_.size();

  row_flip_.assign(rows_, 1.0);
  std::vector<RowSense> sense(lp.sense);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (lp.b[i] < 0.0) {
      row_flip_[i] = -1.0;
      if (sense[i] == RowSense::kLessEqual) {
        sense[i] = RowSense::kGreaterEqual;
      } else if (sense[i] == RowSense::kGreaterEqual) {
        sense[i] = RowSense::kLessEqual;
      }
    }
  }

  // Structural columns that are nonzero in exactly one row can start in the basis of
  // that row when their (flipped) coefficient is positive, avoiding an artificial.
  std::vector<std::size_t> nnz(nvars, 0), nz_row(nvars, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < nvars; ++j) {
      if (lp.A[i][j] != 0.0) {
        ++nnz[j];
        nz_row[j] = i;
      }
    }
  }

  std::vector<std::size_t> slack_col(rows_, SIZE_MAX);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (sense[i] != RowSense::kEqual) {
      slack_col[i] = columns_.size();
      columns_.push_back({ColumnRole::kSlack, 0, 1.0});
    }
  }

  basis_.assign(rows_, SIZE_MAX);
  unit_col_.assign(rows_, SIZE_MAX);
  unit_coef_.assign(rows_, 0.0);
  std::vector<bool> crash_used(nvars, false);
  std::vector<std::size_t> crash_var(rows_, SIZE_MAX);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (sense[i] == RowSense::kLessEqual) {
      basis_[i] = slack_col[i];
      unit_col_[i] = slack_col[i];
      unit_coef_[i] = 1.0;
      continue;
    }
    if (sense[i] == RowSense::kGreaterEqual) {
      unit_col_[i] = slack_col[i];
      unit_coef_[i] = -1.0;
    }
    for (std::size_t j = 0; j < nvars; ++j) {
      if (nnz[j] == 1 && nz_row[j] == i && !crash_used[j] && row_flip_[i] * lp.A[i][j] > 0.0) {
        crash_used[j] = true;
        crash_var[i] = j;
        basis_[i] = first_col[j];
        if (sense[i] == RowSense::kEqual) {
          unit_col_[i] = first_col[j];
          unit_coef_[i] = row_flip_[i] * lp.A[i][j];
        }
        break;
      }
    }
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (basis_[i] != SIZE_MAX) continue;
    basis_[i] = columns_.size();
    if (unit_col_[i] == SIZE_MAX) {
      unit_col_[i] = columns_.size();
      unit_coef_[i] = 1.0;
    }
    columns_.push_back({ColumnRole::kArtificial, 0, 1.0});
  }
  cols_ = columns_.size();

  t_.assign(rows_ * cols_, 0.0);
  rhs_.assign(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double f = row_flip_[i];
    for (std::size_t j = 0; j < nvars; ++j) {
      const double a = f * lp.A[i][j];
      if (a == 0.0) continue;
      at(i, first_col[j]) = a;
      if (lp.bounds[j] == VarBound::kFree) at(i, first_col[j] + 1) = -a;
    }
    rhs_[i] = f * lp.b[i];
    if (slack_col[i] != SIZE_MAX) at(i, slack_col[i]) = sense[i] == RowSense::kLessEqual ? 1.0 : -1.0;
    if (columns_[basis_[i]].role == ColumnRole::kArtificial) at(i, basis_[i]) = 1.0;
  }
  // Rows whose basic variable is a crashed structural column get scaled to a unit pivot.
  for (std::size_t i = 0; i < rows_; ++i) {
    if (crash_var[i] == SIZE_MAX) continue;
    const double piv = at(i, basis_[i]);
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) /= piv;
    rhs_[i] /= piv;
  }

  cost1_.assign(cols_, 0.0);
  cost2_.assign(cols_, 0.0);
  for (std::size_t j = 0; j < structural_cols; ++j) cost2_[j] = columns_[j].sign * lp.c[columns_[j].var];
  for (std::size_t j = structural_cols; j < cols_; ++j) {
    if (columns_[j].role == ColumnRole::kArtificial) cost1_[j] = 1.0;
  }
  d1_ = cost1_;
  d2_ = cost2_;
  for (std::size_t i = 0; i < rows_; ++i) {
    const double cb1 = cost1_[basis_[i]], cb2 = cost2_[basis_[i]];
    if (cb1 == 0.0 && cb2 == 0.0) continue;
    for (std::size_t j = 0; j < cols_; ++j) {
      const double v = at(i, j);
      if (v == 0.0) continue;
      d1_[j] -= cb1 * v;
      d2_[j] -= cb2 * v;
    }
  }
}

void Tableau::pivot(std::size_t r, std::size_t q) {
  const double piv = at(r, q);
  pivot_row_idx_.clear();
  pivot_row_vals_.clear();
  for (std::size_t j = 0; j < cols_; ++j) {
    double& v = at(r, j);
    if (v == 0.0) continue;
    v /= piv;
    if (std::abs(v) < kDropTol) {
      v = 0.0;
      continue;
    }
    pivot_row_idx_.push_back(j);
    pivot_row_vals_.push_back(v);
  }
  at(r, q) = 1.0;
  rhs_[r] /= piv;

  const std::size_t nnz = pivot_row_idx_.size();
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i == r) continue;
    const double f = at(i, q);
    if (f == 0.0) continue;
    double* row = t_.data() + i * cols_;
    for (std::size_t k = 0; k < nnz; ++k) {
      double& v = row[pivot_row_idx_[k]];
      v -= f * pivot_row_vals_[k];
      if (std::abs(v) < kDropTol) v = 0.0;
    }
    row[q] = 0.0;
    rhs_[i] -= f * rhs_[r];
  }
  for (std::vector<double>* d : {&d1_, &d2_}) {
    const double f = (*d)[q];
    if (f == 0.0) continue;
    for (std::size_t k = 0; k < nnz; ++k) (*d)[pivot_row_idx_[k]] -= f * pivot_row_vals_[k];
    (*d)[q] = 0.0;
  }
  basis_[r] = q;
  ++pivots_;
}

Tableau::Outcome Tableau::iterate(bool phase_one) {
  std::vector<double>& d = phase_one ? d1_ : d2_;
  bool bland = opt_.always_bland;
  std::size_t degenerate_run = 0;
  while (true) {
    if (pivots_ >= opt_.max_pivots) return Outcome::kIterationLimit;
    // Entering column: most negative reduced cost, lowest index on ties; Bland: first negative.
    std::size_t q = SIZE_MAX;
    double best = -opt_.optimality_tol;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!phase_one && columns_[j].role == ColumnRole::kArtificial) continue;
      if (d[j] < best) {
        q = j;
        if (bland) break;
        best = d[j];
      }
    }
    if (q == SIZE_MAX) return Outcome::kOptimal;

    // Ratio test; ties go to the lowest basic column index.
    std::size_t r = SIZE_MAX;
    double best_ratio = std::numeric_limits<double>::infinity();
    bool tiny_only = false;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double a = at(i, q);
      if (a <= opt_.ratio_tol) {
        if (a > opt_.pivot_tol) tiny_only = true;
        continue;
      }
      const double ratio = std::max(rhs_[i], 0.0) / a;
      if (r == SIZE_MAX) {
        r = i;
        best_ratio = ratio;
        continue;
      }
      const double tie = 1e-12 * (1.0 + best_ratio);
      if (ratio < best_ratio - tie) {
        r = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + tie && basis_[i] < basis_[r]) {
        r = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (r == SIZE_MAX) return tiny_only ? Outcome::kBreakdown : Outcome::kUnbounded;
    if (std::abs(at(r, q)) < opt_.pivot_tol) return Outcome::kBreakdown;

    if (best_ratio <= 1e-12) {
      if (++degenerate_run >= opt_.degenerate_run_for_bland && !bland) {
        bland = true;
        used_bland_ = true;
      }
    } else {
      degenerate_run = 0;
    }
    pivot(r, q);
  }
}

bool Tableau::drive_out_artificials() {
  for (std::size_t i = 0; i < rows_; ++i) {
    if (columns_[basis_[i]].role != ColumnRole::kArtificial) continue;
    std::size_t best = SIZE_MAX;
    double best_abs = 1e-9;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (columns_[j].role == ColumnRole::kArtificial) continue;
      if (std::abs(at(i, j)) > best_abs) {
        best_abs = std::abs(at(i, j));
        best = j;
      }
    }
    // No candidate: the row is redundant and its artificial stays basic at zero.
    if (best != SIZE_MAX) pivot(i, best);
  }
  return true;
}

LpSolution Tableau::run(const LinearProgram& lp) {
  LpSolution sol;
  double b_inf = 0.0;
  for (double v : lp.b) b_inf = std::max(b_inf, std::abs(v));
  const double feas_tol = opt_.feasibility_tol * (1.0 + b_inf);

  auto fail = [&](LpStatus status, std::string message) {
    sol.status = status;
    sol.message = std::move(message);
    sol.pivots = pivots_;
    sol.used_bland = used_bland_;
    return sol;
  };

  bool has_artificial = false;
  for (std::size_t i = 0; i < rows_; ++i) {
    has_artificial = has_artificial || columns_[basis_[i]].role == ColumnRole::kArtificial;
  }
  if (has_artificial) {
    const Outcome o = iterate(true);
    if (o == Outcome::kBreakdown) return fail(LpStatus::kNumericFailure, "pivot below tolerance in phase 1");
    if (o == Outcome::kIterationLimit) return fail(LpStatus::kNumericFailure, "pivot limit reached in phase 1");
    if (o == Outcome::kUnbounded) return fail(LpStatus::kNumericFailure, "phase 1 reported unbounded");
    double infeas = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (columns_[basis_[i]].role == ColumnRole::kArtificial) infeas += std::max(rhs_[i], 0.0);
    }
    if (infeas > feas_tol) return fail(LpStatus::kInfeasible, "phase 1 optimum has positive infeasibility");
    drive_out_artificials();
  }

  const Outcome o = iterate(false);
  if (o == Outcome::kUnbounded) return fail(LpStatus::kUnbounded, "objective unbounded below");
  if (o == Outcome::kBreakdown) return fail(LpStatus::kNumericFailure, "pivot below tolerance in phase 2");
  if (o == Outcome::kIterationLimit) return fail(LpStatus::kNumericFailure, "pivot limit reached in phase 2");

  const std::size_t nvars = lp.num_vars();
  sol.z.assign(nvars, 0.0);
  std::set<std::size_t> basic;
  for (std::size_t i = 0; i < rows_; ++i) {
    const Column& col = columns_[basis_[i]];
    if (col.role != ColumnRole::kStructural) continue;
    sol.z[col.var] += col.sign * rhs_[i];
    basic.insert(col.var);
  }
  sol.basic_vars.assign(basic.begin(), basic.end());
  for (std::size_t j = 0; j < nvars; ++j) {
    if (lp.bounds[j] == VarBound::kNonNegative && sol.z[j] < 0.0) sol.z[j] = 0.0;
  }

  sol.objective = 0.0;
  for (std::size_t j = 0; j < nvars; ++j) sol.objective += lp.c[j] * sol.z[j];

  sol.duals.assign(rows_, 0.0);
  sol.dual_objective = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    const std::size_t u = unit_col_[i];
    const double y_flipped = (cost2_[u] - d2_[u]) / unit_coef_[i];
    sol.duals[i] = row_flip_[i] * y_flipped;
    sol.dual_objective += sol.duals[i] * lp.b[i];
  }

  double violation = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < nvars; ++j) lhs += lp.A[i][j] * sol.z[j];
    const double resid = lhs - lp.b[i];
    double v = 0.0;
    switch (lp.sense[i]) {
      case RowSense::kLessEqual:
        v = std::max(resid, 0.0);
        break;
      case RowSense::kGreaterEqual:
        v = std::max(-resid, 0.0);
        break;
      case RowSense::kEqual:
        v = std::abs(resid);
        break;
    }
    violation = std::max(violation, v);
    if (std::abs(resid) <= feas_tol) sol.active_rows.push_back(i);
  }
  sol.max_violation = violation;
  sol.pivots = pivots_;
  sol.used_bland = used_bland_;
  if (violation > feas_tol) {
    sol.status = LpStatus::kNumericFailure;
    sol.message = "optimal basis violates constraints by " + std::to_string(violation);
    return sol;
  }
  sol.status = LpStatus::kOptimal;
  return sol;
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  Tableau tableau(lp, options);
  return tableau.run(lp);
}

std::vector<std::size_t> active_sample_set(const LpSolution& sol,
                                           std::span<const std::optional<std::size_t>> row_map) {
  std::set<std::size_t> out;
  for (std::size_t r : sol.active_rows) {
    if (r < row_map.size() && row_map[r]) out.insert(*row_map[r]);
  }
  return {out.begin(), out.end()};
}

}  // namespace qtube
