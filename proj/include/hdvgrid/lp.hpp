#pragma once

// Linear programming solvers for ModelIR instances.
//
// Sign convention (minimization): the dual of row i is d(objective)/d(rhs_i).
// Equality duals are free, duals of "<=" rows are <= 0 and duals of ">=" rows
// are >= 0 at optimality. Reduced costs are cost_j - a_j . y.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hdvgrid/core.hpp"
#include "hdvgrid/model_ir.hpp"

namespace hdvgrid {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(SolveStatus s);
SolveStatus solve_status_from_string(std::string_view s);

enum class VarStatus { Basic, AtLower, AtUpper, Free };

/// Final simplex basis over structural variables followed by one logical
/// (slack) variable per constraint.
struct Basis {
  std::vector<int> basic;          // size = number of constraints
  std::vector<VarStatus> status;   // size = variables + constraints
};

struct SolutionView {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;              // per variable
  std::vector<double> reduced_costs;  // per variable
  std::vector<double> duals;          // per constraint
  std::vector<std::string> var_tags;
  std::vector<std::string> row_tags;
  Basis basis;
  long iterations = 0;
  /// Phase-1 residual (sum of infeasibilities) when infeasible.
  double infeasibility = 0.0;
  /// Entering variable whose ray proves unboundedness.
  std::string ray_tag;

  bool optimal() const noexcept { return status == SolveStatus::Optimal; }
  /// Throws std::out_of_range for unknown tags.
  double value(const std::string& tag) const;
  double dual(const std::string& tag) const;

  /// Text exchange format, see README ("Solution text format").
  void write(std::ostream& out) const;
  static SolutionView read(std::istream& in);
};

struct KktReport {
  double primal_residual = 0.0;   // max row or bound violation
  double dual_residual = 0.0;     // max reduced-cost sign violation
  double complementarity = 0.0;   // max |d_j| * distance of x_j from its active bound
  double duality_gap = 0.0;       // |primal - dual| / (1 + |primal|)
  double data_norm = 0.0;         // max |entry| over rhs, bounds, costs and matrix

  bool within(double tol) const noexcept {
    const double scale = 1.0 + data_norm;
    return primal_residual <= tol * scale && dual_residual <= tol * scale &&
           complementarity <= tol * scale && duality_gap <= tol;
  }
};

KktReport check_kkt(const ModelIR& ir, const SolutionView& sol);

/// Pluggable solver boundary.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual SolutionView solve(const ModelIR& ir, const SolverOptions& opts) = 0;
};

/// Built-in bounded revised simplex with a sparse LU basis factorization.
/// Dense work vectors are O(rows); intended for up to ~20,000 constraints.
class SimplexSolver final : public LpSolver {
 public:
  SolutionView solve(const ModelIR& ir, const SolverOptions& opts) override;
};

/// Hands the instance to an external program. The command is run as
/// `<command> <model.lp> <solution.sol>`; it must read the ModelIR text format
/// and write the solution text format.
class ExternalSolver final : public LpSolver {
 public:
  explicit ExternalSolver(std::string command, std::string work_dir = {});
  SolutionView solve(const ModelIR& ir, const SolverOptions& opts) override;

 private:
  std::string command_;
  std::string work_dir_;
};

/// Convenience wrapper around SimplexSolver.
SolutionView solve(const ModelIR& ir, const SolverOptions& opts = {});

}  // namespace hdvgrid
