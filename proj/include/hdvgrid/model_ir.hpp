#pragma once

// Solver-agnostic sparse linear program.
//
//   minimize    sum_j cost_j x_j
//   subject to  sum_j a_ij x_j  (<= | = | >=)  rhs_i
//               lower_j <= x_j <= upper_j
//
// Variables and constraints carry tags (whitespace-free strings) so that
// primal values and duals can be looked up by name after a solve.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "hdvgrid/core.hpp"

namespace hdvgrid {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string tag;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct Constraint {
  std::string tag;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

struct Coefficient {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

class ModelIR {
 public:
  int add_variable(std::string tag, double lower, double upper, double cost);
  int add_constraint(std::string tag, Sense sense, double rhs);
  void add_coefficient(int row, int col, double value);

  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }
  std::size_t num_coefficients() const noexcept { return coefficients_.size(); }

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const std::vector<Coefficient>& coefficients() const noexcept { return coefficients_; }

  Variable& variable(int j) { return variables_.at(static_cast<std::size_t>(j)); }
  const Variable& variable(int j) const { return variables_.at(static_cast<std::size_t>(j)); }
  Constraint& constraint(int i) { return constraints_.at(static_cast<std::size_t>(i)); }
  const Constraint& constraint(int i) const { return constraints_.at(static_cast<std::size_t>(i)); }

  /// -1 when the tag is unknown.
  int find_variable(const std::string& tag) const;
  int find_constraint(const std::string& tag) const;

  /// Throws ValidationError on dangling triplets, NaN data or inverted bounds.
  void validate() const;

  /// Objective value of a primal point.
  double objective(const std::vector<double>& x) const;
  /// Row activities a_i . x.
  std::vector<double> activities(const std::vector<double>& x) const;

  /// Text exchange format, see README ("ModelIR text format").
  void write(std::ostream& out) const;
  static ModelIR read(std::istream& in);

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Coefficient> coefficients_;
  mutable std::unordered_map<std::string, int> var_index_;
  mutable std::unordered_map<std::string, int> row_index_;
};

}  // namespace hdvgrid
