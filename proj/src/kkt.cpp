#include <algorithm>
#include <cmath>

#include "hdvgrid/lp.hpp"

namespace hdvgrid {

KktReport check_kkt(const ModelIR& ir, const SolutionView& sol) {
  KktReport r;
  const auto& vars = ir.variables();
  const auto& rows = ir.constraints();
  auto grow = [](double& field, double v) { field = std::max(field, v); };

  for (const auto& v : vars) {
    if (std::isfinite(v.lower)) grow(r.data_norm, std::abs(v.lower));
    if (std::isfinite(v.upper)) grow(r.data_norm, std::abs(v.upper));
    grow(r.data_norm, std::abs(v.cost));
  }
  for (const auto& c : rows) grow(r.data_norm, std::abs(c.rhs));
  for (const auto& t : ir.coefficients()) grow(r.data_norm, std::abs(t.value));

  if (sol.x.size() != vars.size() || sol.duals.size() != rows.size()) {
    r.primal_residual = r.dual_residual = r.complementarity = kInf;
    r.duality_gap = kInf;
    return r;
  }

  const auto act = ir.activities(sol.x);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    grow(r.primal_residual, vars[j].lower - sol.x[j]);
    grow(r.primal_residual, sol.x[j] - vars[j].upper);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double gap = act[i] - rows[i].rhs;
    switch (rows[i].sense) {
      case Sense::LessEqual: grow(r.primal_residual, gap); break;
      case Sense::GreaterEqual: grow(r.primal_residual, -gap); break;
      case Sense::Equal: grow(r.primal_residual, std::abs(gap)); break;
    }
  }

  // Reduced costs recomputed from the duals rather than trusted from the solver.
  std::vector<double> d(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) d[j] = vars[j].cost;
  for (const auto& t : ir.coefficients())
    d[static_cast<std::size_t>(t.col)] -= t.value * sol.duals[static_cast<std::size_t>(t.row)];

  double dual_obj = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double y = sol.duals[i];
    dual_obj += rows[i].rhs * y;
    double slack = std::abs(act[i] - rows[i].rhs);
    if (rows[i].sense == Sense::LessEqual) grow(r.dual_residual, y);
    if (rows[i].sense == Sense::GreaterEqual) grow(r.dual_residual, -y);
    if (rows[i].sense == Sense::Equal) slack = 0.0;
    grow(r.complementarity, std::abs(y) * slack);
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    if (d[j] > 0.0) {
      if (!std::isfinite(v.lower)) {
        grow(r.dual_residual, d[j]);
        continue;
      }
      dual_obj += d[j] * v.lower;
      grow(r.complementarity, d[j] * std::max(0.0, sol.x[j] - v.lower));
    } else if (d[j] < 0.0) {
      if (!std::isfinite(v.upper)) {
        grow(r.dual_residual, -d[j]);
        continue;
      }
      dual_obj += d[j] * v.upper;
      grow(r.complementarity, -d[j] * std::max(0.0, v.upper - sol.x[j]));
    }
  }
  const double primal_obj = ir.objective(sol.x);
  r.duality_gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));
  return r;
}

}  // namespace hdvgrid
