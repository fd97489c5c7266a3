#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hdvgrid/config_io.hpp"
#include "hdvgrid/lp.hpp"
#include "lu.hpp"

namespace hdvgrid {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

SolveStatus solve_status_from_string(std::string_view s) {
  for (SolveStatus st : {SolveStatus::Optimal, SolveStatus::Infeasible, SolveStatus::Unbounded,
                         SolveStatus::IterationLimit})
    if (to_string(st) == s) return st;
  throw ConfigError("", 0, "status", "unknown solve status '" + std::string(s) + "'");
}

double SolutionView::value(const std::string& tag) const {
  for (std::size_t j = 0; j < var_tags.size(); ++j)
    if (var_tags[j] == tag) return x.at(j);
  throw std::out_of_range("unknown variable tag '" + tag + "'");
}

double SolutionView::dual(const std::string& tag) const {
  for (std::size_t i = 0; i < row_tags.size(); ++i)
    if (row_tags[i] == tag) return duals.at(i);
  throw std::out_of_range("unknown constraint tag '" + tag + "'");
}

void SolutionView::write(std::ostream& out) const {
  out << "HDVSOL 1\n";
  out << "status " << to_string(status) << '\n';
  out << "objective " << format_number(objective) << '\n';
  out << "variables " << x.size() << '\n';
  for (std::size_t j = 0; j < x.size(); ++j)
    out << (j < var_tags.size() ? var_tags[j] : "x" + std::to_string(j)) << ' '
        << format_number(x[j]) << ' '
        << format_number(j < reduced_costs.size() ? reduced_costs[j] : 0.0) << '\n';
  out << "duals " << duals.size() << '\n';
  for (std::size_t i = 0; i < duals.size(); ++i)
    out << (i < row_tags.size() ? row_tags[i] : "r" + std::to_string(i)) << ' '
        << format_number(duals[i]) << '\n';
  out << "end\n";
}

SolutionView SolutionView::read(std::istream& in) {
  auto expect = [&](const std::string& w) {
    std::string got;
    if (!(in >> got) || got != w)
      throw ConfigError("", 0, "", "solution text: expected '" + w + "', got '" + got + "'");
  };
  auto number = [](const std::string& s) {
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return std::stod(s);
  };
  SolutionView sol;
  expect("HDVSOL");
  expect("1");
  std::string word, a, b;
  expect("status");
  in >> word;
  sol.status = solve_status_from_string(word);
  expect("objective");
  in >> a;
  sol.objective = number(a);
  std::size_t n = 0;
  expect("variables");
  in >> n;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(in >> word >> a >> b)) throw ConfigError("", 0, "variables", "truncated solution");
    sol.var_tags.push_back(word);
    sol.x.push_back(number(a));
    sol.reduced_costs.push_back(number(b));
  }
  expect("duals");
  in >> n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> word >> a)) throw ConfigError("", 0, "duals", "truncated solution");
    sol.row_tags.push_back(word);
    sol.duals.push_back(number(a));
  }
  expect("end");
  return sol;
}

namespace {

constexpr double kPerturb = 1e-6;

using detail::SparseColumn;
using detail::SparseLU;

double pow2_round(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(s))));
}

/// Bounded primal revised simplex over the scaled problem
///   A x + s = b,  l <= (x, s) <= u.
/// Phase 1 minimizes the sum of bound violations of the basic variables, so
/// it can restart from any basis after numerical drift.
class Simplex {
 public:
  Simplex(const ModelIR& ir, const SolverOptions& opts) : ir_(ir), opts_(opts) { load(); }

  SolutionView run();

 private:
  enum class Result { Optimal, Infeasible, Unbounded, IterationLimit };

  void load();
  void scale();
  void column(int j, std::vector<int>& rows, std::vector<double>& vals) const;
  void scatter_column(int j, std::vector<double>& dense) const;
  double dot_column(int j, const std::vector<double>& y) const;
  void refactor();
  void compute_basic_values();
  double infeasibility(int j) const;
  Result iterate();
  SolutionView extract(Result r);

  const ModelIR& ir_;
  SolverOptions opts_;
  int m_ = 0, n_ = 0, total_ = 0;
  // CSC structural columns (scaled)
  std::vector<int> cstart_, crow_;
  std::vector<double> cval_;
  std::vector<double> row_scale_, col_scale_;
  std::vector<double> lower_, upper_, cost_, x_, b_;
  std::vector<VarStatus> status_;
  std::vector<int> basic_;   // position -> variable
  std::vector<int> pos_of_;  // variable -> position or -1
  SparseLU lu_;
  long iterations_ = 0;
  int ray_var_ = -1;
  double phase1_residual_ = 0.0;
  std::vector<double> y_, alpha_, cb_;
};

void Simplex::load() {
  m_ = static_cast<int>(ir_.num_constraints());
  n_ = static_cast<int>(ir_.num_variables());
  total_ = n_ + m_;
  std::vector<int> count(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& t : ir_.coefficients()) ++count[static_cast<std::size_t>(t.col) + 1];
  cstart_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int j = 0; j < n_; ++j) cstart_[j + 1] = cstart_[j] + count[j + 1];
  crow_.assign(ir_.num_coefficients(), 0);
  cval_.assign(ir_.num_coefficients(), 0.0);
  std::vector<int> fillp(cstart_.begin(), cstart_.end() - 1);
  for (const auto& t : ir_.coefficients()) {
    const int k = fillp[t.col]++;
    crow_[k] = t.row;
    cval_[k] = t.value;
  }
  // merge duplicate (row, col) entries
  for (int j = 0; j < n_; ++j) {
    std::vector<std::pair<int, double>> e;
    for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) e.emplace_back(crow_[k], cval_[k]);
    std::sort(e.begin(), e.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (w > 0 && e[w - 1].first == e[k].first) e[w - 1].second += e[k].second;
      else e[w++] = e[k];
    }
    for (std::size_t k = 0; k < e.size(); ++k) {
      crow_[cstart_[j] + static_cast<int>(k)] = k < w ? e[k].first : e[w - 1].first;
      cval_[cstart_[j] + static_cast<int>(k)] = k < w ? e[k].second : 0.0;
    }
  }

  lower_.assign(static_cast<std::size_t>(total_), 0.0);
  upper_.assign(static_cast<std::size_t>(total_), 0.0);
  cost_.assign(static_cast<std::size_t>(total_), 0.0);
  b_.assign(static_cast<std::size_t>(m_), 0.0);
  for (int j = 0; j < n_; ++j) {
    const auto& v = ir_.variable(j);
    lower_[j] = v.lower;
    upper_[j] = v.upper;
    cost_[j] = v.cost;
  }
  for (int i = 0; i < m_; ++i) {
    const auto& c = ir_.constraint(i);
    b_[i] = c.rhs;
    const int s = n_ + i;
    switch (c.sense) {
      case Sense::LessEqual: lower_[s] = 0.0; upper_[s] = kInf; break;
      case Sense::GreaterEqual: lower_[s] = -kInf; upper_[s] = 0.0; break;
      case Sense::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
    }
  }
  row_scale_.assign(static_cast<std::size_t>(m_), 1.0);
  col_scale_.assign(static_cast<std::size_t>(n_), 1.0);
  if (opts_.scaling) scale();
}

void Simplex::scale() {
  // Geometric passes followed by max-abs equilibration, factors rounded to powers of two.
  for (int pass = 0; pass < 6; ++pass) {
    const bool equilibrate = pass >= 4;
    std::vector<double> rmin(static_cast<std::size_t>(m_), kInf), rmax(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < n_; ++j)
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) {
        const double a = std::abs(cval_[k]);
        if (a == 0.0) continue;
        rmin[crow_[k]] = std::min(rmin[crow_[k]], a);
        rmax[crow_[k]] = std::max(rmax[crow_[k]], a);
      }
    for (int i = 0; i < m_; ++i) {
      if (rmax[i] == 0.0) continue;
      const double f = pow2_round(equilibrate ? 1.0 / rmax[i] : 1.0 / std::sqrt(rmin[i] * rmax[i]));
      row_scale_[i] *= f;
      rmax[i] = f;  // reuse as this pass's factor
    }
    for (int j = 0; j < n_; ++j)
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
        if (rmax[crow_[k]] != 0.0) cval_[k] *= rmax[crow_[k]];
    for (int j = 0; j < n_; ++j) {
      double cmin = kInf, cmax = 0.0;
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) {
        const double a = std::abs(cval_[k]);
        if (a == 0.0) continue;
        cmin = std::min(cmin, a);
        cmax = std::max(cmax, a);
      }
      if (cmax == 0.0) continue;
      const double f = pow2_round(equilibrate ? 1.0 / cmax : 1.0 / std::sqrt(cmin * cmax));
      col_scale_[j] *= f;
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) cval_[k] *= f;
    }
  }
  for (int j = 0; j < n_; ++j) {
    lower_[j] /= col_scale_[j];
    upper_[j] /= col_scale_[j];
    cost_[j] *= col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) {
    b_[i] *= row_scale_[i];
    const int s = n_ + i;
    lower_[s] *= row_scale_[i];
    upper_[s] *= row_scale_[i];
  }
}

void Simplex::column(int j, std::vector<int>& rows, std::vector<double>& vals) const {
  rows.clear();
  vals.clear();
  if (j < n_) {
    for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) {
      if (cval_[k] == 0.0) continue;
      rows.push_back(crow_[k]);
      vals.push_back(cval_[k]);
    }
  } else {
    rows.push_back(j - n_);
    vals.push_back(1.0);
  }
}

void Simplex::scatter_column(int j, std::vector<double>& dense) const {
  std::fill(dense.begin(), dense.end(), 0.0);
  if (j < n_) {
    for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) dense[crow_[k]] += cval_[k];
  } else {
    dense[j - n_] = 1.0;
  }
}

double Simplex::dot_column(int j, const std::vector<double>& y) const {
  if (j >= n_) return y[j - n_];
  double s = 0.0;
  for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) s += cval_[k] * y[crow_[k]];
  return s;
}

void Simplex::refactor() {
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<SparseColumn> cols(static_cast<std::size_t>(m_));
    for (int p = 0; p < m_; ++p) column(basic_[p], cols[p].rows, cols[p].values);
    auto sing = lu_.factorize(m_, cols);
    if (sing.empty()) return;
    // Swap dependent basic columns for the logicals of uncovered rows.
    for (std::size_t k = 0; k < sing.positions.size(); ++k) {
      const int p = sing.positions[k];
      const int out = basic_[p];
      const int in = n_ + sing.rows[k];
      pos_of_[out] = -1;
      if (std::isfinite(lower_[out])) { status_[out] = VarStatus::AtLower; x_[out] = lower_[out]; }
      else if (std::isfinite(upper_[out])) { status_[out] = VarStatus::AtUpper; x_[out] = upper_[out]; }
      else { status_[out] = VarStatus::Free; x_[out] = 0.0; }
      if (pos_of_[in] >= 0) throw std::logic_error("singular basis repair: logical already basic");
      basic_[p] = in;
      pos_of_[in] = p;
      status_[in] = VarStatus::Basic;
    }
  }
  throw std::runtime_error("simplex: basis repair failed");
}

void Simplex::compute_basic_values() {
  std::vector<double> r(b_);
  for (int j = 0; j < total_; ++j) {
    if (pos_of_[j] >= 0 || x_[j] == 0.0) continue;
    if (j < n_) {
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) r[crow_[k]] -= cval_[k] * x_[j];
    } else {
      r[j - n_] -= x_[j];
    }
  }
  lu_.ftran(r);
  for (int p = 0; p < m_; ++p) x_[basic_[p]] = r[p];
}

double Simplex::infeasibility(int j) const {
  if (x_[j] < lower_[j] - opts_.feasibility_tol) return lower_[j] - x_[j];
  if (x_[j] > upper_[j] + opts_.feasibility_tol) return x_[j] - upper_[j];
  return 0.0;
}

Simplex::Result Simplex::iterate() {
  const double ftol = opts_.feasibility_tol;
  const double dtol = opts_.optimality_tol;
  y_.assign(static_cast<std::size_t>(m_), 0.0);
  alpha_.assign(static_cast<std::size_t>(m_), 0.0);
  cb_.assign(static_cast<std::size_t>(m_), 0.0);

  bool bland = false;
  const long stall_limit = std::max<long>(50, m_);
  double best_obj = kInf;
  long since_progress = 0;
  bool fresh = false;  // basis just refactorized and values recomputed
  int last_phase = 0;
  std::vector<double> weight(static_cast<std::size_t>(total_), 1.0);
  std::vector<double> rho(static_cast<std::size_t>(m_), 0.0);

  refactor();
  compute_basic_values();
  fresh = true;

  while (true) {
    if (iterations_ >= opts_.max_iterations) return Result::IterationLimit;
    if (lu_.num_updates() >= opts_.refactor_interval) {
      refactor();
      compute_basic_values();
      fresh = true;
    }

    // Phase selection from current basic values.
    double infeas = 0.0;
    for (int p = 0; p < m_; ++p) infeas += infeasibility(basic_[p]);
    const int phase = infeas > 0.0 ? 1 : 2;
    if (phase == 1 && last_phase == 2 && !fresh) {
      refactor();
      compute_basic_values();
      fresh = true;
      continue;
    }
    if (phase != last_phase) {
      since_progress = 0;
      best_obj = kInf;
      bland = false;
      last_phase = phase;
      std::fill(weight.begin(), weight.end(), 1.0);
    }
    double obj = 0.0;
    for (int p = 0; p < m_; ++p) {
      const int j = basic_[p];
      if (phase == 1) {
        cb_[p] = x_[j] < lower_[j] - ftol ? -1.0 : (x_[j] > upper_[j] + ftol ? 1.0 : 0.0);
      } else {
        cb_[p] = cost_[j];
      }
    }
    if (phase == 1) {
      obj = infeas;
    } else {
      for (int j = 0; j < total_; ++j) obj += cost_[j] * x_[j];
    }
    if (!std::isfinite(best_obj) || obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
      best_obj = obj;
      since_progress = 0;
      bland = false;
    } else if (opts_.bland_fallback && ++since_progress > stall_limit) {
      bland = true;
    }

    y_ = cb_;
    lu_.btran(y_);

    // Pricing.
    int enter = -1;
    double best = 0.0;
    int dir = 0;
    for (int j = 0; j < total_; ++j) {
      const VarStatus st = status_[j];
      if (st == VarStatus::Basic) continue;
      if (lower_[j] == upper_[j]) continue;
      const double cj = phase == 1 ? 0.0 : cost_[j];
      const double d = cj - dot_column(j, y_);
      int dj = 0;
      if ((st == VarStatus::AtLower || st == VarStatus::Free) && d < -dtol) dj = 1;
      else if ((st == VarStatus::AtUpper || st == VarStatus::Free) && d > dtol) dj = -1;
      if (dj == 0) continue;
      if (bland) {
        enter = j;
        dir = dj;
        break;
      }
      const double score = d * d / weight[j];
      if (score > best) {
        best = score;
        enter = j;
        dir = dj;
      }
    }

    if (enter < 0) {
      if (!fresh) {
        refactor();
        compute_basic_values();
        fresh = true;
        continue;
      }
      if (phase == 1) {
        phase1_residual_ = infeas;
        return Result::Infeasible;
      }
      return Result::Optimal;
    }

    scatter_column(enter, alpha_);
    lu_.ftran(alpha_);

    // Ratio test (two-pass Harris; Bland mode takes the first minimum ratio).
    auto blocking = [&](int p, double& dist, double& rate) -> bool {
      const int j = basic_[p];
      rate = -dir * alpha_[p];
      if (std::abs(rate) < 1e-11) return false;
      const double xj = x_[j];
      if (rate < 0.0) {
        if (phase == 1 && xj < lower_[j] - ftol) return false;
        const double bound = (phase == 1 && xj > upper_[j] + ftol) ? upper_[j] : lower_[j];
        if (!std::isfinite(bound)) return false;
        dist = xj - bound;
      } else {
        if (phase == 1 && xj > upper_[j] + ftol) return false;
        const double bound = (phase == 1 && xj < lower_[j] - ftol) ? lower_[j] : upper_[j];
        if (!std::isfinite(bound)) return false;
        dist = bound - xj;
      }
      return true;
    };

    double theta_max = kInf;
    for (int p = 0; p < m_; ++p) {
      double dist, rate;
      if (!blocking(p, dist, rate)) continue;
      const double relaxed = bland ? std::max(dist, 0.0) : std::max(dist + ftol, 0.0);
      theta_max = std::min(theta_max, relaxed / std::abs(rate));
    }
    int leave = -1;
    double theta = kInf;
    if (std::isfinite(theta_max)) {
      double best_rate = 0.0;
      for (int p = 0; p < m_; ++p) {
        double dist, rate;
        if (!blocking(p, dist, rate)) continue;
        const double ratio = std::max(dist, 0.0) / std::abs(rate);
        if (ratio > theta_max) continue;
        if (bland) {
          if (leave < 0 || ratio < theta || (ratio == theta && basic_[p] < basic_[leave])) {
            leave = p;
            theta = ratio;
          }
        } else if (std::abs(rate) > best_rate) {
          best_rate = std::abs(rate);
          leave = p;
          theta = ratio;
        }
      }
    }

    const double range = upper_[enter] - lower_[enter];
    if (std::isfinite(range) && range <= theta) {
      // Bound flip, no basis change.
      for (int p = 0; p < m_; ++p) x_[basic_[p]] -= dir * range * alpha_[p];
      if (status_[enter] == VarStatus::AtLower) {
        status_[enter] = VarStatus::AtUpper;
        x_[enter] = upper_[enter];
      } else {
        status_[enter] = VarStatus::AtLower;
        x_[enter] = lower_[enter];
      }
      ++iterations_;
      fresh = false;
      continue;
    }
    if (leave < 0) {
      if (phase == 2) {
        ray_var_ = enter;
        return Result::Unbounded;
      }
      // Phase 1 cannot be unbounded; treat as numerical trouble.
      refactor();
      compute_basic_values();
      fresh = true;
      ++iterations_;
      continue;
    }

    const int out = basic_[leave];
    double rate_out = -dir * alpha_[leave];
    if (!bland) {
      // Devex reference weights from the pivot row.
      std::fill(rho.begin(), rho.end(), 0.0);
      rho[leave] = 1.0;
      lu_.btran(rho);
      const double piv = alpha_[leave];
      const double wq = weight[enter];
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::Basic || j == enter || lower_[j] == upper_[j]) continue;
        const double arj = dot_column(j, rho);
        if (arj == 0.0) continue;
        const double ratio = arj / piv;
        weight[j] = std::max(weight[j], ratio * ratio * wq);
      }
      weight[out] = std::max(wq / (piv * piv), 1.0);
    }
    for (int p = 0; p < m_; ++p) x_[basic_[p]] -= dir * theta * alpha_[p];
    x_[enter] += dir * theta;
    // Leaving variable goes exactly to the bound it hit.
    if (rate_out < 0.0) {
      const bool to_upper = phase == 1 && x_[out] + (-rate_out) * theta > upper_[out] + ftol &&
                            std::isfinite(upper_[out]);
      if (to_upper) { x_[out] = upper_[out]; status_[out] = VarStatus::AtUpper; }
      else { x_[out] = lower_[out]; status_[out] = VarStatus::AtLower; }
    } else {
      const bool to_lower = phase == 1 && x_[out] - rate_out * theta < lower_[out] - ftol &&
                            std::isfinite(lower_[out]);
      if (to_lower) { x_[out] = lower_[out]; status_[out] = VarStatus::AtLower; }
      else { x_[out] = upper_[out]; status_[out] = VarStatus::AtUpper; }
    }
    if (!std::isfinite(x_[out])) {
      x_[out] = 0.0;
      status_[out] = VarStatus::Free;
    }
    pos_of_[out] = -1;
    basic_[leave] = enter;
    pos_of_[enter] = leave;
    status_[enter] = VarStatus::Basic;
    lu_.update(leave, alpha_);
    ++iterations_;
    fresh = false;
  }
}

SolutionView Simplex::extract(Result r) {
  SolutionView sol;
  switch (r) {
    case Result::Optimal: sol.status = SolveStatus::Optimal; break;
    case Result::Infeasible: sol.status = SolveStatus::Infeasible; break;
    case Result::Unbounded: sol.status = SolveStatus::Unbounded; break;
    case Result::IterationLimit: sol.status = SolveStatus::IterationLimit; break;
  }
  sol.iterations = iterations_;
  sol.infeasibility = phase1_residual_;
  sol.x.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    double v = x_[j] * col_scale_[j];
    // snap to the original bound when nonbasic
    if (status_[j] == VarStatus::AtLower) v = ir_.variable(j).lower;
    else if (status_[j] == VarStatus::AtUpper) v = ir_.variable(j).upper;
    sol.x[j] = v;
  }
  // Duals and reduced costs from the final basis with phase-2 costs.
  for (int p = 0; p < m_; ++p) cb_[p] = cost_[basic_[p]];
  y_ = cb_;
  lu_.btran(y_);
  sol.duals.resize(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) sol.duals[i] = y_[i] * row_scale_[i];
  sol.reduced_costs.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j)
    sol.reduced_costs[j] =
        status_[j] == VarStatus::Basic ? 0.0 : (cost_[j] - dot_column(j, y_)) / col_scale_[j];
  sol.objective = ir_.objective(sol.x);
  sol.var_tags.reserve(static_cast<std::size_t>(n_));
  for (const auto& v : ir_.variables()) sol.var_tags.push_back(v.tag);
  for (const auto& c : ir_.constraints()) sol.row_tags.push_back(c.tag);
  sol.basis.basic = basic_;
  sol.basis.status = status_;
  if (ray_var_ >= 0) sol.ray_tag = ray_var_ < n_ ? ir_.variable(ray_var_).tag : "slack:" + ir_.constraint(ray_var_ - n_).tag;
  return sol;
}

SolutionView Simplex::run() {
  x_.assign(static_cast<std::size_t>(total_), 0.0);
  status_.assign(static_cast<std::size_t>(total_), VarStatus::AtLower);
  pos_of_.assign(static_cast<std::size_t>(total_), -1);
  basic_.assign(static_cast<std::size_t>(m_), -1);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lower_[j])) { status_[j] = VarStatus::AtLower; x_[j] = lower_[j]; }
    else if (std::isfinite(upper_[j])) { status_[j] = VarStatus::AtUpper; x_[j] = upper_[j]; }
    else { status_[j] = VarStatus::Free; x_[j] = 0.0; }
  }
  for (int i = 0; i < m_; ++i) {
    basic_[i] = n_ + i;
    pos_of_[n_ + i] = i;
    status_[n_ + i] = VarStatus::Basic;
  }
  // Relax bounds by tiny deterministic amounts against degeneracy, then
  // restore them and finish from the final basis.
  const std::vector<double> lo0 = lower_, up0 = upper_;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int j = 0; j < total_; ++j) {
    if (lower_[j] == upper_[j]) continue;
    if (std::isfinite(lower_[j])) lower_[j] -= kPerturb * (1.0 + std::abs(lower_[j])) * u(rng);
    if (std::isfinite(upper_[j])) upper_[j] += kPerturb * (1.0 + std::abs(upper_[j])) * u(rng);
  }
  for (int j = 0; j < total_; ++j)
    if (status_[j] == VarStatus::AtLower) x_[j] = lower_[j];
    else if (status_[j] == VarStatus::AtUpper) x_[j] = upper_[j];
  iterate();
  ray_var_ = -1;
  phase1_residual_ = 0.0;
  lower_ = lo0;
  upper_ = up0;
  for (int j = 0; j < total_; ++j)
    if (status_[j] == VarStatus::AtLower) x_[j] = lower_[j];
    else if (status_[j] == VarStatus::AtUpper) x_[j] = upper_[j];
  const Result r = iterate();
  return extract(r);
}

}  // namespace

SolutionView SimplexSolver::solve(const ModelIR& ir, const SolverOptions& opts) {
  ir.validate();
  Simplex s(ir, opts);
  return s.run();
}

SolutionView solve(const ModelIR& ir, const SolverOptions& opts) {
  SimplexSolver s;
  return s.solve(ir, opts);
}

ExternalSolver::ExternalSolver(std::string command, std::string work_dir)
    : command_(std::move(command)), work_dir_(std::move(work_dir)) {}

SolutionView ExternalSolver::solve(const ModelIR& ir, const SolverOptions&) {
  const std::string dir = work_dir_.empty() ? "." : work_dir_;
  const std::string model = dir + "/model.lp";
  const std::string solution = dir + "/model.sol";
  {
    std::ofstream out(model);
    if (!out) throw ConfigError(model, 0, "", "cannot write model file");
    ir.write(out);
  }
  const std::string cmd = command_ + " '" + model + "' '" + solution + "'";
  const int rc = std::system(cmd.c_str());
  // Exit status 1 reports a non-optimal but well-formed solution file.
  if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) > 1)
    throw std::runtime_error("external solver failed: " + cmd);
  std::ifstream in(solution);
  if (!in) throw ConfigError(solution, 0, "", "external solver wrote no solution");
  return SolutionView::read(in);
}

}  // namespace hdvgrid
