#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hdvgrid/core.hpp"
#include "hdvgrid/model_ir.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return HDVGRID_DATA_DIR; }

class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("hdvgrid_" + name + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// One node, two fixed generators with marginal costs 20 and 50, constant load.
inline hdvgrid::TechnologyCatalog dispatch_toy(double load_mw, std::size_t hours = 24) {
  hdvgrid::TechnologyCatalog cat;
  auto unit = [](std::string name, double cost) {
    hdvgrid::GenerationTech g;
    g.name = std::move(name);
    g.category = "thermal";
    g.variable_cost = cost;
    g.capacity_min = 100.0;
    g.capacity_max = 100.0;
    return g;
  };
  cat.generators.push_back(unit("base", 20.0));
  cat.generators.push_back(unit("peak", 50.0));
  hdvgrid::Node n;
  n.name = "N";
  n.load = "load";
  n.expandable = true;
  cat.nodes.push_back(n);
  cat.series["load"].values.assign(hours, load_mw);
  return cat;
}

// Dense LP with finite bounds: min c.x, rows a_i.x (sense) b_i, lo <= x <= hi.
struct DenseLp {
  std::size_t n = 0, m = 0;
  std::vector<double> c, lo, hi, b;
  std::vector<std::vector<double>> a;
  std::vector<hdvgrid::Sense> sense;

  hdvgrid::ModelIR to_ir() const {
    hdvgrid::ModelIR ir;
    for (std::size_t j = 0; j < n; ++j) ir.add_variable("x" + std::to_string(j), lo[j], hi[j], c[j]);
    for (std::size_t i = 0; i < m; ++i) {
      const int r = ir.add_constraint("r" + std::to_string(i), sense[i], b[i]);
      for (std::size_t j = 0; j < n; ++j)
        if (a[i][j] != 0.0) ir.add_coefficient(r, static_cast<int>(j), a[i][j]);
    }
    return ir;
  }
};

// Integer data, feasible by construction unless `infeasible`; some rows are
// tight at a random box vertex to provoke degeneracy.
inline DenseLp random_lp(std::mt19937_64& rng, std::size_t n, std::size_t m, bool infeasible) {
  std::uniform_int_distribution<int> coef(-6, 6), cost(-10, 10), lower(-5, 2), width(0, 8), pick(0, 9);
  DenseLp lp;
  lp.n = n;
  lp.m = m;
  std::vector<double> point(n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.c.push_back(cost(rng));
    const double l = lower(rng);
    const double w = pick(rng) == 0 ? 0.0 : width(rng) + 1.0;
    lp.lo.push_back(l);
    lp.hi.push_back(l + w);
    const int at = pick(rng);
    point[j] = at < 3 ? l : at < 6 ? l + w : l + w * 0.5;
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(n);
    double act = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = pick(rng) < 3 ? 0.0 : coef(rng);
      act += row[j] * point[j];
    }
    const int s = pick(rng);
    hdvgrid::Sense sense = s < 5 ? hdvgrid::Sense::LessEqual : s < 8 ? hdvgrid::Sense::GreaterEqual
                                                                     : hdvgrid::Sense::Equal;
    const double slack = pick(rng) < 4 ? 0.0 : width(rng);
    double rhs = sense == hdvgrid::Sense::LessEqual ? act + slack
                 : sense == hdvgrid::Sense::GreaterEqual ? act - slack
                                                         : act;
    lp.a.push_back(row);
    lp.sense.push_back(sense);
    lp.b.push_back(rhs);
  }
  if (infeasible && m > 0) {
    // Contradicting copy of row 0.
    std::vector<double> row = lp.a[0];
    double big = 1.0;
    for (std::size_t j = 0; j < n; ++j) big += std::abs(row[j]) * std::max(std::abs(lp.lo[j]), std::abs(lp.hi[j]));
    for (double& v : row) v = -v;
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) row[0] = 1.0;
    lp.a.push_back(row);
    lp.sense.push_back(hdvgrid::Sense::GreaterEqual);
    lp.b.push_back(big * 4.0);
    lp.m += 1;
  }
  return lp;
}

// Brute-force optimum over all vertices of the polytope. A vertex has n
// linearly independent active constraints: k rows held at equality and the
// remaining n-k variables at one of their bounds. For every choice of rows
// and basic columns the k x k system is solved once; bound patterns of the
// nonbasic columns are then walked in Gray-code order with rank-one updates.
struct VertexOptimum {
  bool feasible = false;
  double objective = 0.0;
  long systems = 0;
};

namespace detail {

inline bool solve_square(std::vector<std::vector<double>> M, std::vector<std::vector<double>>& rhs_cols) {
  const std::size_t k = M.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) < 1e-9) return false;
    std::swap(M[piv], M[col]);
    for (auto& rc : rhs_cols) std::swap(rc[piv], rc[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = M[r][col] / M[col][col];
      if (f == 0.0) continue;
      for (std::size_t t = col; t < k; ++t) M[r][t] -= f * M[col][t];
      for (auto& rc : rhs_cols) rc[r] -= f * rc[col];
    }
  }
  for (auto& rc : rhs_cols)
    for (std::size_t r = 0; r < k; ++r) rc[r] /= M[r][r];
  return true;
}

template <typename F>
void combinations(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
}

}  // namespace detail

inline VertexOptimum enumerate_vertices(const DenseLp& lp, double tol = 1e-7) {
  VertexOptimum best;
  const std::size_t n = lp.n, m = lp.m;
  auto row_ok = [&](std::size_t i, double act) {
    const double t = tol * (1.0 + std::abs(lp.b[i]));
    switch (lp.sense[i]) {
      case hdvgrid::Sense::LessEqual: return act <= lp.b[i] + t;
      case hdvgrid::Sense::GreaterEqual: return act >= lp.b[i] - t;
      case hdvgrid::Sense::Equal: return std::abs(act - lp.b[i]) <= t;
    }
    return false;
  };

  for (std::size_t k = 0; k <= std::min(n, m); ++k) {
    detail::combinations(m, k, [&](const std::vector<std::size_t>& rows) {
      detail::combinations(n, k, [&](const std::vector<std::size_t>& basic) {
        std::vector<std::size_t> nonbasic;
        for (std::size_t j = 0, t = 0; j < n; ++j) {
          if (t < k && basic[t] == j) {
            ++t;
            continue;
          }
          nonbasic.push_back(j);
        }
        const std::size_t q = nonbasic.size();
        std::vector<std::vector<double>> M(k, std::vector<double>(k));
        for (std::size_t r = 0; r < k; ++r)
          for (std::size_t t = 0; t < k; ++t) M[r][t] = lp.a[rows[r]][basic[t]];
        // Columns: b_R, then A_R,j for each nonbasic j.
        std::vector<std::vector<double>> cols(1 + q, std::vector<double>(k));
        for (std::size_t r = 0; r < k; ++r) {
          cols[0][r] = lp.b[rows[r]];
          for (std::size_t t = 0; t < q; ++t) cols[1 + t][r] = lp.a[rows[r]][nonbasic[t]];
        }
        if (k > 0 && !detail::solve_square(M, cols)) return;
        ++best.systems;
        // x_B = M^-1 b_R - sum_j M^-1 A_Rj x_j
        std::vector<double> x(n);
        for (std::size_t t = 0; t < q; ++t) x[nonbasic[t]] = lp.lo[nonbasic[t]];
        for (std::size_t r = 0; r < k; ++r) {
          double v = cols[0][r];
          for (std::size_t t = 0; t < q; ++t) v -= cols[1 + t][r] * x[nonbasic[t]];
          x[basic[r]] = v;
        }
        std::vector<double> act(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) act[i] += lp.a[i][j] * x[j];
        std::vector<char> at_upper(q, 0);
        const unsigned long patterns = 1ul << q;
        for (unsigned long g = 0; g < patterns; ++g) {
          if (g > 0) {
            const std::size_t t = static_cast<std::size_t>(__builtin_ctzl(g));
            const std::size_t j = nonbasic[t];
            const double delta = at_upper[t] ? lp.lo[j] - lp.hi[j] : lp.hi[j] - lp.lo[j];
            at_upper[t] ^= 1;
            x[j] += delta;
            for (std::size_t i = 0; i < m; ++i) act[i] += lp.a[i][j] * delta;
            for (std::size_t r = 0; r < k; ++r) {
              const double dx = -cols[1 + t][r] * delta;
              x[basic[r]] += dx;
              for (std::size_t i = 0; i < m; ++i) act[i] += lp.a[i][basic[r]] * dx;
            }
          }
          bool ok = true;
          for (std::size_t r = 0; r < k && ok; ++r) {
            const std::size_t j = basic[r];
            const double t = tol * (1.0 + std::abs(lp.lo[j]) + std::abs(lp.hi[j]));
            ok = x[j] >= lp.lo[j] - t && x[j] <= lp.hi[j] + t;
          }
          for (std::size_t i = 0; i < m && ok; ++i) ok = row_ok(i, act[i]);
          if (!ok) continue;
          double obj = 0.0;
          for (std::size_t j = 0; j < n; ++j) obj += lp.c[j] * x[j];
          if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
          }
        }
      });
    });
  }
  return best;
}

}  // namespace testsupport
