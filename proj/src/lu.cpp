#include "lu.hpp"

#include <algorithm>
#include <cmath>

namespace hdvgrid::detail {

namespace {

/// Items 0..n-1 filed under an integer count, O(1) move between buckets.
class Buckets {
 public:
  Buckets(int n, int max_count)
      : head_(static_cast<std::size_t>(max_count) + 2, -1),
        next_(static_cast<std::size_t>(n), -1),
        prev_(static_cast<std::size_t>(n), -1),
        count_(static_cast<std::size_t>(n), -1) {}

  void insert(int i, int c) {
    c = std::min(c, static_cast<int>(head_.size()) - 1);
    count_[i] = c;
    prev_[i] = -1;
    next_[i] = head_[c];
    if (head_[c] >= 0) prev_[head_[c]] = i;
    head_[c] = i;
  }
  void remove(int i) {
    const int c = count_[i];
    if (c < 0) return;
    if (prev_[i] >= 0) next_[prev_[i]] = next_[i];
    else head_[c] = next_[i];
    if (next_[i] >= 0) prev_[next_[i]] = prev_[i];
    count_[i] = -1;
  }
  void move(int i, int c) {
    remove(i);
    insert(i, c);
  }
  int first(int c) const { return head_[c]; }
  int next(int i) const { return next_[i]; }
  int max_count() const { return static_cast<int>(head_.size()) - 1; }

 private:
  std::vector<int> head_, next_, prev_, count_;
};

struct Entry {
  int col;
  double val;
};

}  // namespace

SparseLU::Singularity SparseLU::factorize(int m, const std::vector<SparseColumn>& columns) {
  m_ = m;
  lsteps_.clear();
  usteps_.clear();
  etas_.clear();
  fill_ = 0;
  work_.assign(static_cast<std::size_t>(m), 0.0);

  std::vector<std::vector<Entry>> rows(static_cast<std::size_t>(m));
  std::vector<std::vector<int>> col_rows(static_cast<std::size_t>(m));
  std::vector<int> col_count(static_cast<std::size_t>(m), 0);
  for (int j = 0; j < m; ++j) {
    const auto& c = columns[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < c.rows.size(); ++k) {
      if (c.values[k] == 0.0) continue;
      rows[static_cast<std::size_t>(c.rows[k])].push_back({j, c.values[k]});
      col_rows[static_cast<std::size_t>(j)].push_back(c.rows[k]);
      ++col_count[static_cast<std::size_t>(j)];
    }
  }

  std::vector<char> row_active(static_cast<std::size_t>(m), 1), col_active(static_cast<std::size_t>(m), 1);
  Buckets col_b(m, m), row_b(m, m);
  for (int j = 0; j < m; ++j) col_b.insert(j, col_count[j]);
  for (int i = 0; i < m; ++i) row_b.insert(i, static_cast<int>(rows[i].size()));

  auto value_at = [&](int i, int j) -> double* {
    for (auto& e : rows[i])
      if (e.col == j) return &e.val;
    return nullptr;
  };

  // Compacts the column pattern to active rows that really hold the entry.
  auto column_entries = [&](int j, std::vector<std::pair<int, double>>& out) {
    out.clear();
    auto& pat = col_rows[j];
    std::size_t keep = 0;
    for (int i : pat) {
      if (!row_active[i]) continue;
      double* v = value_at(i, j);
      if (!v) continue;
      bool dup = false;
      for (const auto& [r, _] : out)
        if (r == i) { dup = true; break; }
      if (dup) continue;
      out.emplace_back(i, *v);
      pat[keep++] = i;
    }
    pat.resize(keep);
  };

  std::vector<double> wval(static_cast<std::size_t>(m), 0.0);
  std::vector<int> wmark(static_cast<std::size_t>(m), -1), seen(static_cast<std::size_t>(m), -1);
  std::vector<std::pair<int, double>> colbuf, bestcol;
  int seen_stamp = 0;

  for (int step = 0; step < m; ++step) {
    int piv_row = -1, piv_col = -1;
    double piv_val = 0.0;

    // Column singletons first, then row singletons, then a short Markowitz search.
    for (int j = col_b.first(1); j >= 0 && piv_col < 0; j = col_b.next(j)) {
      column_entries(j, colbuf);
      if (colbuf.size() == 1 && std::abs(colbuf[0].second) > singular_tolerance) {
        piv_row = colbuf[0].first;
        piv_col = j;
        piv_val = colbuf[0].second;
      }
    }
    for (int i = row_b.first(1); i >= 0 && piv_col < 0; i = row_b.next(i)) {
      const Entry e = rows[i].front();
      column_entries(e.col, colbuf);
      double cmax = 0.0;
      for (const auto& [_, v] : colbuf) cmax = std::max(cmax, std::abs(v));
      if (std::abs(e.val) > singular_tolerance && std::abs(e.val) >= pivot_threshold * cmax) {
        piv_row = i;
        piv_col = e.col;
        piv_val = e.val;
      }
    }
    if (piv_col < 0) {
      long best = -1;
      int examined = 0;
      for (int c = 1; c <= col_b.max_count() && examined < 4; ++c) {
        for (int j = col_b.first(c); j >= 0 && examined < 4; j = col_b.next(j)) {
          column_entries(j, colbuf);
          double cmax = 0.0;
          for (const auto& [_, v] : colbuf) cmax = std::max(cmax, std::abs(v));
          if (cmax <= singular_tolerance) continue;
          ++examined;
          const long cc = static_cast<long>(colbuf.size()) - 1;
          for (const auto& [i, v] : colbuf) {
            if (std::abs(v) < pivot_threshold * cmax) continue;
            const long score = (static_cast<long>(rows[i].size()) - 1) * cc;
            if (best < 0 || score < best ||
                (score == best && std::abs(v) > std::abs(piv_val))) {
              best = score;
              piv_row = i;
              piv_col = j;
              piv_val = v;
            }
          }
        }
        if (best >= 0 && best <= static_cast<long>(c - 1) * (c - 1)) break;
      }
    }
    if (piv_col < 0) break;  // remaining active submatrix is numerically singular

    column_entries(piv_col, colbuf);
    row_active[piv_row] = 0;
    col_active[piv_col] = 0;
    row_b.remove(piv_row);
    col_b.remove(piv_col);

    // U row: the pivot row minus the pivot entry.
    UStep u{piv_row, piv_col, piv_val, {}, {}};
    for (const auto& e : rows[piv_row]) {
      if (e.col == piv_col) continue;
      u.positions.push_back(e.col);
      u.values.push_back(e.val);
      wval[e.col] = e.val;
      wmark[e.col] = step;
      col_b.move(e.col, --col_count[e.col]);
    }

    LStep l{piv_row, {}, {}};
    for (const auto& [i, v] : colbuf) {
      if (i == piv_row) continue;
      const double mult = v / piv_val;
      l.rows.push_back(i);
      l.multipliers.push_back(mult);
      auto& row = rows[i];
      ++seen_stamp;
      std::size_t keep = 0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        Entry e = row[k];
        if (e.col == piv_col) continue;
        if (wmark[e.col] == step) {
          e.val -= mult * wval[e.col];
          seen[e.col] = seen_stamp;
          if (std::abs(e.val) <= drop_tolerance) {
            col_b.move(e.col, --col_count[e.col]);
            continue;
          }
        }
        row[keep++] = e;
      }
      row.resize(keep);
      for (std::size_t k = 0; k < u.positions.size(); ++k) {
        const int j = u.positions[k];
        if (seen[j] == seen_stamp) continue;
        const double fillv = -mult * u.values[k];
        if (std::abs(fillv) <= drop_tolerance) continue;
        row.push_back({j, fillv});
        col_rows[j].push_back(i);
        col_b.move(j, ++col_count[j]);
        ++fill_;
      }
      row_b.move(i, static_cast<int>(row.size()));
    }
    rows[piv_row].clear();
    if (!l.rows.empty()) lsteps_.push_back(std::move(l));
    usteps_.push_back(std::move(u));
  }

  Singularity sing;
  if (static_cast<int>(usteps_.size()) < m) {
    for (int j = 0; j < m; ++j)
      if (col_active[j]) sing.positions.push_back(j);
    for (int i = 0; i < m; ++i)
      if (row_active[i]) sing.rows.push_back(i);
  }
  return sing;
}

void SparseLU::ftran(std::vector<double>& x) const {
  for (const auto& l : lsteps_) {
    const double xp = x[l.pivot_row];
    if (xp == 0.0) continue;
    for (std::size_t k = 0; k < l.rows.size(); ++k) x[l.rows[k]] -= l.multipliers[k] * xp;
  }
  auto& sol = work_;
  for (auto it = usteps_.rbegin(); it != usteps_.rend(); ++it) {
    double v = x[it->pivot_row];
    for (std::size_t k = 0; k < it->positions.size(); ++k) v -= it->values[k] * sol[it->positions[k]];
    sol[it->pivot_pos] = v / it->pivot;
  }
  std::swap(x, sol);
  for (const auto& e : etas_) {
    double xr = x[e.pos];
    if (xr == 0.0) continue;
    xr /= e.pivot;
    x[e.pos] = xr;
    for (std::size_t k = 0; k < e.positions.size(); ++k) x[e.positions[k]] -= e.values[k] * xr;
  }
}

void SparseLU::btran(std::vector<double>& y) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double v = y[it->pos];
    for (std::size_t k = 0; k < it->positions.size(); ++k) v -= it->values[k] * y[it->positions[k]];
    y[it->pos] = v / it->pivot;
  }
  auto& w = work_;
  for (const auto& u : usteps_) {
    const double wp = y[u.pivot_pos] / u.pivot;
    w[u.pivot_row] = wp;
    if (wp == 0.0) continue;
    for (std::size_t k = 0; k < u.positions.size(); ++k) y[u.positions[k]] -= u.values[k] * wp;
  }
  std::swap(y, w);
  for (auto it = lsteps_.rbegin(); it != lsteps_.rend(); ++it) {
    double v = y[it->pivot_row];
    for (std::size_t k = 0; k < it->rows.size(); ++k) v -= it->multipliers[k] * y[it->rows[k]];
    y[it->pivot_row] = v;
  }
}

void SparseLU::update(int r, const std::vector<double>& alpha) {
  Eta e{r, alpha[r], {}, {}};
  for (int i = 0; i < m_; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    e.positions.push_back(i);
    e.values.push_back(alpha[i]);
  }
  etas_.push_back(std::move(e));
}

}  // namespace hdvgrid::detail
