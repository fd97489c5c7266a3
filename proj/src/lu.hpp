#pragma once

// Sparse LU factorization of a simplex basis with product-form updates.
//
// B = L U is computed by Markowitz pivoting with a relative threshold test.
// Rows of B are constraint indices, columns are basis positions. ftran maps a
// row-indexed right-hand side to a position-indexed solution of B x = a;
// btran maps a position-indexed vector to the row-indexed solution of
// B^T y = c. After k column replacements the effective basis is
// B E_1 ... E_k.

#include <vector>

namespace hdvgrid::detail {

struct SparseColumn {
  std::vector<int> rows;
  std::vector<double> values;
};

class SparseLU {
 public:
  struct Singularity {
    std::vector<int> positions;  // basis positions left without a pivot
    std::vector<int> rows;       // rows left without a pivot
    bool empty() const noexcept { return positions.empty(); }
  };

  Singularity factorize(int m, const std::vector<SparseColumn>& columns);

  void ftran(std::vector<double>& x) const;
  void btran(std::vector<double>& y) const;

  /// Replaces basis position `r` by the column whose ftran image is `alpha`.
  void update(int r, const std::vector<double>& alpha);

  int num_updates() const noexcept { return static_cast<int>(etas_.size()); }
  long fill() const noexcept { return fill_; }

  double pivot_threshold = 0.01;
  double drop_tolerance = 1e-14;
  double singular_tolerance = 1e-11;

 private:
  struct LStep {
    int pivot_row;
    std::vector<int> rows;
    std::vector<double> multipliers;
  };
  struct UStep {
    int pivot_row;
    int pivot_pos;
    double pivot;
    std::vector<int> positions;
    std::vector<double> values;
  };
  struct Eta {
    int pos;
    double pivot;
    std::vector<int> positions;
    std::vector<double> values;
  };

  int m_ = 0;
  std::vector<LStep> lsteps_;
  std::vector<UStep> usteps_;
  std::vector<Eta> etas_;
  long fill_ = 0;
  mutable std::vector<double> work_;
};

}  // namespace hdvgrid::detail
