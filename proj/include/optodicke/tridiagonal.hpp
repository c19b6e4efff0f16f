// Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, eigenvectors
// by inverse iteration with a partially pivoted LU factorization.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "optodicke/errors.hpp"

namespace optodicke {

template <typename Scalar = double>
struct SymmetricTridiagonal {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector diag;     // n entries
  Vector offdiag;  // n - 1 entries, offdiag(i) couples i and i + 1

  Eigen::Index size() const { return diag.size(); }
  bool consistent() const {
    return diag.size() > 0 && offdiag.size() == diag.size() - 1;
  }
};

template <typename Scalar = double>
struct EigenPair {
  Scalar value{0};
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
  Scalar residual{0};  // ||T v - value v||_2 with ||v||_2 = 1
};

/// Infinity norm (max absolute row sum).
template <typename Scalar>
Scalar norm_inf(const SymmetricTridiagonal<Scalar>& t) {
  using std::abs;
  const Eigen::Index n = t.size();
  Scalar best = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar row = abs(t.diag(i));
    if (i > 0) row += abs(t.offdiag(i - 1));
    if (i + 1 < n) row += abs(t.offdiag(i));
    best = std::max(best, row);
  }
  return best;
}

/// y = T v.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply(const SymmetricTridiagonal<Scalar>& t,
                                               const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index n = t.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = t.diag.cwiseProduct(v);
  if (n > 1) {
    y.head(n - 1) += t.offdiag.cwiseProduct(v.tail(n - 1));
    y.tail(n - 1) += t.offdiag.cwiseProduct(v.head(n - 1));
  }
  return y;
}

/// Number of eigenvalues strictly below x (negative pivots of T - x I = L D L^T).
template <typename Scalar>
Eigen::Index sturm_count(const SymmetricTridiagonal<Scalar>& t, Scalar x) {
  using std::abs;
  const Scalar max_e2 = t.size() > 1 ? t.offdiag.cwiseAbs2().maxCoeff() : Scalar(0);
  const Scalar pivmin = std::numeric_limits<Scalar>::min() * std::max(Scalar(1), max_e2);
  Eigen::Index count = 0;
  Scalar q = 1;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    q = t.diag(i) - x - (i > 0 ? t.offdiag(i - 1) * t.offdiag(i - 1) / q : Scalar(0));
    if (abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

template <typename Scalar>
std::pair<Scalar, Scalar> gershgorin_interval(const SymmetricTridiagonal<Scalar>& t) {
  using std::abs;
  const Eigen::Index n = t.size();
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar r = 0;
    if (i > 0) r += abs(t.offdiag(i - 1));
    if (i + 1 < n) r += abs(t.offdiag(i));
    lo = std::min(lo, t.diag(i) - r);
    hi = std::max(hi, t.diag(i) + r);
  }
  return {lo, hi};
}

/// k-th smallest eigenvalue (k = 0 is the minimum) to abs_tol; 0 bisects to adjacent floats.
template <typename Scalar>
Scalar kth_eigenvalue(const SymmetricTridiagonal<Scalar>& t, Eigen::Index k,
                      Scalar abs_tol = Scalar(0), int max_iter = 400) {
  using std::abs;
  using std::isfinite;
  if (!t.consistent() || k < 0 || k >= t.size())
    throw ConvergenceFailure("malformed tridiagonal block or eigenvalue index");
  auto [lo, hi] = gershgorin_interval(t);
  if (!isfinite(lo) || !isfinite(hi)) throw ConvergenceFailure("non-finite Gershgorin interval");
  const Scalar pad = std::numeric_limits<Scalar>::epsilon() * std::max(abs(lo), abs(hi)) + abs_tol;
  lo -= pad;
  hi += pad;
  for (int it = 0; it < max_iter; ++it) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (hi - lo <= abs_tol || mid <= lo || mid >= hi) return lo + (hi - lo) / 2;
    (sturm_count(t, mid) <= k ? lo : hi) = mid;
  }
  throw ConvergenceFailure("Sturm bisection exceeded the iteration cap");
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues(const SymmetricTridiagonal<Scalar>& t,
                                                     Scalar abs_tol = Scalar(0)) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(t.size());
  for (Eigen::Index k = 0; k < t.size(); ++k) out(k) = kth_eigenvalue(t, k, abs_tol);
  return out;
}

namespace detail {

// LU of T - shift I with partial pivoting; U has two superdiagonals.
template <typename Scalar>
class ShiftedTridiagonalLU {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  ShiftedTridiagonalLU(const SymmetricTridiagonal<Scalar>& t, Scalar shift)
      : n_(t.size()), lower_(t.offdiag), diag_(t.diag.array() - shift), upper_(t.offdiag),
        upper2_(Vector::Zero(std::max<Eigen::Index>(n_ - 2, 0))), swapped_(n_, false) {
    using std::abs;
    const Scalar tiny =
        std::numeric_limits<Scalar>::epsilon() * std::max(norm_inf(t), Scalar(1));
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      if (abs(diag_(i)) >= abs(lower_(i))) {
        if (diag_(i) == 0) diag_(i) = tiny;
        const Scalar fact = lower_(i) / diag_(i);
        lower_(i) = fact;
        diag_(i + 1) -= fact * upper_(i);
      } else {
        swapped_[i] = true;
        const Scalar fact = diag_(i) / lower_(i);
        diag_(i) = lower_(i);
        lower_(i) = fact;
        const Scalar temp = upper_(i);
        upper_(i) = diag_(i + 1);
        diag_(i + 1) = temp - fact * diag_(i + 1);
        if (i + 2 < n_) {
          upper2_(i) = upper_(i + 1);
          upper_(i + 1) = -fact * upper_(i + 1);
        }
      }
    }
    if (n_ > 0 && diag_(n_ - 1) == 0) diag_(n_ - 1) = tiny;
  }

  Vector solve(Vector b) const {
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      if (!swapped_[i]) {
        b(i + 1) -= lower_(i) * b(i);
      } else {
        const Scalar temp = b(i);
        b(i) = b(i + 1);
        b(i + 1) = temp - lower_(i) * b(i);
      }
    }
    for (Eigen::Index i = n_ - 1; i >= 0; --i) {
      Scalar s = b(i);
      if (i + 1 < n_) s -= upper_(i) * b(i + 1);
      if (i + 2 < n_) s -= upper2_(i) * b(i + 2);
      b(i) = s / diag_(i);
    }
    return b;
  }

 private:
  Eigen::Index n_;
  Vector lower_, diag_, upper_, upper2_;
  std::vector<bool> swapped_;
};

}  // namespace detail

/// Eigenvector for a known eigenvalue by inverse iteration.
template <typename Scalar>
EigenPair<Scalar> inverse_iteration(const SymmetricTridiagonal<Scalar>& t, Scalar value,
                                    int iterations = 3) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const detail::ShiftedTridiagonalLU<Scalar> lu(t, value);
  Vector v = Vector::Ones(t.size()).normalized();
  for (int it = 0; it < iterations; ++it) {
    v = lu.solve(v);
    const Scalar nrm = v.norm();
    if (!(nrm > 0) || !std::isfinite(double(nrm)))
      throw ConvergenceFailure("inverse iteration produced a degenerate vector");
    v /= nrm;
  }
  EigenPair<Scalar> out;
  out.value = value;
  out.residual = (apply(t, v) - value * v).norm();
  out.vector = std::move(v);
  return out;
}

template <typename Scalar>
EigenPair<Scalar> smallest_eigenpair(const SymmetricTridiagonal<Scalar>& t,
                                     Scalar abs_tol = Scalar(0)) {
  return inverse_iteration(t, kth_eigenvalue(t, Eigen::Index(0), abs_tol));
}

}  // namespace optodicke
