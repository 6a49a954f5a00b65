#pragma once

// Small dense matrices and the eigenvalue extremes needed by the positivity
// checks. Sizes here never exceed a few dozen, so everything is O(n^3) and
// allocation-light.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "errors.hpp"

namespace invpsh::linalg {

using Complex = std::complex<double>;

/// Row-major dense matrix.
template <typename T>
class Dense {
 public:
  Dense() = default;
  explicit Dense(std::size_t n) : n_(n), data_(n * n, T{}) {}
  Dense(std::initializer_list<std::initializer_list<T>> rows) : n_(rows.size()), data_(n_ * n_, T{}) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != n_) throw ConfigError("Dense: matrix must be square");
      std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n_));
      ++i;
    }
  }

  static Dense identity(std::size_t n) {
    Dense m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const T> data() const noexcept { return data_; }

  Dense& operator+=(const Dense& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Dense& operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend bool operator==(const Dense&, const Dense&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using Matrix = Dense<double>;
using CMatrix = Dense<Complex>;

inline double max_abs(const Matrix& m) {
  double r = 0.0;
  for (double x : m.data()) r = std::max(r, std::abs(x));
  return r;
}

inline double max_abs(const CMatrix& m) {
  double r = 0.0;
  for (const Complex& x : m.data()) r = std::max(r, std::abs(x));
  return r;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double r = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) r = std::max(r, std::abs(a.data()[k] - b.data()[k]));
  return r;
}

/// Replace M by (M + M^T)/2. Throws if the asymmetry exceeds `tol` relative to ‖M‖.
inline Matrix symmetrized(Matrix m, double tol = 1e-12) {
  const double scale = std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol * scale) throw ConfigError("matrix is not symmetric");
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = m(j, i) = avg;
    }
  }
  return m;
}

/// Same for Hermitian matrices: (M + M^*)/2, diagonal made real.
inline CMatrix hermitianized(CMatrix m, double tol = 1e-12) {
  const double scale = std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (std::abs(m(i, i).imag()) > tol * scale) throw ConfigError("matrix is not Hermitian");
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * scale) throw ConfigError("matrix is not Hermitian");
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  return m;
}

inline constexpr std::size_t kMaxEigenOrder = 128;

/// All eigenvalues of a real symmetric matrix, ascending, by cyclic Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  if (n > kMaxEigenOrder) throw ConfigError("symmetric_eigenvalues: order too large");

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };
  double total = 0.0;
  for (double x : a.data()) total += x * x;
  const double fro = std::sqrt(total);

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-14 * fro || fro == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p,q) (Rutishauser's stable form).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
          a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
        }
      }
    }
  }
  if (sweep == kMaxSweeps) throw EvaluationError("Jacobi eigenvalue iteration did not converge");

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Smallest eigenvalue of a real symmetric matrix (n <= 64).
inline double min_eig(const Matrix& m) {
  if (m.size() > 64) throw ConfigError("min_eig: order must be at most 64");
  if (m.size() == 0) throw ConfigError("min_eig: empty matrix");
  return symmetric_eigenvalues(m).front();
}

/// Real 2n x 2n embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix. Every
/// eigenvalue of the Hermitian matrix appears twice in the embedding.
inline Matrix real_embedding(const CMatrix& h) {
  const std::size_t n = h.size();
  Matrix e(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e(i, j) = h(i, j).real();
      e(i + n, j + n) = h(i, j).real();
      e(i, j + n) = -h(i, j).imag();
      e(i + n, j) = h(i, j).imag();
    }
  }
  return e;
}

/// Smallest eigenvalue of a complex Hermitian matrix (n <= 64).
inline double min_eig(const CMatrix& h) {
  if (h.size() > 64) throw ConfigError("min_eig: order must be at most 64");
  if (h.size() == 0) throw ConfigError("min_eig: empty matrix");
  return symmetric_eigenvalues(real_embedding(hermitianized(h))).front();
}

/// Solve A x = b by Gaussian elimination with partial pivoting. Throws on a singular A.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw ConfigError("solve: dimension mismatch");
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(a(i, c)) > std::abs(a(piv, c))) piv = i;
    if (a(piv, c) == 0.0) throw EvaluationError("solve: singular matrix");
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      std::swap(b[c], b[piv]);
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      const double f = a(i, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(i, k) -= f * a(c, k);
      b[i] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return x;
}

/// C * M * conj(C) for diagonal C given by its diagonal entries.
inline CMatrix congruence(std::span<const Complex> c, const Matrix& m) {
  if (c.size() != m.size()) throw ConfigError("congruence: dimension mismatch");
  const std::size_t n = m.size();
  CMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = c[i] * m(i, j) * std::conj(c[j]);
  return out;
}

inline CMatrix congruence(std::span<const Complex> c, const CMatrix& m) {
  if (c.size() != m.size()) throw ConfigError("congruence: dimension mismatch");
  const std::size_t n = m.size();
  CMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = c[i] * m(i, j) * std::conj(c[j]);
  return out;
}

}  // namespace invpsh::linalg
