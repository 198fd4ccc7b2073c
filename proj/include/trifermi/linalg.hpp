#pragma once

// Dense complex linear algebra for the 2x2 ... 8x8 operators used throughout
// the toolkit. Everything here is a pure function over immutable values.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "trifermi/errors.hpp"

namespace trifermi {

using cplx = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw InvalidInput("ComplexMatrix: entry count does not match dimensions");
    }
  }

  /// Row-major literal, e.g. {{0, 1}, {1, 0}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidInput("ComplexMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  /// Entrywise self-adjointness within `tol` (absolute, scaled by max(1, max|entry|)).
  bool is_hermitian(double tol = 1e-12) const {
    if (!is_square()) return false;
    const double scale = std::max(1.0, max_abs());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r; c < cols_; ++c)
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol * scale) return false;
    return true;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx(s); }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx(s); }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= cplx(-1.0); }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("matrix product: inner dimensions differ");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx(0.0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

/// Eigenvalues ascending; eigenvectors stored as the matching columns.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }

  std::vector<cplx> vector(std::size_t k) const {
    std::vector<cplx> v(eigenvectors.rows());
    for (std::size_t r = 0; r < v.size(); ++r) v[r] = eigenvectors(r, k);
    return v;
  }
};

namespace pauli {

inline ComplexMatrix I() { return ComplexMatrix::identity(2); }
inline ComplexMatrix X() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix Y() { return {{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
inline ComplexMatrix Z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace pauli

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const cplx s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc) out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

/// Left fold: kron(kron(a, b), c).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
  return kron(kron(a, b), c);
}

inline void require_party(int party) {
  if (party < 1 || party > 3) throw InvalidInput("party index must be 1, 2 or 3, got " + std::to_string(party));
}

/// Bit of the 3-bit basis label |ijk> that belongs to `party`; party 1 is the MSB.
inline unsigned party_bit(int party) {
  require_party(party);
  return 1u << (3 - party);
}

/// Embeds single-party operators at their tensor slots (identity elsewhere).
inline ComplexMatrix embed(const ComplexMatrix& op1, const ComplexMatrix& op2, const ComplexMatrix& op3) {
  return kron(op1, op2, op3);
}

/// sigma^(i) . sigma^(j) = XX + YY + ZZ on parties i, j.
inline ComplexMatrix spin_product(int i, int j) {
  require_party(i);
  require_party(j);
  if (i == j) throw InvalidInput("spin_product needs two distinct parties");
  ComplexMatrix out(8, 8);
  for (const auto& s : {pauli::X(), pauli::Y(), pauli::Z()}) {
    std::array<ComplexMatrix, 3> slot{pauli::I(), pauli::I(), pauli::I()};
    slot[i - 1] = s;
    slot[j - 1] = s;
    out += embed(slot[0], slot[1], slot[2]);
  }
  return out;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, int party) {
  require_party(party);
  if (rho.rows() != 8 || rho.cols() != 8) throw InvalidInput("partial_transpose expects an 8x8 matrix");
  const unsigned mask = party_bit(party);
  ComplexMatrix out(8, 8);
  for (unsigned r = 0; r < 8; ++r)
    for (unsigned c = 0; c < 8; ++c) {
      const unsigned r2 = (r & ~mask) | (c & mask);
      const unsigned c2 = (c & ~mask) | (r & mask);
      out(r2, c2) = rho(r, c);
    }
  return out;
}

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Each rotation zeroes a_pq with J = [[c, s e^{i phi}], [-s e^{-i phi}, c]]
/// where phi = arg(a_pq); sweeps stop once the off-diagonal Frobenius norm
/// drops below 1e-13 (relative to max(1, ||A||_F)).
inline Spectrum hermitian_eigs(const ComplexMatrix& m) {
  if (!m.is_hermitian(1e-12)) throw InvalidInput("hermitian_eigs: input is not Hermitian");
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = 1e-13 * std::max(1.0, m.frobenius_norm());

  for (int sweep = 0; sweep < 100 && detail::off_diagonal_norm(a) > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag < 1e-300) continue;
        const cplx phase = a(p, q) / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx s_pq = s * phase;             // J(p, q)
        const cplx s_qp = -s * std::conj(phase);  // J(q, p)

        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * c + akq * s_qp;
          a(k, q) = akp * s_pq + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^dag A
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + std::conj(s_qp) * aqk;
          a(q, k) = std::conj(s_pq) * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * c + vkq * s_qp;
          v(k, q) = vkp * s_pq + vkq * c;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  Spectrum out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eigs(m).min(); }
inline double max_eigenvalue(const ComplexMatrix& m) { return hermitian_eigs(m).max(); }

inline double trace_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (double e : hermitian_eigs(m).eigenvalues) s += std::abs(e);
  return s;
}

/// Tr(op * rho). The imaginary residue must stay below 1e-9.
inline double expectation(const ComplexMatrix& op, const ComplexMatrix& rho) {
  if (!op.is_square() || op.rows() != rho.rows() || rho.rows() != rho.cols())
    throw InvalidInput("expectation: dimension mismatch");
  cplx t = 0.0;
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t j = 0; j < op.cols(); ++j) t += op(i, j) * rho(j, i);
  if (std::abs(t.imag()) > 1e-9) throw InvalidInput("expectation: imaginary residue exceeds 1e-9");
  return t.real();
}

/// <v|op|v> for a state vector v (not required to be normalized).
inline double expectation(const ComplexMatrix& op, std::span<const cplx> v) {
  if (op.rows() != v.size() || op.cols() != v.size()) throw InvalidInput("expectation: dimension mismatch");
  cplx t = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    cplx row = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) row += op(i, j) * v[j];
    t += std::conj(v[i]) * row;
  }
  if (std::abs(t.imag()) > 1e-9) throw InvalidInput("expectation: imaginary residue exceeds 1e-9");
  return t.real();
}

inline ComplexMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  ComplexMatrix out(ket.size(), bra.size());
  for (std::size_t r = 0; r < ket.size(); ++r)
    for (std::size_t c = 0; c < bra.size(); ++c) out(r, c) = ket[r] * std::conj(bra[c]);
  return out;
}

inline ComplexMatrix projector(std::span<const cplx> v) { return outer(v, v); }

inline std::vector<cplx> matvec(const ComplexMatrix& m, std::span<const cplx> v) {
  if (m.cols() != v.size()) throw InvalidInput("matvec: dimension mismatch");
  std::vector<cplx> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
  return out;
}

inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace trifermi
