#pragma once

// Matrices over hyper-dual jets, stored as one dense Eigen matrix per slot
// mask. Absent masks are zero matrices held as 0x0.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <array>
#include <bit>
#include <span>

#include "biform/errors.hpp"
#include "biform/jet.hpp"

namespace biform {

/// Inverse condition estimates below this fail the solve.
inline constexpr double kMinRcond = 1e-13;

/// sigma_min / sigma_max; 0 for a zero or exactly singular matrix.
template <class Derived>
double inverse_condition(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  const auto sv = m.jacobiSvd().singularValues();
  const double hi = sv(0);
  return hi > 0 ? sv(sv.size() - 1) / hi : 0.0;
}

template <class S>
class JetMatrix {
 public:
  using Dense = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Entry = HyperDual<S>;

  JetMatrix() = default;
  JetMatrix(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {
    c_[0] = Dense::Zero(rows, cols);
  }
  explicit JetMatrix(Dense value) : rows_(value.rows()), cols_(value.cols()) {
    c_[0] = std::move(value);
  }

  static JetMatrix identity(Eigen::Index n) { return JetMatrix(Dense::Identity(n, n)); }

  /// Row-major jets -> matrix.
  static JetMatrix from_entries(Eigen::Index rows, Eigen::Index cols, std::span<const Entry> e) {
    JetMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m.set(i, j, e[i * cols + j]);
    return m;
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  bool has(unsigned mask) const { return c_[mask].size() != 0; }
  const Dense& part(unsigned mask) const { return c_[mask]; }
  const Dense& value() const { return c_[0]; }
  Dense& mutable_part(unsigned mask) {
    if (!has(mask)) c_[mask] = Dense::Zero(rows_, cols_);
    return c_[mask];
  }
  void set_part(unsigned mask, Dense d) { c_[mask] = std::move(d); }

  unsigned support() const {
    unsigned s = 0;
    for (unsigned m = 1; m < kJetSize; ++m)
      if (has(m)) s |= m;
    return s;
  }

  Entry operator()(Eigen::Index i, Eigen::Index j) const {
    Entry e;
    for (unsigned m = 0; m < kJetSize; ++m)
      if (has(m)) e[m] = c_[m](i, j);
    return e;
  }
  void set(Eigen::Index i, Eigen::Index j, const Entry& e) {
    for (unsigned m = 0; m < kJetSize; ++m)
      if (e[m] != S{}) mutable_part(m)(i, j) = e[m];
      else if (has(m)) c_[m](i, j) = S{};
  }

  /// Row-major entries.
  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(static_cast<std::size_t>(rows_ * cols_));
    for (Eigen::Index i = 0; i < rows_; ++i)
      for (Eigen::Index j = 0; j < cols_; ++j) out.push_back((*this)(i, j));
    return out;
  }

  JetMatrix& operator+=(const JetMatrix& o) {
    for (unsigned m = 0; m < kJetSize; ++m)
      if (o.has(m)) mutable_part(m) += o.c_[m];
    return *this;
  }
  JetMatrix& operator-=(const JetMatrix& o) {
    for (unsigned m = 0; m < kJetSize; ++m)
      if (o.has(m)) mutable_part(m) -= o.c_[m];
    return *this;
  }
  JetMatrix& operator*=(const S& s) {
    for (auto& p : c_)
      if (p.size()) p *= s;
    return *this;
  }
  friend JetMatrix operator+(JetMatrix a, const JetMatrix& b) { return a += b; }
  friend JetMatrix operator-(JetMatrix a, const JetMatrix& b) { return a -= b; }
  friend JetMatrix operator*(JetMatrix a, const S& s) { return a *= s; }
  friend JetMatrix operator*(const S& s, JetMatrix a) { return a *= s; }

  friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
    JetMatrix r(a.rows_, b.cols_);
    for (unsigned i = 0; i < kJetSize; ++i) {
      if (!a.has(i)) continue;
      for (unsigned j = 0; j < kJetSize; ++j)
        if ((i & j) == 0 && b.has(j)) r.mutable_part(i | j).noalias() += a.c_[i] * b.c_[j];
    }
    return r;
  }

  JetMatrix adjoint() const { return map([](const Dense& d) -> Dense { return d.adjoint(); }); }
  JetMatrix transpose() const { return map([](const Dense& d) -> Dense { return d.transpose(); }); }
  JetMatrix conjugate() const { return map([](const Dense& d) -> Dense { return d.conjugate(); }); }

  Entry trace() const {
    Entry t;
    for (unsigned m = 0; m < kJetSize; ++m)
      if (has(m)) t[m] = c_[m].trace();
    return t;
  }

  /// Inverse via the value's LU factorization and the nilpotent recursion
  /// X[S] = -A0^{-1} sum_{T subset S, T != 0} A[T] X[S \ T].
  JetMatrix inverse() const {
    if (rows_ != cols_) throw Error("JetMatrix::inverse: matrix is not square");
    const double rc = inverse_condition(c_[0]);
    if (!(rc > kMinRcond))
      throw LinearSolveError("singular matrix (condition number " +
                                 std::to_string(rc > 0 ? 1.0 / rc : INFINITY) + ")",
                             rc > 0 ? 1.0 / rc : INFINITY);
    const Eigen::PartialPivLU<Dense> lu(c_[0]);
    JetMatrix x(lu.inverse());
    const unsigned sup = support();
    if (sup == 0) return x;
    for (unsigned s = 1; s < kJetSize; ++s) {
      if ((s & ~sup) != 0) continue;
      Dense acc = Dense::Zero(rows_, cols_);
      bool any = false;
      for (unsigned t = s; t != 0; t = (t - 1) & s) {
        if (!has(t) || !x.has(s & ~t)) continue;
        acc.noalias() += c_[t] * x.c_[s & ~t];
        any = true;
      }
      if (any) x.c_[s] = -lu.solve(acc);
    }
    return x;
  }

  /// Kronecker product a (x) b.
  friend JetMatrix kron(const JetMatrix& a, const JetMatrix& b) {
    JetMatrix r(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (unsigned i = 0; i < kJetSize; ++i) {
      if (!a.has(i)) continue;
      for (unsigned j = 0; j < kJetSize; ++j) {
        if ((i & j) != 0 || !b.has(j)) continue;
        Dense& out = r.mutable_part(i | j);
        const Dense& x = a.c_[i];
        const Dense& y = b.c_[j];
        for (Eigen::Index p = 0; p < x.rows(); ++p)
          for (Eigen::Index q = 0; q < x.cols(); ++q)
            out.block(p * y.rows(), q * y.cols(), y.rows(), y.cols()) += x(p, q) * y;
      }
    }
    return r;
  }

 private:
  template <class Fn>
  JetMatrix map(Fn&& fn) const {
    JetMatrix r;
    r.rows_ = rows_;
    r.cols_ = cols_;
    for (unsigned m = 0; m < kJetSize; ++m)
      if (has(m)) r.c_[m] = fn(c_[m]);
    if (!r.has(0)) r.c_[0] = fn(Dense::Zero(rows_, cols_));
    r.rows_ = r.c_[0].rows();
    r.cols_ = r.c_[0].cols();
    return r;
  }

  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::array<Dense, kJetSize> c_{};
};

using RJetMatrix = JetMatrix<double>;
using CJetMatrix = JetMatrix<std::complex<double>>;

inline CJetMatrix to_complex(const RJetMatrix& m) {
  CJetMatrix r(m.rows(), m.cols());
  for (unsigned s = 0; s < kJetSize; ++s)
    if (m.has(s)) r.set_part(s, m.part(s).cast<std::complex<double>>());
  return r;
}

inline RJetMatrix real_part(const CJetMatrix& m) {
  RJetMatrix r(m.rows(), m.cols());
  for (unsigned s = 0; s < kJetSize; ++s)
    if (m.has(s)) r.set_part(s, m.part(s).real());
  return r;
}

}  // namespace biform
