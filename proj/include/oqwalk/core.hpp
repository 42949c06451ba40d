/**
 * This code is part of oqwalk.
 *
 * (C) Copyright oqwalk contributors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#ifndef _oqwalk_core_hpp_
#define _oqwalk_core_hpp_

#include <Eigen/Dense>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "oqwalk/error.hpp"

namespace oqwalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Default absolute tolerance for matrix comparisons in tests and checks.
inline constexpr double kDefaultTol = 1e-10;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline double max_abs(const ComplexMatrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b,
                         double tol = kDefaultTol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    return false;
  return max_abs(a - b) <= tol;
}

inline bool all_finite(const ComplexMatrix &m) {
  return m.allFinite();
}

inline void ensure_finite(const ComplexMatrix &m, const char *what) {
  if (!all_finite(m))
    throw NumericalFailure(std::string(what) + ": non-finite entries");
}

// Kronecker product with the standard (i,j)-block layout:
// the (i,j) block of a (x) b is a(i,j) * b.
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Row-stacking vectorization: [[a,b],[c,d]] -> (a, b, c, d)^T.
// The row-major convention is normative throughout this library so that
// conj_rep(B) = B (x) conj(B) acts on vec'd matrices directly.
inline ComplexVector vec(const ComplexMatrix &m) {
  ComplexVector v(m.rows() * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      v(r * m.cols() + c) = m(r, c);
  return v;
}

inline ComplexMatrix unvec(const ComplexVector &v, Eigen::Index rows,
                           Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw ConfigError("unvec: vector length " + std::to_string(v.size()) +
                      " does not match " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = v(r * cols + c);
  return m;
}

// Conjugation map X -> B X B*.
inline ComplexMatrix conjugate_by(const ComplexMatrix &b,
                                  const ComplexMatrix &x) {
  if (b.cols() != x.rows() || x.cols() != b.cols())
    throw ConfigError("conjugate_by: shape mismatch");
  return b * x * b.adjoint();
}

// Matrix representation of the conjugation map: the order-N^2 matrix
// [B] = B (x) conj(B), satisfying [B] vec(X) = vec(B X B*).
inline ComplexMatrix conj_rep(const ComplexMatrix &b) {
  if (b.rows() != b.cols())
    throw ConfigError("conj_rep: matrix must be square");
  return kron(b, b.conjugate());
}

struct KrausCheck {
  bool ok = false;
  double residual = 0.0;
};

// Checks sum_i M_i* M_i = I, the trace-preservation (probability) rule.
inline KrausCheck
check_kraus_normalization(const std::vector<ComplexMatrix> &mats,
                          double tol = kDefaultTol) {
  if (mats.empty())
    throw ConfigError("check_kraus_normalization: empty Kraus list");
  const Eigen::Index n = mats.front().rows();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto &m : mats) {
    if (m.rows() != n || m.cols() != n)
      throw ConfigError("check_kraus_normalization: mixed matrix orders");
    acc += m.adjoint() * m;
  }
  KrausCheck out;
  out.residual = max_abs(acc - ComplexMatrix::Identity(n, n));
  out.ok = out.residual <= tol;
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("hermitian eigendecomposition failed");
  std::vector<double> evs(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return evs;
}

inline double min_hermitian_eigenvalue(const ComplexMatrix &m) {
  // Hermitize first; callers check the anti-Hermitian part separately.
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  auto evs = hermitian_eigenvalues(h);
  double lo = evs.empty() ? 0.0 : evs.front();
  for (double e : evs)
    lo = std::min(lo, e);
  return lo;
}

// Bloch coordinates for an order-2 density: rho = (I + x sx + y sy + z sz)/2.
struct BlochPoint {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Hermitian, positive semidefinite, unit-trace matrix: the internal degree
// of freedom carried by the walker. Construction validates all three
// properties; evolved site blocks elsewhere are deliberately unnormalized
// and use plain ComplexMatrix.
class DensityMatrix {
public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-12;
  static constexpr double kTraceTol = 1e-12;

  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
      throw ConfigError("DensityMatrix: matrix must be square");
    ensure_finite(mat_, "DensityMatrix");
    if (max_abs(mat_ - mat_.adjoint()) > kHermitianTol)
      throw ConfigError("DensityMatrix: not Hermitian within 1e-12");
    if (std::abs(mat_.trace().real() - 1.0) > kTraceTol ||
        std::abs(mat_.trace().imag()) > kTraceTol)
      throw ConfigError("DensityMatrix: trace must be 1 within 1e-12");
    if (min_hermitian_eigenvalue(mat_) < kEigenvalueFloor)
      throw ConfigError("DensityMatrix: negative eigenvalue below -1e-12");
  }

  static DensityMatrix from_bloch(const BlochPoint &p) {
    if (p.norm() > 1.0 + 1e-12)
      throw ConfigError("BlochPoint: x^2+y^2+z^2 must be <= 1");
    ComplexMatrix m(2, 2);
    m(0, 0) = Complex(0.5 * (1.0 + p.z), 0.0);
    m(0, 1) = Complex(0.5 * p.x, -0.5 * p.y);
    m(1, 0) = Complex(0.5 * p.x, 0.5 * p.y);
    m(1, 1) = Complex(0.5 * (1.0 - p.z), 0.0);
    return DensityMatrix(m);
  }

  const ComplexMatrix &mat() const { return mat_; }
  Eigen::Index order() const { return mat_.rows(); }

  // Re(rho_12); the quantity the gambler's-ruin statistics are affine in.
  double re_offdiag() const {
    if (order() != 2)
      throw ConfigError("re_offdiag: density must have order 2");
    return mat_(0, 1).real();
  }

private:
  ComplexMatrix mat_;
};

inline DensityMatrix maximally_mixed(Eigen::Index n) {
  return DensityMatrix(ComplexMatrix::Identity(n, n) / double(n));
}

// |1><1| in the computational basis (order 2).
inline DensityMatrix density_e11() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return DensityMatrix(m);
}

// The rank-one projector (1/2) [[1,1],[1,1]], i.e. Re(rho_12) = 1/2.
inline DensityMatrix density_plus() {
  ComplexMatrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return DensityMatrix(m);
}

// --- JSON serialization: {"rows":N, "cols":M, "re":[...], "im":[...]} ---
// Row-major entry order, matching vec().

template <typename Json> Json matrix_to_json(const ComplexMatrix &m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = re;
  j["im"] = im;
  return j;
}

template <typename Json> ComplexMatrix matrix_from_json(const Json &j) {
  if (!j.is_object())
    throw ConfigError("matrix: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string &k = it.key();
    if (k != "rows" && k != "cols" && k != "re" && k != "im")
      throw ConfigError("matrix: unknown key '" + k + "'");
  }
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("re"))
    throw ConfigError("matrix: required keys are rows, cols, re[, im]");
  const Eigen::Index rows = j["rows"].template get<Eigen::Index>();
  const Eigen::Index cols = j["cols"].template get<Eigen::Index>();
  std::vector<double> re = j["re"].template get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im"))
    im = j["im"].template get<std::vector<double>>();
  if (rows < 0 || cols < 0 ||
      re.size() != static_cast<std::size_t>(rows * cols) ||
      im.size() != re.size())
    throw ConfigError("matrix: entry count does not match rows*cols");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      auto k = static_cast<std::size_t>(r * cols + c);
      m(r, c) = Complex(re[k], im[k]);
    }
  return m;
}

} // namespace oqwalk

#endif
