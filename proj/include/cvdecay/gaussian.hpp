// Copyright 2026 The cvdecay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Two-mode Gaussian states in the quadrature ordering (q1, p1, q2, p2),
// hbar = 1, vacuum variance 1/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cvdecay {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kSymplecticTol = 1e-10;
inline constexpr double kDeterminantTol = 1e-9;
inline constexpr double kPhysicalTol = 1e-9;
inline constexpr double kSymmetryTol = 1e-12;

/// Single-mode form omega = [[0, 1], [-1, 0]].
inline Mat2 single_mode_form() {
  Mat2 w;
  w << 0.0, 1.0, -1.0, 0.0;
  return w;
}

/// Omega = omega (+) omega.
inline Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega.block<2, 2>(0, 0) = single_mode_form();
  omega.block<2, 2>(2, 2) = single_mode_form();
  return omega;
}

/// Real symmetric 4x4 covariance matrix. Only symmetry and finiteness are
/// enforced here; physicality is a property of GaussianState.
class CovMatrix {
 public:
  explicit CovMatrix(const Mat4& m) : m_(m) {
    if (!m.allFinite()) {
      throw std::invalid_argument("covariance matrix has non-finite entries");
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
      throw std::invalid_argument("covariance matrix is not symmetric");
    }
  }

  const Mat4& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Mat2 a() const { return m_.block<2, 2>(0, 0); }
  Mat2 b() const { return m_.block<2, 2>(2, 2); }
  Mat2 c() const { return m_.block<2, 2>(0, 2); }

 private:
  Mat4 m_;
};

/// Symplectic eigenvalues (nu_minus <= nu_plus).
struct SymplecticSpectrum {
  double lower;
  double upper;
};

/// Moduli of the eigenvalues of i*Omega*V. Each value appears twice; the
/// pairs are averaged. Throws if V is not positive definite.
inline SymplecticSpectrum symplectic_spectrum(const CovMatrix& v) {
  Eigen::LLT<Mat4> llt(v.matrix());
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("symplectic_spectrum: matrix is not positive definite");
  }
  // L^T (i Omega) L is Hermitian and similar to i Omega V.
  const Mat4 l = llt.matrixL();
  const Eigen::Matrix4cd h =
      std::complex<double>(0.0, 1.0) * (l.transpose() * symplectic_form() * l).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
  std::array<double, 4> mod{};
  for (int k = 0; k < 4; ++k) mod[k] = std::abs(solver.eigenvalues()[k]);
  std::sort(mod.begin(), mod.end());
  return {0.5 * (mod[0] + mod[1]), 0.5 * (mod[2] + mod[3])};
}

/// True iff the smallest symplectic eigenvalue is at least 1/2 - tol.
/// Non-positive-definite matrices are reported as unphysical.
inline bool check_uncertainty(const CovMatrix& v, double tol = kPhysicalTol) {
  Eigen::LLT<Mat4> llt(v.matrix());
  if (llt.info() != Eigen::Success) return false;
  return symplectic_spectrum(v).lower >= kVacuumVariance - tol;
}

/// Smallest eigenvalue of V: the minimum variance over all quadratures
/// reachable by passive operations.
inline double min_quadrature_variance(const CovMatrix& v) {
  Eigen::SelfAdjointEigenSolver<Mat4> solver(v.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

inline bool is_squeezed(const CovMatrix& v) {
  return min_quadrature_variance(v) < kVacuumVariance - 1e-12;
}

inline double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_symplectic(const Mat4& s, double tol = kSymplecticTol) {
  if (!s.allFinite()) return false;
  const Mat4 omega = symplectic_form();
  return max_abs(s * omega * s.transpose() - omega) <= tol;
}

class SymplecticMatrix {
 public:
  /// Validates S Omega S^T = Omega and det S = 1.
  static SymplecticMatrix from_matrix(const Mat4& s) {
    if (!is_symplectic(s)) {
      throw std::invalid_argument("matrix is not symplectic");
    }
    if (std::abs(s.determinant() - 1.0) > kDeterminantTol) {
      throw std::invalid_argument("symplectic matrix must have unit determinant");
    }
    return SymplecticMatrix(s);
  }

  static SymplecticMatrix identity() { return SymplecticMatrix(Mat4::Identity()); }

  const Mat4& matrix() const { return s_; }

  SymplecticMatrix operator*(const SymplecticMatrix& rhs) const {
    return SymplecticMatrix(s_ * rhs.s_);
  }

  SymplecticMatrix inverse() const {
    // S^{-1} = -Omega S^T Omega.
    const Mat4 omega = symplectic_form();
    return SymplecticMatrix(-omega * s_.transpose() * omega);
  }

  bool is_passive(double tol = 1e-9) const {
    return max_abs(s_ * s_.transpose() - Mat4::Identity()) <= tol;
  }

 private:
  explicit SymplecticMatrix(const Mat4& s) : s_(s) {}
  Mat4 s_;

  friend SymplecticMatrix single_mode_squeezer(double r, int mode);
  friend SymplecticMatrix phase_rotation(double phi, int mode);
  friend SymplecticMatrix beam_splitter(double theta);
};

namespace detail {
inline void require_mode(int mode) {
  if (mode != 1 && mode != 2) {
    throw std::invalid_argument("mode must be 1 or 2, got " + std::to_string(mode));
  }
}
}  // namespace detail

/// S(r) = diag(e^{-r}, e^{r}) on `mode`, identity on the other.
inline SymplecticMatrix single_mode_squeezer(double r, int mode) {
  if (!std::isfinite(r)) throw std::invalid_argument("squeezing parameter must be finite");
  detail::require_mode(mode);
  Mat4 s = Mat4::Identity();
  const int o = 2 * (mode - 1);
  s(o, o) = std::exp(-r);
  s(o + 1, o + 1) = std::exp(r);
  return SymplecticMatrix(s);
}

/// Phase-space rotation by `phi` on one mode (a passive element).
inline SymplecticMatrix phase_rotation(double phi, int mode) {
  if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
  detail::require_mode(mode);
  Mat4 s = Mat4::Identity();
  const int o = 2 * (mode - 1);
  s(o, o) = std::cos(phi);
  s(o, o + 1) = std::sin(phi);
  s(o + 1, o) = -std::sin(phi);
  s(o + 1, o + 1) = std::cos(phi);
  return SymplecticMatrix(s);
}

/// B(theta) = [[cos I, sin I], [-sin I, cos I]]; theta = pi/4 is balanced.
inline SymplecticMatrix beam_splitter(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("beam splitter angle must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat4 b = Mat4::Zero();
  b.block<2, 2>(0, 0) = c * Mat2::Identity();
  b.block<2, 2>(0, 2) = s * Mat2::Identity();
  b.block<2, 2>(2, 0) = -s * Mat2::Identity();
  b.block<2, 2>(2, 2) = c * Mat2::Identity();
  return SymplecticMatrix(b);
}

inline SymplecticMatrix balanced_beam_splitter() { return beam_splitter(std::numbers::pi / 4.0); }

/// Zero-mean-capable two-mode Gaussian state. The covariance must satisfy the
/// uncertainty relation.
class GaussianState {
 public:
  explicit GaussianState(const CovMatrix& cov, const Vec4& mean = Vec4::Zero())
      : cov_(cov), mean_(mean) {
    if (!mean.allFinite()) throw std::invalid_argument("mean vector has non-finite entries");
    if (!check_uncertainty(cov_)) {
      throw std::domain_error("covariance matrix violates the uncertainty relation");
    }
  }

  const CovMatrix& cov() const { return cov_; }
  const Vec4& mean() const { return mean_; }

 private:
  CovMatrix cov_;
  Vec4 mean_;
};

inline GaussianState vacuum_state() {
  return GaussianState(CovMatrix(kVacuumVariance * Mat4::Identity()));
}

inline Mat4 symmetrized(const Mat4& m) { return 0.5 * (m + m.transpose()); }

/// mean -> S mean, V -> S V S^T.
inline GaussianState apply_symplectic(const SymplecticMatrix& s, const GaussianState& st) {
  const Mat4& sm = s.matrix();
  return GaussianState(CovMatrix(symmetrized(sm * st.cov().matrix() * sm.transpose())),
                       sm * st.mean());
}

/// Wigner function at `point`. Throws for a singular covariance.
inline double wigner_value(const GaussianState& st, const Vec4& point) {
  const Mat4& v = st.cov().matrix();
  const double det = v.determinant();
  if (!(det > 1e-300)) throw std::domain_error("wigner_value: singular covariance matrix");
  const Vec4 d = point - st.mean();
  const double quad = d.dot(v.ldlt().solve(d));
  const double two_pi = 2.0 * std::numbers::pi;
  return std::exp(-0.5 * quad) / (two_pi * two_pi * std::sqrt(det));
}

}  // namespace cvdecay
