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

// Brute-force reference: two-mode density matrices in a truncated Fock basis,
// integrated under the local and global thermal master equations with RK4.
// Nothing here uses the Gaussian covariance maps.

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "cvdecay/channels.hpp"
#include "cvdecay/gaussian.hpp"

namespace cvdecay::fock {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr int kMinCutoff = 8;
inline constexpr int kMaxCutoff = 64;
inline constexpr double kTailBound = 1e-8;
inline constexpr double kTraceDrift = 1e-8;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kNegativeEigenTol = 1e-8;
inline constexpr double kMaxRateStep = 0.01;

// ---------------------------------------------------------------------------
// Operators on the two-mode space, basis |n1, n2> at index n1 * d + n2.

/// Annihilation operator of `mode` (1 or 2) on the d^2-dimensional space.
inline SpMat annihilation(int mode, int d) {
  if (mode != 1 && mode != 2) throw std::invalid_argument("mode must be 1 or 2");
  SpMat a(d * d, d * d);
  std::vector<Eigen::Triplet<Complex>> t;
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      const int col = n1 * d + n2;
      if (mode == 1 && n1 > 0) t.emplace_back((n1 - 1) * d + n2, col, std::sqrt(static_cast<double>(n1)));
      if (mode == 2 && n2 > 0) t.emplace_back(n1 * d + n2 - 1, col, std::sqrt(static_cast<double>(n2)));
    }
  }
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

inline SpMat adjoint(const SpMat& m) { return SpMat(m.adjoint()); }

// ---------------------------------------------------------------------------

/// Two-mode density operator with per-mode cutoff d (levels 0..d-1).
class TruncatedDensityMatrix {
 public:
  TruncatedDensityMatrix(int cutoff, CMat rho) : cutoff_(cutoff), rho_(std::move(rho)) {
    if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
    if (rho_.rows() != cutoff * cutoff || rho_.cols() != cutoff * cutoff) {
      throw std::invalid_argument("density matrix size does not match cutoff");
    }
  }

  static TruncatedDensityMatrix from_ket(int cutoff, const CVec& psi) {
    return TruncatedDensityMatrix(cutoff, psi * psi.adjoint());
  }

  static TruncatedDensityMatrix vacuum(int cutoff) {
    CVec psi = CVec::Zero(cutoff * cutoff);
    psi(0) = 1.0;
    return from_ket(cutoff, psi);
  }

  /// Product of truncated thermal states with occupations n1, n2,
  /// renormalized on the truncated space.
  static TruncatedDensityMatrix thermal(int cutoff, double n1, double n2) {
    auto populations = [cutoff](double n) {
      std::vector<double> p(cutoff);
      double sum = 0.0;
      for (int k = 0; k < cutoff; ++k) {
        p[k] = (n == 0.0) ? (k == 0 ? 1.0 : 0.0) : std::pow(n / (n + 1.0), k) / (n + 1.0);
        sum += p[k];
      }
      for (double& x : p) x /= sum;
      return p;
    };
    const auto p1 = populations(n1);
    const auto p2 = populations(n2);
    CMat rho = CMat::Zero(cutoff * cutoff, cutoff * cutoff);
    for (int a = 0; a < cutoff; ++a) {
      for (int b = 0; b < cutoff; ++b) rho(a * cutoff + b, a * cutoff + b) = p1[a] * p2[b];
    }
    return TruncatedDensityMatrix(cutoff, std::move(rho));
  }

  int cutoff() const { return cutoff_; }
  int dim() const { return cutoff_ * cutoff_; }
  int index(int n1, int n2) const { return n1 * cutoff_ + n2; }
  const CMat& matrix() const { return rho_; }

  Complex trace() const { return rho_.trace(); }

  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

  /// Population on the top level of either mode.
  double tail_mass() const {
    const int top = cutoff_ - 1;
    double mass = 0.0;
    for (int k = 0; k < cutoff_; ++k) {
      mass += rho_(index(top, k), index(top, k)).real();
      if (k != top) mass += rho_(index(k, top), index(k, top)).real();
    }
    return mass;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMat> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  double vacuum_population() const { return rho_(0, 0).real(); }

 private:
  int cutoff_;
  CMat rho_;
};

// ---------------------------------------------------------------------------
// State preparation.

enum class Preparation { SeparableSqueezed, TMSV };

namespace detail {

/// exp(r/2 (a^2 - a^dag^2)) |0> in an extended cutoff.
inline Eigen::VectorXd squeezed_vacuum_ket(double r, int extended) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(extended, extended);
  for (int n = 1; n < extended; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd generator = 0.5 * r * (a2 - a2.transpose());
  const Eigen::MatrixXd u = generator.exp();
  return u.col(0);
}

inline double tmsv_tail(double r, int cutoff) {
  return std::pow(std::tanh(std::abs(r)), 2.0 * (cutoff - 1));
}

inline double separable_tail(const Eigen::VectorXd& k1, const Eigen::VectorXd& k2, int cutoff) {
  auto above = [cutoff](const Eigen::VectorXd& k) {
    double s = 0.0;
    for (int n = cutoff - 1; n < k.size(); ++n) s += k(n) * k(n);
    return s;
  };
  const double t1 = above(k1);
  const double t2 = above(k2);
  return t1 + t2 - t1 * t2;
}

inline int extended_cutoff(int cutoff) { return 2 * cutoff + 20; }

inline double ideal_tail(Preparation prep, double r, int cutoff) {
  if (prep == Preparation::TMSV) return tmsv_tail(r, cutoff);
  const int ext = extended_cutoff(cutoff);
  return separable_tail(squeezed_vacuum_ket(r, ext), squeezed_vacuum_ket(-r, ext), cutoff);
}

}  // namespace detail

/// Smallest cutoff >= kMinCutoff whose ideal tail mass is below `bound`.
inline int required_cutoff(Preparation prep, double r, double bound = kTailBound) {
  for (int d = kMinCutoff; d <= kMaxCutoff; ++d) {
    if (detail::ideal_tail(prep, r, d) < bound) return d;
  }
  return kMaxCutoff + 1;
}

/// SeparableSqueezed: squeezed vacuum (r) on mode 1 times squeezed vacuum
/// (-r) on mode 2. TMSV: sum_n tanh(r)^n / cosh(r) |n, n>.
inline TruncatedDensityMatrix build_state(Preparation prep, double r, int cutoff,
                                          double tail_bound = kTailBound) {
  if (!std::isfinite(r)) throw std::invalid_argument("squeezing parameter must be finite");
  if (cutoff < kMinCutoff || cutoff > kMaxCutoff) {
    throw std::invalid_argument("cutoff must lie in [8, 64], got " + std::to_string(cutoff));
  }
  const double tail = detail::ideal_tail(prep, r, cutoff);
  if (tail >= tail_bound) {
    std::ostringstream msg;
    msg << "tail mass " << tail << " at cutoff " << cutoff << " exceeds " << tail_bound
        << "; need cutoff >= " << required_cutoff(prep, r, tail_bound);
    throw std::invalid_argument(msg.str());
  }
  CVec psi = CVec::Zero(cutoff * cutoff);
  if (prep == Preparation::TMSV) {
    const double t = std::tanh(r);
    double coeff = 1.0 / std::cosh(r);
    for (int n = 0; n < cutoff; ++n) {
      psi(n * cutoff + n) = coeff;
      coeff *= t;
    }
  } else {
    const int ext = detail::extended_cutoff(cutoff);
    const Eigen::VectorXd k1 = detail::squeezed_vacuum_ket(r, ext);
    const Eigen::VectorXd k2 = detail::squeezed_vacuum_ket(-r, ext);
    for (int n1 = 0; n1 < cutoff; ++n1) {
      for (int n2 = 0; n2 < cutoff; ++n2) psi(n1 * cutoff + n2) = k1(n1) * k2(n2);
    }
  }
  psi /= psi.norm();
  return TruncatedDensityMatrix::from_ket(cutoff, psi);
}

// ---------------------------------------------------------------------------
// Master equations.

/// Operator with entries only on one diagonal: M[j, j + offset] = val[j]
/// (val[j] = 0 where j + offset leaves the space). Ladder operators and their
/// products have this shape in the |n1, n2> ordering.
struct ShiftOp {
  int offset = 0;
  Eigen::VectorXd val;

  /// a_mode (raise = false) or a_mode^dag (raise = true) at cutoff d.
  static ShiftOp ladder(int mode, bool raise, int d) {
    if (mode != 1 && mode != 2) throw std::invalid_argument("mode must be 1 or 2");
    const int step = mode == 1 ? d : 1;
    ShiftOp m{raise ? -step : step, Eigen::VectorXd::Zero(d * d)};
    for (int n1 = 0; n1 < d; ++n1) {
      for (int n2 = 0; n2 < d; ++n2) {
        const int n = mode == 1 ? n1 : n2;
        if (!raise && n + 1 < d) m.val(n1 * d + n2) = std::sqrt(static_cast<double>(n + 1));
        if (raise && n > 0) m.val(n1 * d + n2) = std::sqrt(static_cast<double>(n));
      }
    }
    return m;
  }

  int size() const { return static_cast<int>(val.size()); }
  /// Rows j with j + offset inside the space.
  int lo() const { return std::max(0, -offset); }
  int hi() const { return std::min(size(), size() - offset); }

  ShiftOp operator*(const ShiftOp& rhs) const {
    ShiftOp out{offset + rhs.offset, Eigen::VectorXd::Zero(size())};
    for (int j = lo(); j < hi(); ++j) {
      const int k = j + offset;
      if (k + rhs.offset >= 0 && k + rhs.offset < size()) out.val(j) = val(j) * rhs.val(k);
    }
    return out;
  }

  ShiftOp adjoint() const {
    ShiftOp out{-offset, Eigen::VectorXd::Zero(size())};
    for (int j = lo(); j < hi(); ++j) out.val(j + offset) = val(j);
    return out;
  }
};

/// d rho / dt = sum_k c_k L_k rho R_k^dag - (H rho + rho H) / 2 with
/// H = sum_k c_k R_k^dag L_k. Applied matrix-free: every term shifts rows
/// and columns of rho.
class LindbladGenerator {
 public:
  enum class Kind { LocalBaths, GlobalBath };

  /// Independent thermal baths on each mode:
  ///   sum_i gamma_i/2 { (N_i+1) D[a_i] + N_i D[a_i^dag] }.
  static LindbladGenerator local(const LocalBathSpec& spec, int cutoff) {
    spec.validate();
    LindbladGenerator g(Kind::LocalBaths, cutoff);
    const double gammas[2] = {spec.gamma1, spec.gamma2};
    const double nbars[2] = {spec.nbar1, spec.nbar2};
    for (int i = 0; i < 2; ++i) {
      g.add_term(g.a_[i], gammas[i] * (nbars[i] + 1.0), g.a_[i]);
      g.add_term(g.a_dag_[i], gammas[i] * nbars[i], g.a_dag_[i]);
      g.rate_scale_ = std::max(g.rate_scale_, gammas[i] * (2.0 * nbars[i] + 1.0));
    }
    return g;
  }

  /// One common bath, including the cross terms between the modes:
  ///   gamma/2 sum_{i,j} { (N+1)(2 a_i rho a_j^dag - a_j^dag a_i rho - rho a_j^dag a_i)
  ///                       + N (2 a_j^dag rho a_i - a_i a_j^dag rho - rho a_i a_j^dag) }.
  static LindbladGenerator global(const GlobalBathSpec& spec, int cutoff) {
    spec.validate();
    LindbladGenerator g(Kind::GlobalBath, cutoff);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        g.add_term(g.a_[i], spec.gamma * (spec.nbar + 1.0), g.a_[j]);
        g.add_term(g.a_dag_[j], spec.gamma * spec.nbar, g.a_dag_[i]);
      }
    }
    g.rate_scale_ = 2.0 * spec.gamma * (2.0 * spec.nbar + 1.0);
    return g;
  }

  Kind kind() const { return kind_; }
  int cutoff() const { return cutoff_; }
  /// Largest gamma (2N + 1) seen by any collective mode; bounds the step.
  double rate_scale() const { return rate_scale_; }

  CMat apply(const CMat& rho) const {
    const int n = cutoff_ * cutoff_;
    if (rho.rows() != n || rho.cols() != n) {
      throw std::invalid_argument("lindblad_apply: dimension mismatch");
    }
    CMat out = CMat::Zero(n, n);
    // Column by column: every term writes out.col(m) from a few nearby
    // columns of rho.
    for (int m = 0; m < n; ++m) {
      auto dst = out.col(m).array();
      // c L rho R^dag: column m picks rho.col(m + offR) scaled by vR[m].
      for (const auto& t : jumps_) {
        const int src = m + t.right.offset;
        if (src < 0 || src >= n || t.right.val(m) == 0.0) continue;
        const int lo = t.left.lo();
        const int len = t.left.hi() - lo;
        dst.segment(lo, len) += (t.c * t.right.val(m)) * t.left.val.segment(lo, len).array() *
                                rho.col(src).segment(lo + t.left.offset, len).array();
      }
      // -H rho / 2.
      for (const auto& h : h_left_) {
        const int lo = h.lo();
        const int len = h.hi() - lo;
        dst.segment(lo, len) -=
            0.5 * h.val.segment(lo, len).array() * rho.col(m).segment(lo + h.offset, len).array();
      }
      // -rho H / 2 with H = sum_k c_k (L_k^dag R_k)^dag.
      for (const auto& h : h_right_) {
        const int src = m + h.offset;
        if (src < 0 || src >= n || h.val(m) == 0.0) continue;
        dst -= (0.5 * h.val(m)) * rho.col(src).array();
      }
    }
    return out;
  }

 private:
  struct Jump {
    double c;
    ShiftOp left;
    ShiftOp right;
  };

  LindbladGenerator(Kind kind, int cutoff) : kind_(kind), cutoff_(cutoff) {
    if (cutoff < 1 || cutoff > kMaxCutoff) throw std::invalid_argument("invalid cutoff");
    for (int i = 0; i < 2; ++i) {
      a_[i] = ShiftOp::ladder(i + 1, false, cutoff);
      a_dag_[i] = ShiftOp::ladder(i + 1, true, cutoff);
    }
  }

  /// Adds c * (L rho R^dag - {R^dag L, rho} / 2). A printed term
  /// gamma/2 * k * (2 L rho R^dag - ...) enters with c = gamma * k.
  void add_term(const ShiftOp& l, double c, const ShiftOp& r) {
    if (c == 0.0) return;
    jumps_.push_back({c, l, r});
    accumulate(h_left_, r.adjoint() * l, c);
    accumulate(h_right_, l.adjoint() * r, c);
  }

  /// Adds c * m, merging with an entry on the same diagonal.
  static void accumulate(std::vector<ShiftOp>& ops, const ShiftOp& m, double c) {
    for (auto& op : ops) {
      if (op.offset != m.offset) continue;
      op.val += c * m.val;
      return;
    }
    ops.push_back({m.offset, c * m.val});
  }

  Kind kind_;
  int cutoff_;
  double rate_scale_ = 0.0;
  ShiftOp a_[2];
  ShiftOp a_dag_[2];
  std::vector<Jump> jumps_;
  std::vector<ShiftOp> h_left_;
  std::vector<ShiftOp> h_right_;
};

inline CMat lindblad_apply(const LindbladGenerator& gen, const TruncatedDensityMatrix& rho) {
  if (gen.cutoff() != rho.cutoff()) throw std::invalid_argument("lindblad_apply: cutoff mismatch");
  return gen.apply(rho.matrix());
}

/// Fixed-step RK4 over [0, total_t]. The step is shrunk to divide total_t
/// evenly. Trace is renormalized when drift <= 1e-8; larger drift, loss of
/// Hermiticity or negative eigenvalues below -1e-8 throw.
inline TruncatedDensityMatrix integrate(const TruncatedDensityMatrix& rho0,
                                        const LindbladGenerator& gen, double total_t, double dt) {
  if (!std::isfinite(total_t) || total_t < 0.0) throw std::invalid_argument("total_t must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (gen.cutoff() != rho0.cutoff()) throw std::invalid_argument("integrate: cutoff mismatch");
  if (dt * gen.rate_scale() > kMaxRateStep) {
    std::ostringstream msg;
    msg << "step dt=" << dt << " too large: dt * gamma(2N+1) = " << dt * gen.rate_scale()
        << " > " << kMaxRateStep;
    throw std::invalid_argument(msg.str());
  }
  if (total_t == 0.0) return rho0;

  const long steps = static_cast<long>(std::ceil(total_t / dt - 1e-12));
  const double h = total_t / static_cast<double>(steps);
  CMat rho = rho0.matrix();
  CMat k1, k2, k3, k4;
  for (long s = 0; s < steps; ++s) {
    k1 = gen.apply(rho);
    k2 = gen.apply(rho + 0.5 * h * k1);
    k3 = gen.apply(rho + 0.5 * h * k2);
    k4 = gen.apply(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const Complex tr = rho.trace();
  const double drift = std::abs(tr - Complex(1.0));
  if (drift > kTraceDrift) {
    std::ostringstream msg;
    msg << "trace drift " << drift << " after " << steps << " steps of " << h
        << "; reduce the step size";
    throw std::runtime_error(msg.str());
  }
  rho /= tr.real();
  TruncatedDensityMatrix out(rho0.cutoff(), std::move(rho));
  if (out.hermiticity_error() > kHermitianTol) {
    throw std::runtime_error("integration lost hermiticity; reduce the step size");
  }
  const double min_eig = out.min_eigenvalue();
  if (min_eig < -kNegativeEigenTol) {
    std::ostringstream msg;
    msg << "negative eigenvalue " << min_eig << " after integration; reduce the step size";
    throw std::runtime_error(msg.str());
  }
  return out;
}

/// Largest step allowed for `gen`.
inline double max_step(const LindbladGenerator& gen) {
  return gen.rate_scale() > 0.0 ? kMaxRateStep / gen.rate_scale() : 1.0;
}

// ---------------------------------------------------------------------------
// Observables.

struct FockMoments {
  CovMatrix cov;
  Vec4 mean;
  double tail_mass;
  bool tail_warning;  // moments untrustworthy when set
};

/// Means and symmetrized second moments of (q1, p1, q2, p2) with
/// q = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2).
inline FockMoments covariance_from_density(const TruncatedDensityMatrix& rho,
                                           double tail_bound = kTailBound) {
  const int d = rho.cutoff();
  const Complex i_unit(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<SpMat> x;
  for (int mode = 1; mode <= 2; ++mode) {
    const SpMat a = annihilation(mode, d);
    const SpMat ad = adjoint(a);
    x.emplace_back(SpMat(inv_sqrt2 * (a + ad)));
    x.emplace_back(SpMat((-i_unit * inv_sqrt2) * (a - ad)));
  }
  const CMat& m = rho.matrix();
  // Tr(rho M) for sparse M.
  auto expect = [&m](const SpMat& op) {
    Complex s = 0.0;
    for (int k = 0; k < op.outerSize(); ++k) {
      for (SpMat::InnerIterator it(op, k); it; ++it) s += m(it.col(), it.row()) * it.value();
    }
    return s;
  };
  Vec4 mean;
  for (int k = 0; k < 4; ++k) mean(k) = expect(x[k]).real();
  Mat4 cov;
  for (int k = 0; k < 4; ++k) {
    for (int l = k; l < 4; ++l) {
      const SpMat kl = x[k] * x[l];
      const SpMat lk = x[l] * x[k];
      const double sym = 0.5 * (expect(kl) + expect(lk)).real();
      cov(k, l) = cov(l, k) = sym - mean(k) * mean(l);
    }
  }
  const double tail = rho.tail_mass();
  return {CovMatrix(cov), mean, tail, tail > tail_bound};
}

/// Partial transpose over mode 2.
inline CMat partial_transpose(const TruncatedDensityMatrix& rho) {
  const int d = rho.cutoff();
  const CMat& m = rho.matrix();
  CMat pt(m.rows(), m.cols());
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      for (int m1 = 0; m1 < d; ++m1) {
        for (int m2 = 0; m2 < d; ++m2) pt(n1 * d + n2, m1 * d + m2) = m(n1 * d + m2, m1 * d + n2);
      }
    }
  }
  return pt;
}

/// E_N = log2(2 * negativity + 1) from the partial-transpose spectrum.
inline double negativity_from_density(const TruncatedDensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(partial_transpose(rho), Eigen::EigenvaluesOnly);
  double negativity = 0.0;
  for (int k = 0; k < solver.eigenvalues().size(); ++k) {
    const double ev = solver.eigenvalues()(k);
    if (ev < 0.0) negativity -= ev;
  }
  return std::log2(2.0 * negativity + 1.0);
}

}  // namespace cvdecay::fock
