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

// Closed-form covariance maps for local and global thermal baths, and the
// four squeeze / mix / dissipate pipelines built from them.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "cvdecay/gaussian.hpp"

namespace cvdecay {

/// Which reading of the local-bath covariance map to use.
///
///  * PaperLiteral: X = (1-tau)^{1/4}, Y = (N/2 + 1) tau.
///  * LindbladDerived: X = (1-tau)^{1/4}, Y = (2N+1)(1 - sqrt(1-tau)); the
///    map generated by the local master equation, fixed point (N + 1/2) I.
///  * ThresholdConsistent: X = (1-tau)^{1/4}, Y = (N/4 + 1) tau; the
///    tau-proportional noise whose TMSV separability time is 8(2+N)/(4+N)^2.
enum class ChannelVariant { PaperLiteral, LindbladDerived, ThresholdConsistent };

inline constexpr ChannelVariant kAllVariants[] = {
    ChannelVariant::PaperLiteral, ChannelVariant::LindbladDerived,
    ChannelVariant::ThresholdConsistent};

inline std::string_view to_string(ChannelVariant v) {
  switch (v) {
    case ChannelVariant::PaperLiteral: return "paper-literal";
    case ChannelVariant::LindbladDerived: return "lindblad-derived";
    case ChannelVariant::ThresholdConsistent: return "threshold-consistent";
  }
  return "unknown";
}

inline std::optional<ChannelVariant> parse_variant(std::string_view s) {
  for (ChannelVariant v : kAllVariants) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

enum class Scenario { LocalCase1, LocalCase2, GlobalCase1, GlobalCase2 };

inline constexpr Scenario kAllScenarios[] = {Scenario::LocalCase1, Scenario::LocalCase2,
                                             Scenario::GlobalCase1, Scenario::GlobalCase2};

inline std::string_view to_string(Scenario sc) {
  switch (sc) {
    case Scenario::LocalCase1: return "local-case1";
    case Scenario::LocalCase2: return "local-case2";
    case Scenario::GlobalCase1: return "global-case1";
    case Scenario::GlobalCase2: return "global-case2";
  }
  return "unknown";
}

inline std::optional<Scenario> parse_scenario(std::string_view s) {
  for (Scenario sc : kAllScenarios) {
    if (to_string(sc) == s) return sc;
  }
  return std::nullopt;
}

inline bool is_local(Scenario sc) {
  return sc == Scenario::LocalCase1 || sc == Scenario::LocalCase2;
}

/// Case 1 dissipates before the beam splitter, Case 2 after it.
inline bool mixes_before_bath(Scenario sc) {
  return sc == Scenario::LocalCase2 || sc == Scenario::GlobalCase2;
}

namespace detail {
inline void require_rate_and_occupation(double gamma, double nbar, const char* what) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw std::invalid_argument(std::string(what) + ": decay rate must be finite and >= 0");
  }
  if (!std::isfinite(nbar) || nbar < 0.0) {
    throw std::invalid_argument(std::string(what) + ": mean photon number must be finite and >= 0");
  }
}
}  // namespace detail

struct LocalBathSpec {
  double gamma1 = 1.0;
  double nbar1 = 0.0;
  double gamma2 = 1.0;
  double nbar2 = 0.0;

  static LocalBathSpec identical(double gamma, double nbar) { return {gamma, nbar, gamma, nbar}; }
  /// Only mode 1 couples to a bath (gamma2 = nbar2 = 0).
  static LocalBathSpec single(double gamma, double nbar) { return {gamma, nbar, 0.0, 0.0}; }

  void validate() const {
    detail::require_rate_and_occupation(gamma1, nbar1, "local bath 1");
    detail::require_rate_and_occupation(gamma2, nbar2, "local bath 2");
  }
};

struct GlobalBathSpec {
  double gamma = 1.0;
  double nbar = 0.0;

  void validate() const { detail::require_rate_and_occupation(gamma, nbar, "global bath"); }
};

using BathSpec = std::variant<LocalBathSpec, GlobalBathSpec>;

/// Dimensionless interaction time tau = 1 - exp(-2 gamma t), in [0, 1].
class TauTime {
 public:
  explicit TauTime(double tau) : tau_(tau) {
    if (!std::isfinite(tau) || tau < 0.0 || tau > 1.0) {
      throw std::invalid_argument("tau must lie in [0, 1], got " + std::to_string(tau));
    }
  }
  double value() const { return tau_; }

 private:
  double tau_;
};

inline TauTime time_to_tau(double gamma, double t) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (std::isnan(t) || t < 0.0) throw std::invalid_argument("time must be >= 0");
  if (std::isinf(t)) return TauTime(gamma > 0.0 ? 1.0 : 0.0);
  return TauTime(-std::expm1(-2.0 * gamma * t));
}

/// Inverse of time_to_tau; tau = 1 maps to +infinity.
inline double tau_to_time(double gamma, TauTime tau) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be > 0");
  if (tau.value() == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-tau.value()) / (2.0 * gamma);
}

namespace detail {

struct ModeChannel {
  double scale;  // X block
  double noise;  // (1/2) Y block
};

inline ModeChannel local_mode_channel(double tau, double nbar, ChannelVariant variant) {
  const double x = std::pow(1.0 - tau, 0.25);
  double y = 0.0;
  switch (variant) {
    case ChannelVariant::PaperLiteral: y = (nbar / 2.0 + 1.0) * tau; break;
    case ChannelVariant::LindbladDerived: y = (2.0 * nbar + 1.0) * (1.0 - std::sqrt(1.0 - tau)); break;
    case ChannelVariant::ThresholdConsistent: y = (nbar / 4.0 + 1.0) * tau; break;
  }
  return {x, 0.5 * y};
}

}  // namespace detail

/// V -> X V X^T + Y/2, mean -> X mean, with X and Y diagonal per mode.
inline GaussianState local_bath_map(const GaussianState& st, TauTime tau1, TauTime tau2,
                                    const LocalBathSpec& spec,
                                    ChannelVariant variant = ChannelVariant::PaperLiteral) {
  spec.validate();
  if (tau1.value() == 0.0 && tau2.value() == 0.0) return st;
  const auto m1 = detail::local_mode_channel(tau1.value(), spec.nbar1, variant);
  const auto m2 = detail::local_mode_channel(tau2.value(), spec.nbar2, variant);
  const Vec4 x(m1.scale, m1.scale, m2.scale, m2.scale);
  const Vec4 half_y(m1.noise, m1.noise, m2.noise, m2.noise);
  Mat4 v = x.asDiagonal() * st.cov().matrix() * x.asDiagonal();
  v += half_y.asDiagonal();
  return GaussianState(CovMatrix(symmetrized(v)), x.cwiseProduct(st.mean()));
}

/// Correlated (common-reservoir) dissipation. In the collective basis
/// obtained with B(pi/4) the centre-of-mass mode undergoes thermal loss
/// (variance scale 1 - tau, noise tau (N + 1/2)) and the relative mode is
/// untouched; the cross block is damped by sqrt(1 - tau).
inline GaussianState global_bath_map(const GaussianState& st, TauTime tau,
                                     const GlobalBathSpec& spec) {
  spec.validate();
  const double t = tau.value();
  if (t == 0.0) return st;
  const Mat4 b = balanced_beam_splitter().matrix();
  Mat4 vc = b * st.cov().matrix() * b.transpose();
  Vec4 mc = b * st.mean();

  const double keep = 1.0 - t;
  const double amp = std::sqrt(keep);
  vc.block<2, 2>(0, 0) = keep * vc.block<2, 2>(0, 0) + t * (spec.nbar + 0.5) * Mat2::Identity();
  vc.block<2, 2>(0, 2) *= amp;
  vc.block<2, 2>(2, 0) *= amp;
  mc.head<2>() *= amp;

  Mat4 v = b.transpose() * vc * b;
  return GaussianState(CovMatrix(symmetrized(v)), b.transpose() * mc);
}

/// Per-mode dimensionless times for one scenario time `tau`, referenced to the
/// faster of the two decay rates.
struct LocalTaus {
  TauTime tau1;
  TauTime tau2;
};

inline LocalTaus split_local_tau(TauTime tau, const LocalBathSpec& spec) {
  spec.validate();
  const double ref = std::max(spec.gamma1, spec.gamma2);
  auto per_mode = [&](double gamma) {
    if (gamma == 0.0 || ref == 0.0) return TauTime(0.0);
    if (gamma == ref) return tau;
    if (tau.value() == 1.0) return TauTime(1.0);
    return TauTime(-std::expm1((gamma / ref) * std::log1p(-tau.value())));
  };
  return {per_mode(spec.gamma1), per_mode(spec.gamma2)};
}

/// Vacuum squeezed by S1(r) (+) S2(-r).
inline GaussianState separable_squeezed_state(double r) {
  const auto s = single_mode_squeezer(r, 1) * single_mode_squeezer(-r, 2);
  return apply_symplectic(s, vacuum_state());
}

/// Separable squeezed state mixed on a balanced beam splitter.
inline GaussianState tmsv_state(double r) {
  return apply_symplectic(balanced_beam_splitter(), separable_squeezed_state(r));
}

/// Case 1: squeeze -> dissipate -> B(pi/4).  Case 2: squeeze -> B(pi/4) ->
/// dissipate. The variant only affects local scenarios.
inline GaussianState run_scenario(Scenario sc, double r, const BathSpec& bath, TauTime tau,
                                  ChannelVariant variant = ChannelVariant::PaperLiteral) {
  if (!std::isfinite(r)) throw std::invalid_argument("squeezing parameter must be finite");
  const bool local = is_local(sc);
  if (local != std::holds_alternative<LocalBathSpec>(bath)) {
    throw std::invalid_argument(std::string("bath type does not match scenario ") +
                                std::string(to_string(sc)));
  }
  auto dissipate = [&](const GaussianState& in) {
    if (local) {
      const auto& spec = std::get<LocalBathSpec>(bath);
      const auto taus = split_local_tau(tau, spec);
      return local_bath_map(in, taus.tau1, taus.tau2, spec, variant);
    }
    return global_bath_map(in, tau, std::get<GlobalBathSpec>(bath));
  };
  const auto bs = balanced_beam_splitter();
  const GaussianState squeezed = separable_squeezed_state(r);
  if (mixes_before_bath(sc)) return dissipate(apply_symplectic(bs, squeezed));
  return apply_symplectic(bs, dissipate(squeezed));
}

}  // namespace cvdecay
