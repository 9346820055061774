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

// Robustness thresholds, sudden-death times, numeric boundary search, the
// squeezing-vs-entanglement classifier, time sweeps and the closed-form vs
// numeric discrepancy report.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cvdecay/channels.hpp"
#include "cvdecay/gaussian.hpp"
#include "cvdecay/measures.hpp"
#include "cvdecay/parallel.hpp"

namespace cvdecay {

namespace detail {
inline void require_nbar(double n) {
  if (!std::isfinite(n) || n < 0.0) {
    throw std::invalid_argument("mean photon number must be finite and >= 0");
  }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Closed forms. Local forms refer to a single local bath on mode 1.

/// Squeezing above which the separable-squeezed input never disentangles
/// under a single local bath.
inline double r_critical_local(double n) {
  detail::require_nbar(n);
  return 0.5 * std::log1p(n / 2.0);
}

/// Disentanglement time of the separable-squeezed input (local bath), or
/// nullopt when |r| exceeds r_critical_local.
inline std::optional<double> tau_a(double r, double n) {
  detail::require_nbar(n);
  const double ar = std::abs(r);
  if (ar > r_critical_local(n)) return std::nullopt;
  if (ar == 0.0) return 0.0;
  const double e2 = std::exp(2.0 * ar);
  const double den = (2.0 + n) * e2 - 2.0;
  return 8.0 * e2 * e2 * (2.0 + n - 2.0 * std::cosh(2.0 * ar)) * std::sinh(2.0 * ar) / (den * den);
}

/// Disentanglement time of the TMSV input under a single local bath.
inline double tau_b(double n) {
  detail::require_nbar(n);
  return 8.0 * (2.0 + n) / ((4.0 + n) * (4.0 + n));
}

inline double r_transition_local(double n) {
  detail::require_nbar(n);
  return 0.5 * std::log((2.0 + n + std::sqrt(2.0 * (2.0 + 4.0 * n + n * n))) / (4.0 + n));
}

/// Squeezing above which the TMSV input never disentangles in a global bath.
inline double r_critical_global(double n) {
  detail::require_nbar(n);
  return 0.5 * std::log1p(2.0 * n);
}

inline std::optional<double> tau_c(double r, double n) {
  detail::require_nbar(n);
  const double ar = std::abs(r);
  if (ar > r_critical_global(n)) return std::nullopt;
  if (ar == 0.0) return 0.0;
  return 2.0 * std::sinh(2.0 * ar) / (-std::expm1(-2.0 * ar) + 2.0 * n);
}

/// Disentanglement time of the separable-squeezed input in a global bath;
/// independent of r.
inline double tau_d(double n) {
  detail::require_nbar(n);
  return 1.0 / (1.0 + n);
}

inline double r_transition_global(double n) {
  detail::require_nbar(n);
  return 0.5 * std::log((1.0 + 2.0 * n + std::sqrt(1.0 + 8.0 * n + 8.0 * n * n)) / (2.0 * (1.0 + n)));
}

enum class ThresholdEnvironment { LocalSingleBath, Global };

struct ThresholdSet {
  double r_c;
  double r_t;
  ThresholdEnvironment environment;
};

inline ThresholdSet thresholds(ThresholdEnvironment env, double n) {
  if (env == ThresholdEnvironment::LocalSingleBath) {
    return {r_critical_local(n), r_transition_local(n), env};
  }
  return {r_critical_global(n), r_transition_global(n), env};
}

// ---------------------------------------------------------------------------
// Numeric sudden death.

inline constexpr int kBracketPoints = 512;
inline constexpr double kTauCap = 1.0 - 1e-9;
inline constexpr double kBisectionTol = 1e-12;

enum class SuddenDeathMethod { ClosedForm, Bisection };

struct SuddenDeathResult {
  std::optional<double> tau_star;  // nullopt: entangled on all of (0, 1 - 1e-9]
  SuddenDeathMethod method = SuddenDeathMethod::Bisection;
  bool non_monotone = false;  // re-entangled after the first crossing
};

inline double scenario_simon_lhs(Scenario sc, double r, const BathSpec& bath, double tau,
                                 ChannelVariant variant) {
  return simon_lhs(run_scenario(sc, r, bath, TauTime(tau), variant).cov());
}

/// Smallest tau at which the scenario output becomes separable. Brackets on a
/// uniform grid of kBracketPoints intervals over [0, 1 - 1e-9], then bisects
/// the separability predicate to |dtau| <= 1e-12.
inline SuddenDeathResult sudden_death_numeric(Scenario sc, double r, const BathSpec& bath,
                                              ChannelVariant variant = ChannelVariant::PaperLiteral) {
  auto separable = [&](double tau) {
    return scenario_simon_lhs(sc, r, bath, tau, variant) >= -kSeparabilityDeadBand;
  };
  SuddenDeathResult result;
  if (separable(0.0)) {
    result.tau_star = 0.0;
    return result;
  }
  const double h = kTauCap / kBracketPoints;
  int hit = -1;
  for (int k = 1; k <= kBracketPoints; ++k) {
    const double tau = (k == kBracketPoints) ? kTauCap : k * h;
    if (separable(tau)) {
      hit = k;
      break;
    }
  }
  if (hit < 0) return result;

  double lo = (hit - 1) * h;
  double hi = (hit == kBracketPoints) ? kTauCap : hit * h;
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (separable(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.tau_star = hi;

  for (int k = hit + 1; k <= kBracketPoints; ++k) {
    const double tau = (k == kBracketPoints) ? kTauCap : k * h;
    if (!separable(tau)) {
      result.non_monotone = true;
      break;
    }
  }
  return result;
}

/// Closed-form sudden-death time for a scenario, when one exists. Local
/// closed forms assume a single local bath with occupation nbar1.
inline std::optional<double> closed_form_death(Scenario sc, double r, double n) {
  switch (sc) {
    case Scenario::LocalCase1: return tau_a(r, n);
    case Scenario::LocalCase2: return tau_b(n);
    case Scenario::GlobalCase1: return tau_d(n);
    case Scenario::GlobalCase2: return tau_c(r, n);
  }
  return std::nullopt;
}

inline std::string_view closed_form_name(Scenario sc) {
  switch (sc) {
    case Scenario::LocalCase1: return "tau_a";
    case Scenario::LocalCase2: return "tau_b";
    case Scenario::GlobalCase1: return "tau_d";
    case Scenario::GlobalCase2: return "tau_c";
  }
  return "";
}

inline BathSpec default_bath(Scenario sc, double n, double gamma = 1.0) {
  if (is_local(sc)) return LocalBathSpec::single(gamma, n);
  return GlobalBathSpec{gamma, n};
}

// ---------------------------------------------------------------------------
// Resource classification.

enum class Environment { IdenticalLocal, SingleLocal, Global };
enum class Resource { Equivalent, SqueezingBetter, EntanglementBetter };

inline std::string_view to_string(Environment e) {
  switch (e) {
    case Environment::IdenticalLocal: return "identical-local";
    case Environment::SingleLocal: return "single-local";
    case Environment::Global: return "global";
  }
  return "unknown";
}

inline std::string_view to_string(Resource r) {
  switch (r) {
    case Resource::Equivalent: return "equivalent";
    case Resource::SqueezingBetter: return "squeezing-better";
    case Resource::EntanglementBetter: return "entanglement-better";
  }
  return "unknown";
}

/// Death time of a scenario on the extended line: never -> +inf.
inline double death_time_or_inf(Scenario sc, double r, const BathSpec& bath, ChannelVariant v) {
  const auto res = sudden_death_numeric(sc, r, bath, v);
  return res.tau_star ? *res.tau_star : std::numeric_limits<double>::infinity();
}

/// Numeric transition squeezing: the r at which the Case-1 and Case-2 death
/// times coincide, found by bisection over r in (0, r_hi]. nullopt when the
/// ordering does not swap on that interval.
inline std::optional<double> numeric_r_transition(Environment env, double n,
                                                  ChannelVariant variant = ChannelVariant::ThresholdConsistent,
                                                  double r_hi = 3.0) {
  detail::require_nbar(n);
  if (env == Environment::IdenticalLocal) return std::nullopt;
  const bool local = env == Environment::SingleLocal;
  const Scenario c1 = local ? Scenario::LocalCase1 : Scenario::GlobalCase1;
  const Scenario c2 = local ? Scenario::LocalCase2 : Scenario::GlobalCase2;
  const BathSpec bath = local ? BathSpec(LocalBathSpec::single(1.0, n)) : BathSpec(GlobalBathSpec{1.0, n});
  // Positive when Case 1 (squeezing) outlives Case 2 (entanglement).
  auto gap_sign = [&](double r) {
    const double d1 = death_time_or_inf(c1, r, bath, variant);
    const double d2 = death_time_or_inf(c2, r, bath, variant);
    if (std::isinf(d1) && std::isinf(d2)) return 0;
    if (d1 > d2) return 1;
    if (d1 < d2) return -1;
    return 0;
  };
  double lo = 1e-3;
  double hi = r_hi;
  const int s_lo = gap_sign(lo);
  const int s_hi = gap_sign(hi);
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) return std::nullopt;
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int s = gap_sign(mid);
    if (s == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

enum class ThresholdSource { ClosedForm, Numeric };

/// Which form stores quantumness longer. Uses the closed-form transition
/// squeezing by default; ThresholdSource::Numeric uses numeric_r_transition
/// under `variant` (local) or the global map.
inline Resource classify_resource(Environment env, double r, double n,
                                  ThresholdSource source = ThresholdSource::ClosedForm,
                                  ChannelVariant variant = ChannelVariant::ThresholdConsistent) {
  detail::require_nbar(n);
  if (!std::isfinite(r)) throw std::invalid_argument("squeezing parameter must be finite");
  if (env == Environment::IdenticalLocal) return Resource::Equivalent;
  double r_t = 0.0;
  if (source == ThresholdSource::ClosedForm) {
    r_t = env == Environment::SingleLocal ? r_transition_local(n) : r_transition_global(n);
  } else {
    const auto numeric = numeric_r_transition(env, n, variant);
    if (!numeric) throw std::runtime_error("no numeric transition squeezing found");
    r_t = *numeric;
  }
  const bool below = std::abs(r) < r_t;
  if (env == Environment::SingleLocal) {
    return below ? Resource::EntanglementBetter : Resource::SqueezingBetter;
  }
  return below ? Resource::SqueezingBetter : Resource::EntanglementBetter;
}

// ---------------------------------------------------------------------------
// Sweeps.

struct CurveSample {
  double tau = 0.0;
  double log_negativity = 0.0;
  double lambda_min = 0.0;
  double simon_lhs = 0.0;
};

struct ScenarioCurve {
  Scenario scenario = Scenario::LocalCase1;
  double r = 0.0;
  BathSpec bath = LocalBathSpec{};
  ChannelVariant variant = ChannelVariant::PaperLiteral;
  std::vector<CurveSample> samples;
};

/// Uniform grid of `steps` points on [0, 1].
inline ScenarioCurve sweep(Scenario sc, double r, const BathSpec& bath, ChannelVariant variant,
                           int steps) {
  if (steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
  ScenarioCurve curve{sc, r, bath, variant, {}};
  curve.samples = parallel_map(static_cast<std::size_t>(steps), [&](std::size_t k) {
    const double tau = (k + 1 == static_cast<std::size_t>(steps))
                           ? 1.0
                           : static_cast<double>(k) / static_cast<double>(steps - 1);
    const auto out = run_scenario(sc, r, bath, TauTime(tau), variant);
    const auto report = entanglement_report(out.cov());
    return CurveSample{tau, report.log_negativity, min_quadrature_variance(out.cov()),
                       report.simon_lhs};
  });
  return curve;
}

// ---------------------------------------------------------------------------
// Discrepancy report.

inline constexpr double kReportMatchTol = 1e-6;

struct DiscrepancyRow {
  Scenario scenario = Scenario::LocalCase1;
  std::optional<ChannelVariant> variant;  // local rows only
  double nbar = 0.0;
  double r = 0.0;
  std::string formula;
  std::optional<double> numeric;
  std::optional<double> closed_form;
  std::optional<double> abs_diff;
  bool match = false;
  bool non_monotone = false;
};

struct DiscrepancyReport {
  double nbar = 0.0;
  std::vector<double> r_grid;
  std::vector<DiscrepancyRow> rows;

  /// Variants whose numeric boundary matches the closed form of `sc` at every
  /// r in the grid.
  std::vector<ChannelVariant> matching_variants(Scenario sc) const {
    std::vector<ChannelVariant> out;
    for (ChannelVariant v : kAllVariants) {
      bool any = false;
      bool all = true;
      for (const auto& row : rows) {
        if (row.scenario != sc || row.variant != v) continue;
        any = true;
        all = all && row.match;
      }
      if (any && all) out.push_back(v);
    }
    return out;
  }

  bool all_match(Scenario sc) const {
    bool any = false;
    for (const auto& row : rows) {
      if (row.scenario != sc) continue;
      any = true;
      if (!row.match) return false;
    }
    return any;
  }
};

inline bool boundaries_match(const std::optional<double>& numeric,
                             const std::optional<double>& closed) {
  const bool closed_never = !closed || *closed >= kTauCap;
  if (!numeric) return closed_never;
  if (!closed) return false;
  return std::abs(*numeric - *closed) <= kReportMatchTol;
}

inline std::vector<double> default_report_r_grid() { return {0.1, 0.2, 0.4, 0.6, 1.6}; }

/// Every closed-form sudden-death time compared against the numeric boundary:
/// local scenarios (single bath) once per variant, global scenarios once.
inline DiscrepancyReport discrepancy_report(double n, const std::vector<double>& r_grid) {
  detail::require_nbar(n);
  if (r_grid.empty()) throw std::invalid_argument("discrepancy_report: empty r grid");
  struct Job {
    Scenario sc;
    std::optional<ChannelVariant> variant;
    double r;
  };
  std::vector<Job> jobs;
  for (Scenario sc : {Scenario::LocalCase1, Scenario::LocalCase2}) {
    for (ChannelVariant v : kAllVariants) {
      for (double r : r_grid) jobs.push_back({sc, v, r});
    }
  }
  for (Scenario sc : {Scenario::GlobalCase1, Scenario::GlobalCase2}) {
    for (double r : r_grid) jobs.push_back({sc, std::nullopt, r});
  }

  DiscrepancyReport report;
  report.nbar = n;
  report.r_grid = r_grid;
  report.rows = parallel_map(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    DiscrepancyRow row;
    row.scenario = job.sc;
    row.variant = job.variant;
    row.nbar = n;
    row.r = job.r;
    row.formula = std::string(closed_form_name(job.sc));
    const auto numeric = sudden_death_numeric(job.sc, job.r, default_bath(job.sc, n),
                                              job.variant.value_or(ChannelVariant::PaperLiteral));
    row.numeric = numeric.tau_star;
    row.non_monotone = numeric.non_monotone;
    row.closed_form = closed_form_death(job.sc, job.r, n);
    if (row.numeric && row.closed_form) row.abs_diff = std::abs(*row.numeric - *row.closed_form);
    row.match = boundaries_match(row.numeric, row.closed_form);
    return row;
  });
  return report;
}

}  // namespace cvdecay
