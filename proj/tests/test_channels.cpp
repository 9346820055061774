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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "cvdecay/channels.hpp"
#include "test_support.hpp"

namespace cvdecay {
namespace {

using testing::separable_squeezed_cov;
using testing::tmsv_cov;

GaussianState state_of(const Mat4& v) { return GaussianState(CovMatrix(v)); }

// Printed intermediate covariance of the separable squeezed state after the
// global bath (before the beam splitter), (1/4) sigma.
Mat4 printed_sigma(double r, double n, double tau) {
  const double c = std::cosh(2 * r);
  const double s = std::sinh(2 * r);
  const double s1 = (2 * n + 1) * tau - c * (tau - 2) - 2 * s * std::sqrt(1 - tau);
  const double s2 = (2 * n + 1) * tau - c * (tau - 2) + 2 * s * std::sqrt(1 - tau);
  const double s3 = (2 * n + 1 - c) * tau;
  Mat4 m;
  m << s1, 0, s3, 0,
       0, s2, 0, s3,
       s3, 0, s2, 0,
       0, s3, 0, s1;
  return m / 4.0;
}

// Printed Case-1 output after the beam splitter, (1/2) sigma'.
Mat4 printed_sigma_prime(double r, double n, double tau) {
  const double p1 = (2 * n + 1) * tau - std::cosh(2 * r) * (tau - 1);
  const double p2 = std::cosh(2 * r);
  const double p3 = std::sinh(2 * r) * std::sqrt(1 - tau);
  Mat4 m;
  m << p1, 0, p3, 0,
       0, p1, 0, -p3,
       p3, 0, p2, 0,
       0, -p3, 0, p2;
  return m / 2.0;
}

// Printed Case-2 output, (1/2) delta.
Mat4 printed_delta(double r, double n, double tau) {
  const double ep = std::exp(2 * r);
  const double em = std::exp(-2 * r);
  const double d1 = 0.5 * (2 * n + 1 - ep) * tau + std::cosh(2 * r);
  const double d2 = 0.5 * (2 * n + 1 - em) * tau + std::cosh(2 * r);
  const double d3 = 0.5 * (2 * n + 1 - ep) * tau + std::sinh(2 * r);
  const double d4 = 0.5 * (2 * n + 1 - em) * tau - std::sinh(2 * r);
  Mat4 m;
  m << d1, 0, d3, 0,
       0, d2, 0, d4,
       d3, 0, d1, 0,
       0, d4, 0, d2;
  return m / 2.0;
}

TEST(TauTime, Validation) {
  EXPECT_NO_THROW(TauTime(0.0));
  EXPECT_NO_THROW(TauTime(1.0));
  EXPECT_THROW(TauTime(-1e-3), std::invalid_argument);
  EXPECT_THROW(TauTime(1.0001), std::invalid_argument);
  EXPECT_THROW(TauTime(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST(TauTime, Conversions) {
  EXPECT_EQ(time_to_tau(1.0, 0.0).value(), 0.0);
  EXPECT_EQ(time_to_tau(0.5, std::numeric_limits<double>::infinity()).value(), 1.0);
  EXPECT_NEAR(time_to_tau(0.5, 60.0).value(), 1.0, 1e-15);
  EXPECT_NEAR(time_to_tau(1.0, 0.3).value(), 1 - std::exp(-0.6), 1e-15);
  const double t = tau_to_time(1.3, TauTime(0.37));
  EXPECT_NEAR(time_to_tau(1.3, t).value(), 0.37, 1e-12);
  EXPECT_TRUE(std::isinf(tau_to_time(1.0, TauTime(1.0))));
  EXPECT_THROW(tau_to_time(0.0, TauTime(0.5)), std::invalid_argument);
  EXPECT_THROW(time_to_tau(1.0, -1.0), std::invalid_argument);
}

TEST(LocalBathMap, ZeroTimeIsIdentity) {
  const auto st = state_of(tmsv_cov(0.4));
  const LocalBathSpec spec{1.0, 3.0, 2.0, 1.0};
  for (ChannelVariant v : kAllVariants) {
    const auto out = local_bath_map(st, TauTime(0), TauTime(0), spec, v);
    EXPECT_EQ(max_abs(out.cov().matrix() - st.cov().matrix()), 0.0);
  }
}

TEST(LocalBathMap, InfiniteTimeLimits) {
  const auto st = state_of(tmsv_cov(0.4));
  const auto spec = LocalBathSpec::identical(1.0, 4.0);
  const auto literal = local_bath_map(st, TauTime(1), TauTime(1), spec, ChannelVariant::PaperLiteral);
  EXPECT_LE(max_abs(literal.cov().matrix() - 1.5 * Mat4::Identity()), 1e-15);
  const auto derived = local_bath_map(st, TauTime(1), TauTime(1), spec, ChannelVariant::LindbladDerived);
  EXPECT_LE(max_abs(derived.cov().matrix() - 4.5 * Mat4::Identity()), 1e-15);
  const auto consistent =
      local_bath_map(st, TauTime(1), TauTime(1), spec, ChannelVariant::ThresholdConsistent);
  EXPECT_LE(max_abs(consistent.cov().matrix() - 1.0 * Mat4::Identity()), 1e-15);
}

TEST(LocalBathMap, PerModeBlocks) {
  // X = (1 - tau)^{1/4} per mode; check mode-resolved scaling and noise.
  const auto st = state_of(tmsv_cov(0.3));
  const LocalBathSpec spec{1.0, 2.0, 1.0, 0.5};
  const double t1 = 0.3;
  const double t2 = 0.6;
  const auto out = local_bath_map(st, TauTime(t1), TauTime(t2), spec, ChannelVariant::PaperLiteral);
  const Mat4& v = out.cov().matrix();
  const double x1 = std::pow(1 - t1, 0.25);
  const double x2 = std::pow(1 - t2, 0.25);
  const double c = std::cosh(0.6) / 2;
  const double s = std::sinh(0.6) / 2;
  EXPECT_NEAR(v(0, 0), x1 * x1 * c + 0.5 * (2.0 / 2 + 1) * t1, 1e-15);
  EXPECT_NEAR(v(2, 2), x2 * x2 * c + 0.5 * (0.5 / 2 + 1) * t2, 1e-15);
  EXPECT_NEAR(v(0, 2), x1 * x2 * s, 1e-15);
  EXPECT_NEAR(v(1, 3), -x1 * x2 * s, 1e-15);
}

TEST(LocalBathMap, RejectsBadParameters) {
  const auto st = vacuum_state();
  EXPECT_THROW(local_bath_map(st, TauTime(0.1), TauTime(0.1), LocalBathSpec{1.0, -1.0, 1.0, 0.0}),
               std::invalid_argument);
  EXPECT_THROW(local_bath_map(st, TauTime(0.1), TauTime(0.1), LocalBathSpec{-1.0, 1.0, 1.0, 0.0}),
               std::invalid_argument);
}

TEST(LocalBathMap, MeanIsDamped) {
  const Vec4 mean(1.0, 2.0, -1.0, 0.5);
  const GaussianState st(CovMatrix(0.5 * Mat4::Identity()), mean);
  const auto out = local_bath_map(st, TauTime(0.75), TauTime(0.0), LocalBathSpec::single(1.0, 1.0),
                                  ChannelVariant::LindbladDerived);
  const double x = std::pow(0.25, 0.25);
  EXPECT_NEAR(out.mean()(0), x * 1.0, 1e-15);
  EXPECT_NEAR(out.mean()(1), x * 2.0, 1e-15);
  EXPECT_EQ(out.mean()(2), -1.0);
  EXPECT_EQ(out.mean()(3), 0.5);
}

// LindbladDerived is a semigroup in tau; the other two readings are not.
TEST(LocalBathMap, SemigroupOnlyForLindbladDerived) {
  const auto spec = LocalBathSpec::identical(1.0, 4.0);
  const auto st = state_of(tmsv_cov(0.5));
  auto compose = [&](ChannelVariant v, double a, double b) {
    const auto mid = local_bath_map(st, TauTime(a), TauTime(a), spec, v);
    return local_bath_map(mid, TauTime(b), TauTime(b), spec, v).cov().matrix();
  };
  auto direct = [&](ChannelVariant v, double a, double b) {
    const double t = 1 - (1 - a) * (1 - b);
    return local_bath_map(st, TauTime(t), TauTime(t), spec, v).cov().matrix();
  };
  for (double a : {0.1, 0.5, 0.9}) {
    for (double b : {0.2, 0.5, 0.7}) {
      const auto v = ChannelVariant::LindbladDerived;
      EXPECT_LE(max_abs(compose(v, a, b) - direct(v, a, b)), 1e-12) << a << " " << b;
    }
  }
  for (ChannelVariant v : {ChannelVariant::PaperLiteral, ChannelVariant::ThresholdConsistent}) {
    EXPECT_GT(max_abs(compose(v, 0.5, 0.5) - direct(v, 0.5, 0.5)), 1e-6) << to_string(v);
  }
}

// Complete-positivity proxy: every variant keeps random physical inputs
// physical over a tau grid.
TEST(LocalBathMap, KeepsRandomStatesPhysical) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> occ(0.0, 6.0);
  for (int k = 0; k < 1000; ++k) {
    const GaussianState st(testing::random_physical_cov(rng));
    const LocalBathSpec spec{1.0, occ(rng), 1.0, occ(rng)};
    const ChannelVariant v = kAllVariants[k % 3];
    for (double t : {0.0, 0.1, 0.35, 0.6, 0.85, 1.0}) {
      const double t2 = std::fmod(t + 0.3, 1.0);
      EXPECT_NO_THROW({
        const auto out = local_bath_map(st, TauTime(t), TauTime(t2), spec, v);
        EXPECT_TRUE(check_uncertainty(out.cov(), 1e-9));
      });
    }
  }
}

TEST(GlobalBathMap, ZeroTimeIsIdentity) {
  const auto st = state_of(tmsv_cov(0.7));
  const auto out = global_bath_map(st, TauTime(0), GlobalBathSpec{1.0, 3.0});
  EXPECT_EQ(max_abs(out.cov().matrix() - st.cov().matrix()), 0.0);
}

TEST(GlobalBathMap, VacuumInCollectiveBasis) {
  const auto out = global_bath_map(vacuum_state(), TauTime(0.5), GlobalBathSpec{1.0, 4.0});
  const Mat4 b = balanced_beam_splitter().matrix();
  const Mat4 collective = b * out.cov().matrix() * b.transpose();
  EXPECT_LE(max_abs(collective - Mat4(Vec4(2.5, 2.5, 0.5, 0.5).asDiagonal())), 1e-14);
}

TEST(GlobalBathMap, VacuumIsFixedPointAtZeroTemperature) {
  for (double t : {0.1, 0.5, 0.99, 1.0}) {
    const auto out = global_bath_map(vacuum_state(), TauTime(t), GlobalBathSpec{2.0, 0.0});
    EXPECT_LE(max_abs(out.cov().matrix() - 0.5 * Mat4::Identity()), 1e-14);
  }
}

TEST(GlobalBathMap, RelativeModeUntouched) {
  std::mt19937_64 rng(5);
  const Mat4 b = balanced_beam_splitter().matrix();
  for (int k = 0; k < 200; ++k) {
    const GaussianState st(testing::random_physical_cov(rng));
    const Mat4 before = b * st.cov().matrix() * b.transpose();
    for (double t : {0.2, 0.5, 1.0}) {
      const auto out = global_bath_map(st, TauTime(t), GlobalBathSpec{1.0, 2.0});
      const Mat4 after = b * out.cov().matrix() * b.transpose();
      const double scale = std::max(1.0, max_abs(before));
      EXPECT_LE((after.block<2, 2>(2, 2) - before.block<2, 2>(2, 2)).cwiseAbs().maxCoeff(), 1e-14 * scale);
    }
  }
}

TEST(GlobalBathMap, ReproducesPrintedIntermediateSigma) {
  for (double r : {0.2, 0.8}) {
    for (double n : {0.0, 4.0}) {
      for (double t : {0.1, 0.5, 0.9}) {
        const auto out = global_bath_map(state_of(separable_squeezed_cov(r)), TauTime(t),
                                         GlobalBathSpec{1.0, n});
        EXPECT_LE(max_abs(out.cov().matrix() - printed_sigma(r, n, t)), 1e-12);
      }
    }
  }
}

TEST(GlobalBathMap, SemigroupAndPhysicality) {
  std::mt19937_64 rng(77);
  const GlobalBathSpec spec{1.0, 1.5};
  for (int k = 0; k < 200; ++k) {
    const GaussianState st(testing::random_physical_cov(rng));
    const auto two = global_bath_map(global_bath_map(st, TauTime(0.3), spec), TauTime(0.6), spec);
    const auto one = global_bath_map(st, TauTime(1 - 0.7 * 0.4), spec);
    const double scale = std::max(1.0, max_abs(st.cov().matrix()));
    EXPECT_LE(max_abs(two.cov().matrix() - one.cov().matrix()), 1e-12 * scale);
  }
}

TEST(SplitLocalTau, ReferencesFasterRate) {
  const auto same = split_local_tau(TauTime(0.4), LocalBathSpec::identical(2.0, 1.0));
  EXPECT_EQ(same.tau1.value(), 0.4);
  EXPECT_EQ(same.tau2.value(), 0.4);
  const auto single = split_local_tau(TauTime(0.4), LocalBathSpec::single(2.0, 1.0));
  EXPECT_EQ(single.tau1.value(), 0.4);
  EXPECT_EQ(single.tau2.value(), 0.0);
  const auto half = split_local_tau(TauTime(0.75), LocalBathSpec{2.0, 0.0, 1.0, 0.0});
  EXPECT_EQ(half.tau1.value(), 0.75);
  EXPECT_NEAR(half.tau2.value(), 0.5, 1e-15);
  const auto at_one = split_local_tau(TauTime(1.0), LocalBathSpec{2.0, 0.0, 1.0, 0.0});
  EXPECT_EQ(at_one.tau2.value(), 1.0);
}

TEST(RunScenario, LocalCase2AtZeroTimeIsTmsv) {
  for (ChannelVariant v : kAllVariants) {
    const auto out = run_scenario(Scenario::LocalCase2, 0.3, LocalBathSpec::single(1.0, 4.0),
                                  TauTime(0.0), v);
    EXPECT_LE(max_abs(out.cov().matrix() - tmsv_cov(0.3)), 1e-15);
  }
}

TEST(RunScenario, GlobalCasesMatchPrintedMatrices) {
  for (double r : {0.05, 0.2, 0.6, 1.6}) {
    for (double n : {0.0, 1.0, 4.0}) {
      for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const GlobalBathSpec spec{1.0, n};
        const auto c1 = run_scenario(Scenario::GlobalCase1, r, spec, TauTime(t));
        const auto c2 = run_scenario(Scenario::GlobalCase2, r, spec, TauTime(t));
        const double scale = std::max(1.0, std::cosh(2 * r));
        EXPECT_LE(max_abs(c1.cov().matrix() - printed_sigma_prime(r, n, t)), 1e-12 * scale)
            << "r=" << r << " n=" << n << " t=" << t;
        EXPECT_LE(max_abs(c2.cov().matrix() - printed_delta(r, n, t)), 1e-12 * scale)
            << "r=" << r << " n=" << n << " t=" << t;
      }
    }
  }
}

TEST(RunScenario, GlobalCase1SpecificPoint) {
  const auto out = run_scenario(Scenario::GlobalCase1, 0.2, GlobalBathSpec{1.0, 4.0}, TauTime(0.5));
  EXPECT_LE(max_abs(out.cov().matrix() - printed_sigma_prime(0.2, 4.0, 0.5)), 1e-12);
}

TEST(RunScenario, IdenticalLocalBathsGiveIdenticalCases) {
  for (ChannelVariant v : kAllVariants) {
    for (double r : {0.1, 0.5, 1.2}) {
      for (double n : {0.0, 2.0, 4.0}) {
        for (double t : {0.0, 0.3, 0.8, 1.0}) {
          const auto spec = LocalBathSpec::identical(1.0, n);
          const auto a = run_scenario(Scenario::LocalCase1, r, spec, TauTime(t), v);
          const auto b = run_scenario(Scenario::LocalCase2, r, spec, TauTime(t), v);
          EXPECT_LE(max_abs(a.cov().matrix() - b.cov().matrix()), 1e-13);
        }
      }
    }
  }
}

TEST(RunScenario, SingleLocalBathDistinguishesCases) {
  const auto spec = LocalBathSpec::single(1.0, 4.0);
  const auto a = run_scenario(Scenario::LocalCase1, 0.4, spec, TauTime(0.5));
  const auto b = run_scenario(Scenario::LocalCase2, 0.4, spec, TauTime(0.5));
  EXPECT_GT(max_abs(a.cov().matrix() - b.cov().matrix()), 1e-3);
}

TEST(RunScenario, MismatchedBathRejected) {
  EXPECT_THROW(run_scenario(Scenario::GlobalCase1, 0.2, LocalBathSpec{}, TauTime(0.1)),
               std::invalid_argument);
  EXPECT_THROW(run_scenario(Scenario::LocalCase2, 0.2, GlobalBathSpec{}, TauTime(0.1)),
               std::invalid_argument);
}

TEST(Names, RoundTrip) {
  for (Scenario sc : kAllScenarios) EXPECT_EQ(parse_scenario(to_string(sc)), sc);
  for (ChannelVariant v : kAllVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_FALSE(parse_scenario("local-case3").has_value());
  EXPECT_FALSE(parse_variant("literal").has_value());
}

}  // namespace
}  // namespace cvdecay
