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

// Separability and entanglement of two-mode Gaussian states.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvdecay/gaussian.hpp"

namespace cvdecay {

/// States with simon_lhs >= -kSeparabilityDeadBand count as separable.
inline constexpr double kSeparabilityDeadBand = 1e-12;

/// V = [[A, C], [C^T, B]].
struct BlockDecomposition {
  Mat2 a;
  Mat2 b;
  Mat2 c;

  Mat4 reassemble() const {
    Mat4 v;
    v << a, c, c.transpose(), b;
    return v;
  }
};

inline BlockDecomposition blocks(const CovMatrix& v) { return {v.a(), v.b(), v.c()}; }

namespace detail {
inline void require_physical(const CovMatrix& v, const char* who) {
  if (!check_uncertainty(v)) {
    throw std::domain_error(std::string(who) + ": covariance matrix is unphysical");
  }
}
}  // namespace detail

/// Left-hand side of the Simon separability inequality; >= 0 iff separable.
inline double simon_lhs(const CovMatrix& v) {
  detail::require_physical(v, "simon_lhs");
  const auto [a, b, c] = blocks(v);
  const Mat2 w = single_mode_form();
  const double det_a = a.determinant();
  const double det_b = b.determinant();
  const double det_c = c.determinant();
  const double q = 0.25 - std::abs(det_c);
  const double trace_term = (a * w * c * w * b * w * c.transpose() * w).trace();
  return det_a * det_b + q * q - trace_term - 0.25 * (det_a + det_b);
}

/// Smallest symplectic eigenvalue of the partially transposed covariance
/// (p2 -> -p2). Equals sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2) with
/// Sigma = det A + det B - 2 det C; the spectrum route avoids the
/// cancellation in that expression.
inline double ppt_min_symplectic_eigenvalue(const CovMatrix& v) {
  detail::require_physical(v, "ppt_min_symplectic_eigenvalue");
  Mat4 pt = v.matrix();
  pt.row(3) *= -1.0;
  pt.col(3) *= -1.0;
  return symplectic_spectrum(CovMatrix(pt)).lower;
}

/// E_N = max{0, -log2(2 n_minus)}.
inline double log_negativity(const CovMatrix& v) {
  const double n_minus = ppt_min_symplectic_eigenvalue(v);
  return std::max(0.0, -std::log2(2.0 * n_minus));
}

struct EntanglementReport {
  double simon_lhs;
  double n_minus;
  double log_negativity;
  bool separable;
};

inline EntanglementReport entanglement_report(const CovMatrix& v) {
  EntanglementReport r{};
  r.simon_lhs = simon_lhs(v);
  r.n_minus = ppt_min_symplectic_eigenvalue(v);
  r.log_negativity = std::max(0.0, -std::log2(2.0 * r.n_minus));
  r.separable = r.simon_lhs >= -kSeparabilityDeadBand;
  return r;
}

}  // namespace cvdecay
