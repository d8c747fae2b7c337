#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "torscan/errors.hpp"
#include "torscan/rank_sketch.hpp"
#include "torscan/rng.hpp"

namespace torscan {

// Moments of ||x||^2 for an N-dimensional vector with i.i.d. entries uniform
// over the balanced residues of F_p (odd p): per-coordinate Z = x^2 has
// E(Z) = (p^2-1)/12 and Var(Z) = p^4/180 - p^2/36 + 1/45; the third absolute
// central moment is bounded by ((p-1)/2)^6.
struct NormMoments {
  double mean = 0.0;        // E ||x||^2 = N (p^2-1)/12
  double variance = 0.0;    // Var ||x||^2 = N (p^4/180 - p^2/36 + 1/45)
  double rho_bound = 0.0;   // ((p-1)/2)^6
  double coord_variance = 0.0;  // per-coordinate sigma_1^2
};

inline NormMoments norm_sq_moments(std::int64_t n, std::int64_t p) {
  require_prime(p);
  if (p == 2)
    throw EvenPrimeUnsupported("balanced moments are defined for odd p only");
  if (n < 1) throw Error("dimension must be >= 1");
  const double pd = static_cast<double>(p);
  NormMoments m;
  m.coord_variance =
      pd * pd * pd * pd / 180.0 - pd * pd / 36.0 + 1.0 / 45.0;
  m.mean = static_cast<double>(n) * (pd * pd - 1.0) / 12.0;
  m.variance = static_cast<double>(n) * m.coord_variance;
  m.rho_bound = std::pow((pd - 1.0) / 2.0, 6.0);
  return m;
}

inline double normal_cdf(double x) {
  // Phi via erfc; absolute error well below 1e-12 over the useful range.
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// One-sided Chebyshev-Cantelli lower bound on Pr(||x|| <= S), valid for
// S^2 >= E ||x||^2, with the standard normalization sigma^2 = N * Var(Z).
inline double cantelli_bound(std::int64_t n, std::int64_t p, double s) {
  const NormMoments m = norm_sq_moments(n, p);
  const double s2 = s * s;
  // boundary-inclusive up to float noise, so S = sqrt(mean) is valid
  if (s2 < m.mean - 1e-9 * std::max(1.0, m.mean))
    throw OutsideValidityRegion("cantelli bound needs S^2 >= mean");
  const double gap = std::max(0.0, s2 - m.mean);
  return 1.0 - m.variance / (m.variance + gap * gap);
}

// Berry-Esseen lower bound on Pr(||x|| <= S) with the textbook normalization
// sigma_1^3 sqrt(N) in the correction term. Clamped to [-1, 1].
inline double berry_esseen_bound(std::int64_t n, std::int64_t p, double s) {
  const NormMoments m = norm_sq_moments(n, p);
  const double s2 = s * s;
  const double sigma = std::sqrt(m.variance);
  const double phi = normal_cdf((s2 - m.mean) / sigma);
  const double sigma1_cubed = std::pow(m.coord_variance, 1.5);
  const double correction =
      0.56 * m.rho_bound / (sigma1_cubed * std::sqrt(static_cast<double>(n)));
  return std::clamp(phi - correction, -1.0, 1.0);
}

// Empirical Pr(||x|| <= S) from seeded sampling; one counter-based stream per
// trial. The comparison carries a 1e-9 slack so that an S whose square is
// meant to hit an integer boundary (S = sqrt(12), say) counts that boundary.
inline double monte_carlo_norm_prob(std::int64_t n, std::int64_t p, double s,
                                    std::int64_t trials, std::uint64_t seed) {
  require_prime(p);
  if (trials < 1) throw Error("trials must be >= 1");
  const double s2 = s * s + 1e-9;
  std::int64_t hits = 0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    rng::Stream stream(seed, static_cast<std::uint64_t>(trial));
    const FpVector x =
        sample_fp_vector(static_cast<std::size_t>(n), p, stream);
    if (static_cast<double>(x.norm_sq()) <= s2) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

// ---------------------------------------------------------------------------
// Bound-versus-empirical sweep
// ---------------------------------------------------------------------------

struct BoundSweepRow {
  std::int64_t n = 0;
  std::int64_t p = 0;
  double s = 0.0;
  double cantelli = std::nan("");  // nan where S^2 < mean (outside validity)
  double berry_esseen = 0.0;
  double empirical = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

// For each (N, p): draw `trials` squared norms once, take S at the requested
// quantiles of the empirical distribution, and tabulate both closed-form
// bounds against the empirical CDF at those points.
inline std::vector<BoundSweepRow> bound_sweep(
    const std::vector<std::int64_t>& ns, const std::vector<std::int64_t>& ps,
    int quantile_count, std::int64_t trials, std::uint64_t seed) {
  if (quantile_count < 1) throw Error("need at least one quantile");
  std::vector<BoundSweepRow> rows;
  for (std::int64_t n : ns) {
    for (std::int64_t p : ps) {
      const NormMoments m = norm_sq_moments(n, p);
      std::vector<std::int64_t> sq(static_cast<std::size_t>(trials));
      for (std::int64_t trial = 0; trial < trials; ++trial) {
        rng::Stream stream(seed, static_cast<std::uint64_t>(trial));
        sq[static_cast<std::size_t>(trial)] =
            sample_fp_vector(static_cast<std::size_t>(n), p, stream).norm_sq();
      }
      std::vector<std::int64_t> sorted = sq;
      std::sort(sorted.begin(), sorted.end());

      for (int q = 1; q <= quantile_count; ++q) {
        const double frac =
            static_cast<double>(q) / static_cast<double>(quantile_count + 1);
        const std::size_t idx = std::min(
            sorted.size() - 1,
            static_cast<std::size_t>(frac * static_cast<double>(sorted.size())));
        const double s = std::sqrt(static_cast<double>(sorted[idx]));

        BoundSweepRow row;
        row.n = n;
        row.p = p;
        row.s = s;
        row.trials = trials;
        row.seed = seed;
        if (s * s >= m.mean) row.cantelli = cantelli_bound(n, p, s);
        row.berry_esseen = berry_esseen_bound(n, p, s);
        const double s2 = s * s + 1e-9;
        std::int64_t hits = 0;
        for (std::int64_t v : sq)
          if (static_cast<double>(v) <= s2) ++hits;
        row.empirical =
            static_cast<double>(hits) / static_cast<double>(trials);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

inline std::string bound_sweep_csv(const std::vector<BoundSweepRow>& rows) {
  std::ostringstream out;
  out << "# cantelli: one-sided Chebyshev bound with sigma^2 = N*var1"
         " (not the squared-variance variant)\n";
  out << "# berry_esseen: textbook correction normalization sigma1^3*sqrt(N)"
         " (not sqrt(N)*var1)\n";
  out << "N,p,S,cantelli,berry_esseen,empirical,trials,seed\n";
  out.precision(12);
  for (const BoundSweepRow& r : rows) {
    out << r.n << ',' << r.p << ',' << r.s << ',';
    if (std::isnan(r.cantelli))
      out << "nan";
    else
      out << r.cantelli;
    out << ',' << r.berry_esseen << ',' << r.empirical << ',' << r.trials
        << ',' << r.seed << "\n";
  }
  return out.str();
}

}  // namespace torscan
