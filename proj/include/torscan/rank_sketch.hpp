#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "torscan/errors.hpp"
#include "torscan/exact_linalg.hpp"
#include "torscan/rng.hpp"

namespace torscan {

// ---------------------------------------------------------------------------
// Estimator parameter/result types
// ---------------------------------------------------------------------------

struct SketchParams {
  int s = 0;  // left sketch size (rows of M); 0 lets callers pick adaptively
  int t = 0;  // right sketch size (cols of M)
  std::int64_t p = 2;
  double delta = 0.05;  // failure probability target
  std::uint64_t seed = 0;
};

enum class ProbeKind { auto_select, hadamard, rademacher };

struct ChebParams {
  int s = 100;        // probe vectors
  int m = 64;         // polynomial degree
  double theta = 0.5; // step threshold in (0, 1)
  std::uint64_t seed = 0;
  ProbeKind probe = ProbeKind::auto_select;
  int probe_offset = 0;  // index of the first probe stream; lets one logical
                         // run be split into batches that merge exactly
};

enum class RankMethod {
  exact_rational,
  exact_ff,
  sketch_ff,
  stochastic_chebyshev,
  emulated_pipeline,
};

inline const char* rank_method_name(RankMethod m) {
  switch (m) {
    case RankMethod::exact_rational: return "exact_rational";
    case RankMethod::exact_ff: return "exact_ff";
    case RankMethod::sketch_ff: return "sketch_ff";
    case RankMethod::stochastic_chebyshev: return "stochastic_chebyshev";
    case RankMethod::emulated_pipeline: return "emulated_pipeline";
  }
  return "unknown";
}

struct RankEstimate {
  double value = 0.0;  // raw estimator output; the stochastic method can dip
                       // marginally below zero for rank-0 input
  RankMethod method = RankMethod::exact_rational;
  std::int64_t prime = 0;  // 0 = real field
  SketchParams sketch{};   // snapshot of the sizes actually used
  ChebParams cheb{};

  std::int64_t as_rank() const {
    return std::max<std::int64_t>(0, std::llround(value));
  }
};

// ---------------------------------------------------------------------------
// Uniform F_p vectors
// ---------------------------------------------------------------------------

// Entries i.i.d. uniform over the canonical residue set; fully determined by
// the stream, hence by (seed, stream index).
inline FpVector sample_fp_vector(std::size_t n, std::int64_t p,
                                 rng::Stream& stream) {
  require_prime(p);
  FpVector v(p, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t r =
        static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(p)));
    v.set(i, p > 2 && r > (p - 1) / 2 ? r - p : r);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Method 3: finite-field rank sketching (M = U A V)
// ---------------------------------------------------------------------------

namespace detail {

// Left/right sketch vectors keyed only by (seed, index): enlarging s or t
// extends M by new rows/columns without disturbing existing ones.
inline FpVector sketch_u(std::size_t n, std::int64_t p, std::uint64_t seed,
                         int i) {
  rng::Stream stream(seed, rng::left_vector_stream(i));
  return sample_fp_vector(n, p, stream);
}
inline FpVector sketch_v(std::size_t n, std::int64_t p, std::uint64_t seed,
                         int j) {
  rng::Stream stream(seed, rng::right_vector_stream(j));
  return sample_fp_vector(n, p, stream);
}

}  // namespace detail

// Compressed matrix M with M_ij = u_i^T A v_j over F_p.
inline FpMatrix sketch_compress(const FpMatrix& a, int s, int t,
                                std::uint64_t seed) {
  const std::int64_t p = a.modulus();
  std::vector<FpVector> av;
  av.reserve(static_cast<std::size_t>(t));
  for (int j = 0; j < t; ++j)
    av.push_back(a.apply(detail::sketch_v(a.cols(), p, seed, j)));

  FpMatrix m(p, static_cast<std::size_t>(s), static_cast<std::size_t>(t));
  for (int i = 0; i < s; ++i) {
    const FpVector u = detail::sketch_u(a.rows(), p, seed, i);
    for (int j = 0; j < t; ++j) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < u.size(); ++k)
        acc = fp_balance(acc + u[k] * av[static_cast<std::size_t>(j)][k], p);
      m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), acc);
    }
  }
  return m;
}

inline RankEstimate sketch_rank_ff(const FpMatrix& a,
                                   const SketchParams& params) {
  if (params.s < 1 || params.t < 1)
    throw Error("sketch sizes s, t must be >= 1");
  const FpMatrix m = sketch_compress(a, params.s, params.t, params.seed);
  RankEstimate est;
  est.value = static_cast<double>(rank_ff(m));
  est.method = RankMethod::sketch_ff;
  est.prime = a.modulus();
  est.sketch = params;
  est.sketch.p = a.modulus();
  return est;
}

// The guarantee pad: ceil(log_p(1/delta)) + 1 extra rows/columns beyond the
// rank to be captured.
inline int sketch_pad(std::int64_t p, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw Error("delta must lie in (0, 1)");
  const double raw = std::log(1.0 / delta) / std::log(static_cast<double>(p));
  return static_cast<int>(std::ceil(raw)) + 1;
}

// Sizes s = t = r_upper + pad with r_upper doubled until the sketched rank
// stops increasing AND fits inside the current bound: an estimate still at or
// above r_upper means the sketch may be saturated, so the guarantee pad is
// not yet in effect. Same seed throughout, so each round extends the previous
// M and the estimate is monotone.
inline RankEstimate sketch_rank_ff_adaptive(const FpMatrix& a, double delta,
                                            std::uint64_t seed) {
  const std::int64_t p = a.modulus();
  const int pad = sketch_pad(p, delta);
  const int cap = static_cast<int>(std::min(a.rows(), a.cols()));

  std::int64_t prev = -1;
  int r_upper = 1;
  for (;;) {
    SketchParams params;
    params.s = params.t = r_upper + pad;
    params.p = p;
    params.delta = delta;
    params.seed = seed;
    RankEstimate est = sketch_rank_ff(a, params);
    const std::int64_t r_hat = est.as_rank();
    if ((r_hat <= r_upper && r_hat == prev) || r_upper >= cap) return est;
    prev = r_hat;
    r_upper = std::min(2 * r_upper, cap);
  }
}

// ---------------------------------------------------------------------------
// Method 2: stochastic Chebyshev rank estimation over R
// ---------------------------------------------------------------------------

// Chebyshev coefficients (Jackson-damped) of the symmetric step
// h(x) = 1 for |x| >= theta, 0 otherwise, on [-1, 1]. The symmetric step is
// the rank indicator for symmetric matrices: negative eigenvalues count too.
inline std::vector<double> chebyshev_step_coeffs(int m, double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw InvalidThreshold("theta must lie in (0, 1)");
  if (m < 0) throw Error("degree must be >= 0");

  const double pi = 3.14159265358979323846;
  const double phi = std::acos(theta);
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  c[0] = 2.0 * phi / pi;
  for (int j = 1; j <= m; ++j) {
    if (j % 2 != 0) continue;  // odd terms vanish for an even function
    c[static_cast<std::size_t>(j)] = (4.0 / pi) * std::sin(j * phi) / j;
  }

  // Jackson damping quenches the Gibbs overshoot near the step.
  const double alpha = pi / (m + 2);
  const double cot_alpha = std::cos(alpha) / std::sin(alpha);
  for (int j = 0; j <= m; ++j) {
    const double g =
        ((m - j + 2) * std::cos(j * alpha) + std::sin(j * alpha) * cot_alpha) /
        (m + 2);
    c[static_cast<std::size_t>(j)] *= g;
  }
  return c;
}

// Value of the damped expansion at a point (reference for tests and for
// choosing thresholds).
inline double chebyshev_step_eval(const std::vector<double>& coeffs,
                                  double x) {
  double t_prev = 1.0, t_cur = x, acc = coeffs[0];
  if (coeffs.size() > 1) acc += coeffs[1] * x;
  for (std::size_t j = 2; j < coeffs.size(); ++j) {
    const double t_next = 2.0 * x * t_cur - t_prev;
    acc += coeffs[j] * t_next;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return acc;
}

namespace detail {

// Deterministic pairwise sum with floor-midpoint splits. Concatenating two
// runs of equal length reproduces the halves' sums bitwise, which is what
// makes the estimator exactly linear in the probe data.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo,
                           std::size_t hi) {
  const std::size_t len = hi - lo;
  if (len == 0) return 0.0;
  if (len == 1) return v[lo];
  const std::size_t mid = lo + len / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline Eigen::VectorXd make_probe(std::size_t n, ProbeKind kind,
                                  std::uint64_t seed, int index) {
  rng::Stream stream(seed, rng::probe_stream(index));
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  if (kind == ProbeKind::hadamard) {
    // signed column of the Sylvester-Hadamard matrix: entries +-1, and a
    // uniformly random column index makes E[u u^T] = I
    const std::uint64_t col = stream.below(n);
    const double sign = (stream.next() & 1) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int bits = std::popcount(i & col);
      u[static_cast<Eigen::Index>(i)] = sign * ((bits & 1) ? -1.0 : 1.0);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      u[static_cast<Eigen::Index>(i)] = (stream.next() & 1) ? 1.0 : -1.0;
  }
  return u;
}

inline double spectral_norm_estimate(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd v(n);
  rng::Stream stream(0x5eed, 0);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = stream.uniform01() + 0.25;
  v.normalize();
  double norm = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    Eigen::VectorXd w = a * v;
    norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
  }
  return norm;
}

}  // namespace detail

// Hutchinson-style estimator of rank(A) = tr(h(A)) via the three-term
// Chebyshev recurrence on matrix-vector products. A must be symmetric with
// spectrum in [-1, 1] and eigenvalues separated from theta.
inline RankEstimate stochastic_rank_real(const Eigen::MatrixXd& a,
                                         const ChebParams& params) {
  if (a.rows() != a.cols() || (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NotSymmetric("stochastic rank estimation needs a symmetric matrix");
  if (params.s < 1) throw Error("probe count must be >= 1");
  const std::size_t n = static_cast<std::size_t>(a.rows());
  if (detail::spectral_norm_estimate(a) > 1.0 + 1e-9)
    throw NormTooLarge("spectral norm estimate exceeds 1");

  ProbeKind kind = params.probe;
  if (kind == ProbeKind::auto_select)
    kind = std::has_single_bit(n) ? ProbeKind::hadamard : ProbeKind::rademacher;
  if (kind == ProbeKind::hadamard && !std::has_single_bit(n))
    throw Error("hadamard probes need a power-of-two dimension");

  const std::vector<double> c = chebyshev_step_coeffs(params.m, params.theta);

  std::vector<double> terms(static_cast<std::size_t>(params.s));
  for (int i = 0; i < params.s; ++i) {
    const Eigen::VectorXd u =
        detail::make_probe(n, kind, params.seed, params.probe_offset + i);
    Eigen::VectorXd t_prev = u;
    Eigen::VectorXd t_cur = a * u;
    double acc = c[0] * u.dot(t_prev);
    if (params.m >= 1) acc += c[1] * u.dot(t_cur);
    for (int j = 2; j <= params.m; ++j) {
      Eigen::VectorXd t_next = 2.0 * (a * t_cur) - t_prev;
      acc += c[static_cast<std::size_t>(j)] * u.dot(t_next);
      t_prev.swap(t_cur);
      t_cur.swap(t_next);
    }
    terms[static_cast<std::size_t>(i)] = acc / params.s;
  }

  RankEstimate est;
  est.value = detail::pairwise_sum(terms, 0, terms.size());
  est.method = RankMethod::stochastic_chebyshev;
  est.prime = 0;
  est.cheb = params;
  est.cheb.probe = kind;
  return est;
}

}  // namespace torscan
