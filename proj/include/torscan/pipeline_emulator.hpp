#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "torscan/errors.hpp"
#include "torscan/exact_linalg.hpp"
#include "torscan/rank_sketch.hpp"
#include "torscan/rng.hpp"
#include "torscan/simplicial_complex.hpp"

namespace torscan {

enum class NoiseModel { none, uniform, gaussian_clipped };
enum class NormalizationMode { non_oracle, oracle };

struct EmulatorConfig {
  // Additive precision budget for a recovered integer entry after rescaling;
  // must stay below 1/2 for nearest-integer rounding to be exact. The default
  // sits slightly inside the budget so seeded noise never trips the
  // ambiguity guard.
  double epsilon_prime = 0.45;
  NoiseModel noise_model = NoiseModel::none;
  NormalizationMode normalization_mode = NormalizationMode::non_oracle;
  std::uint64_t seed = 0;  // noise streams only; sketch vectors use SketchParams::seed
};

struct PipelineTrace {
  double frobenius_sq_lower = 0.0;  // ||d_r||_F^2
  double frobenius_sq_upper = 0.0;  // ||d_{r+1}||_F^2 (0 when absent)
  double normalization_factor = 0.0;
  double kappa = 1.0;
  double epsilon_overlap = 0.0;  // per-overlap additive noise bound used
  Eigen::MatrixXd overlaps;      // s x t
  FpMatrix recovered;            // s x t over F_p
  std::vector<double> u_norms, v_norms;
  double C = 0.0;                 // max over all single vector norms
  double max_norm_product = 0.0;  // max_i ||u_i|| * max_j ||v_j||
  std::int64_t p = 2;
  int s = 0, t = 0;
  std::uint64_t seed = 0;
  std::int64_t rank = 0;

  PipelineTrace() : recovered(2, 0, 0) {}
};

// Ratio of the largest to the smallest nonzero singular value; 1 for the zero
// matrix. The nullity comes from exact rational elimination, so the split
// between zero and nonzero spectrum never rests on a floating threshold.
inline double condition_number(const IntMatrix& a) {
  if (!a.is_symmetric())
    throw NotSymmetric("condition number defined here for symmetric input");
  const std::size_t n = a.rows();
  if (n == 0 || a.is_zero()) return 1.0;

  const std::int64_t nullity =
      static_cast<std::int64_t>(n) - rank_exact_rational(a);
  if (nullity == static_cast<std::int64_t>(n)) return 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.to_real());
  std::vector<double> sv(n);
  for (std::size_t i = 0; i < n; ++i)
    sv[i] = std::abs(solver.eigenvalues()[static_cast<Eigen::Index>(i)]);
  std::sort(sv.begin(), sv.end());
  return sv.back() / sv[static_cast<std::size_t>(nullity)];
}

// Floating-point kernel dimension of a symmetric integer matrix; diagnostic
// only, never used for verdicts.
inline std::int64_t kernel_dim_float(const IntMatrix& a, double tol = 1e-9) {
  if (!a.is_symmetric()) throw NotSymmetric("expected symmetric input");
  if (a.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.to_real());
  std::int64_t k = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (std::abs(solver.eigenvalues()[i]) <= tol) ++k;
  return k;
}

// Normalized overlap u^T Delta v / (||u|| ||v|| kappa) with bounded additive
// noise; exact when the model is none.
inline double noisy_overlap(const IntMatrix& delta, const FpVector& u,
                            const FpVector& v, double kappa, double eps,
                            NoiseModel model, rng::Stream& stream) {
  if (u.size() != delta.rows() || v.size() != delta.cols())
    throw Error("overlap: dimension mismatch");
  const double norm_u = std::sqrt(static_cast<double>(u.norm_sq()));
  const double norm_v = std::sqrt(static_cast<double>(v.norm_sq()));
  if (norm_u == 0.0 || norm_v == 0.0)
    throw ZeroVector("overlap of a zero vector is undefined");

  __int128 acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    std::int64_t row = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      row += delta(i, j) * v[j];
    acc += static_cast<__int128>(u[i]) * row;
  }
  if (acc > std::numeric_limits<std::int64_t>::max() ||
      acc < std::numeric_limits<std::int64_t>::min())
    throw Overflow("overlap exceeds 64-bit range");

  double value = static_cast<double>(static_cast<std::int64_t>(acc)) /
                 (norm_u * norm_v * kappa);
  switch (model) {
    case NoiseModel::none:
      break;
    case NoiseModel::uniform:
      value += stream.uniform_symmetric(eps);
      break;
    case NoiseModel::gaussian_clipped: {
      const double eta = stream.normal() * (eps / 3.0);
      value += std::clamp(eta, -eps, eps);
      break;
    }
  }
  return value;
}

// Undo the pipeline normalization, round to the nearest integer and reduce
// mod p. Exact whenever the accumulated additive error stays below 1/2 after
// rescaling.
inline std::int64_t recover_entry(double overlap, double norm_u, double norm_v,
                                  double kappa, std::int64_t p) {
  require_prime(p);
  const double scaled = overlap * norm_u * norm_v * kappa;
  const double frac = scaled - std::floor(scaled);
  if (std::abs(frac - 0.5) < 1e-9)
    throw AmbiguousRounding("scaled overlap within 1e-9 of a half-integer");
  return fp_balance(std::llround(scaled), p);
}

namespace detail {

// Boundary operator as used by the pipeline over F_p: for p = 2 the signed
// entries collapse to the 0/1 incidence pattern; for odd p the balanced
// representation keeps the integer matrix unchanged.
inline IntMatrix boundary_for_prime(const SimplicialComplex& k, int r,
                                    std::int64_t p) {
  const IntMatrix b = boundary_matrix(k, r);
  return p == 2 ? b.abs() : b;
}

}  // namespace detail

// Integer matrix whose mod-p reduction is Delta_r^{mod p}, built from the
// prime-adjusted boundary operators so overlaps, kappa and recovery all see
// one consistent array.
inline IntMatrix laplacian_for_prime(const SimplicialComplex& k, int r,
                                     std::int64_t p) {
  require_prime(p);
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("laplacian needs 0 <= r <= dim");
  const std::size_t n = k.count(r);
  IntMatrix acc(n, n);
  if (r >= 1) {
    const IntMatrix b = detail::boundary_for_prime(k, r, p);
    acc = acc + b.transposed() * b;
  }
  if (r + 1 <= k.dim()) {
    const IntMatrix b = detail::boundary_for_prime(k, r + 1, p);
    acc = acc + b * b.transposed();
  }
  return acc;
}

// Classical execution of the torsion-detection pipeline: normalization,
// condition-number rescaling, noisy overlap estimation, entry recovery with
// rounding and mod p, then a finite-field rank of the recovered sketch.
inline std::pair<RankEstimate, PipelineTrace> emulate_detection(
    const SimplicialComplex& k, int r, std::int64_t p, SketchParams params,
    const EmulatorConfig& cfg) {
  require_prime(p);
  if (r < 1 || r > k.dim())
    throw DimensionOutOfRange("emulation needs 1 <= r <= dim");
  if (!(cfg.epsilon_prime >= 0.0 && cfg.epsilon_prime < 0.5))
    throw Error("epsilon_prime must lie in [0, 1/2)");

  const std::size_t n = k.count(r);
  const IntMatrix delta = laplacian_for_prime(k, r, p);

  PipelineTrace trace;
  trace.p = p;
  trace.frobenius_sq_lower =
      static_cast<double>(detail::boundary_for_prime(k, r, p).frobenius_norm_sq());
  trace.frobenius_sq_upper =
      r + 1 <= k.dim()
          ? static_cast<double>(
                detail::boundary_for_prime(k, r + 1, p).frobenius_norm_sq())
          : 0.0;
  if (cfg.normalization_mode == NormalizationMode::oracle) {
    trace.normalization_factor = 2.0 * k.vertex_count() * (r + 1) * (r + 2);
  } else {
    trace.normalization_factor =
        trace.frobenius_sq_upper > 0.0
            ? 2.0 * trace.frobenius_sq_lower * trace.frobenius_sq_upper
            : 2.0 * trace.frobenius_sq_lower;
  }
  trace.kappa = condition_number(delta);

  if (params.s < 1 || params.t < 1)
    params.s = params.t = static_cast<int>(n) + sketch_pad(p, params.delta);
  params.p = p;
  trace.s = params.s;
  trace.t = params.t;
  trace.seed = params.seed;

  std::vector<FpVector> us, vs;
  us.reserve(static_cast<std::size_t>(params.s));
  vs.reserve(static_cast<std::size_t>(params.t));
  for (int i = 0; i < params.s; ++i)
    us.push_back(detail::sketch_u(n, p, params.seed, i));
  for (int j = 0; j < params.t; ++j)
    vs.push_back(detail::sketch_v(n, p, params.seed, j));

  for (const FpVector& u : us)
    trace.u_norms.push_back(std::sqrt(static_cast<double>(u.norm_sq())));
  for (const FpVector& v : vs)
    trace.v_norms.push_back(std::sqrt(static_cast<double>(v.norm_sq())));
  const double max_u =
      *std::max_element(trace.u_norms.begin(), trace.u_norms.end());
  const double max_v =
      *std::max_element(trace.v_norms.begin(), trace.v_norms.end());
  trace.C = std::max(max_u, max_v);
  trace.max_norm_product = max_u * max_v;

  const double scale = trace.kappa * max_u * max_v;
  trace.epsilon_overlap =
      (cfg.noise_model == NoiseModel::none || scale == 0.0)
          ? 0.0
          : cfg.epsilon_prime / scale;

  trace.overlaps = Eigen::MatrixXd::Zero(params.s, params.t);
  trace.recovered =
      FpMatrix(p, static_cast<std::size_t>(params.s),
               static_cast<std::size_t>(params.t));
  for (int i = 0; i < params.s; ++i) {
    for (int j = 0; j < params.t; ++j) {
      const std::size_t si = static_cast<std::size_t>(i);
      const std::size_t sj = static_cast<std::size_t>(j);
      // a zero random vector has no normalized state, but its overlaps are
      // identically zero, so recovery is immediate
      if (trace.u_norms[si] == 0.0 || trace.v_norms[sj] == 0.0) {
        trace.overlaps(i, j) = 0.0;
        trace.recovered.set(si, sj, 0);
        continue;
      }
      rng::Stream noise(cfg.seed, rng::overlap_noise_stream(i, j));
      const double overlap =
          noisy_overlap(delta, us[si], vs[sj], trace.kappa,
                        trace.epsilon_overlap, cfg.noise_model, noise);
      trace.overlaps(i, j) = overlap;
      try {
        trace.recovered.set(
            si, sj,
            recover_entry(overlap, trace.u_norms[si], trace.v_norms[sj],
                          trace.kappa, p));
      } catch (const AmbiguousRounding& e) {
        throw NoiseBudgetExceeded(std::string("overlap (") +
                                  std::to_string(i) + "," + std::to_string(j) +
                                  "): " + e.what());
      }
    }
  }

  trace.rank = rank_ff(trace.recovered);

  RankEstimate est;
  est.value = static_cast<double>(trace.rank);
  est.method = RankMethod::emulated_pipeline;
  est.prime = p;
  est.sketch = params;
  return {est, trace};
}

}  // namespace torscan
