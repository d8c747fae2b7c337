#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "torscan/errors.hpp"
#include "torscan/exact_linalg.hpp"
#include "torscan/pipeline_emulator.hpp"
#include "torscan/rank_sketch.hpp"
#include "torscan/simplicial_complex.hpp"

namespace torscan {

// ---------------------------------------------------------------------------
// Homology dimensions over a field
// ---------------------------------------------------------------------------
//
// dim H_r = |S_r| - rank d_r - rank d_{r+1} holds over any field; this is the
// verdict-authoritative route. The Laplacian-kernel route mirrors the
// quantum pipeline and is reported alongside, because over F_p the two can
// genuinely differ (the bilinear form degenerates mod p).

inline std::int64_t dim_homology(const SimplicialComplex& k, int r) {
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("homology order outside [0, dim]");
  std::int64_t rank_lower = 0, rank_upper = 0;
  if (r >= 1) rank_lower = rank_exact_rational(boundary_matrix(k, r));
  if (r + 1 <= k.dim())
    rank_upper = rank_exact_rational(boundary_matrix(k, r + 1));
  return static_cast<std::int64_t>(k.count(r)) - rank_lower - rank_upper;
}

inline std::int64_t dim_homology(const SimplicialComplex& k, int r,
                                 std::int64_t p) {
  require_prime(p);
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("homology order outside [0, dim]");
  std::int64_t rank_lower = 0, rank_upper = 0;
  if (r >= 1) rank_lower = rank_ff(mod_reduce(boundary_matrix(k, r), p));
  if (r + 1 <= k.dim())
    rank_upper = rank_ff(mod_reduce(boundary_matrix(k, r + 1), p));
  return static_cast<std::int64_t>(k.count(r)) - rank_lower - rank_upper;
}

inline std::int64_t dim_homology_laplacian(const SimplicialComplex& k, int r) {
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("homology order outside [0, dim]");
  const IntMatrix lap = laplacian(k, r);
  return static_cast<std::int64_t>(k.count(r)) - rank_exact_rational(lap);
}

inline std::int64_t dim_homology_laplacian(const SimplicialComplex& k, int r,
                                           std::int64_t p) {
  require_prime(p);
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("homology order outside [0, dim]");
  const IntMatrix lap = laplacian(k, r);
  return static_cast<std::int64_t>(k.count(r)) - rank_ff(mod_reduce(lap, p));
}

// ---------------------------------------------------------------------------
// Universal-coefficient verification
// ---------------------------------------------------------------------------

struct UctBreakdown {
  bool holds = false;
  std::int64_t dim_fp = 0;   // dim H_r(F_p) via rank-nullity
  std::int64_t beta_r = 0;   // free rank of H_r(Z)
  std::int64_t t_r = 0;      // torsion summands of H_r divisible by p
  std::int64_t t_r_minus_1 = 0;
};

// Checks dim H_r(F_p) = beta_r + t_r + t_{r-1} against the Smith-form oracle.
inline UctBreakdown verify_uct(const SimplicialComplex& k, int r,
                               std::int64_t p) {
  require_prime(p);
  UctBreakdown out;
  out.dim_fp = dim_homology(k, r, p);

  const auto count_divisible = [p](const HomologyGroup& h) {
    std::int64_t n = 0;
    for (std::int64_t f : h.torsion_factors)
      if (f % p == 0) ++n;
    return n;
  };

  const HomologyGroup h_r = homology_over_Z(k, r);
  out.beta_r = h_r.betti;
  out.t_r = count_divisible(h_r);
  out.t_r_minus_1 = r >= 1 ? count_divisible(homology_over_Z(k, r - 1)) : 0;
  out.holds = out.dim_fp == out.beta_r + out.t_r + out.t_r_minus_1;
  return out;
}

// ---------------------------------------------------------------------------
// Torsion detection
// ---------------------------------------------------------------------------

enum class DetectMethod { exact, sketch, emulate };

inline const char* detect_method_name(DetectMethod m) {
  switch (m) {
    case DetectMethod::exact: return "exact";
    case DetectMethod::sketch: return "sketch";
    case DetectMethod::emulate: return "emulate";
  }
  return "unknown";
}

// One finite-field cell of the sweep. dim_fp is what the chosen method
// produced and is what the verdict uses; the two exact routes ride along so
// any disagreement between them is visible, never hidden.
struct FieldDim {
  std::int64_t p = 0;
  std::int64_t dim_fp = 0;
  RankMethod method = RankMethod::exact_ff;
  std::uint64_t seed = 0;
  int s = 0, t = 0;  // sketch sizes actually used (0 for exact)
  std::int64_t dim_boundary_exact = 0;   // rank-nullity on boundary matrices
  std::int64_t dim_laplacian_exact = 0;  // |S_r| - rank_ff(Delta_r mod p)
  bool routes_agree = false;
};

struct HomologySummaryPair {
  HomologyGroup at_r;
  HomologyGroup at_r_minus_1;  // zero group when r = 0
};

struct TorsionReport {
  int order = 0;
  std::int64_t dim_real = 0;
  DetectMethod method = DetectMethod::exact;
  std::uint64_t seed = 0;
  std::vector<FieldDim> fields;  // sorted by p
  bool torsion_detected = false;
  std::vector<std::int64_t> detected_primes;
  std::vector<int> implicated_orders;  // {r, r-1}: the identity cannot split them
  std::optional<HomologySummaryPair> oracle_comparison;
};

namespace detail {

inline std::int64_t sketched_boundary_rank(const SimplicialComplex& k, int r,
                                           std::int64_t p,
                                           const SketchParams& params, int& s_used,
                                           int& t_used) {
  const FpMatrix b = mod_reduce(boundary_matrix(k, r), p);
  RankEstimate est;
  if (params.s >= 1 && params.t >= 1) {
    SketchParams local = params;
    local.p = p;
    est = sketch_rank_ff(b, local);
  } else {
    // Verdict-grade default: a report aggregates many rank sketches across
    // primes and orders, so each one gets a far smaller slice of the failure
    // budget than a standalone estimate would. The extra rows/columns this
    // buys are negligible at these sizes.
    est = sketch_rank_ff_adaptive(b, params.delta * 1e-6, params.seed);
  }
  s_used = std::max(s_used, est.sketch.s);
  t_used = std::max(t_used, est.sketch.t);
  return est.as_rank();
}

}  // namespace detail

// Field sweep at a fixed order. dim over R is always exact; each F_p entry is
// produced by the requested method and compared against both exact routes.
inline TorsionReport detect_torsion(const SimplicialComplex& k, int r,
                                    const std::vector<std::int64_t>& primes,
                                    DetectMethod method,
                                    const SketchParams& sketch_params = {},
                                    const EmulatorConfig& emu_cfg = {},
                                    bool with_oracle = false) {
  if (primes.empty()) throw NotPrime("prime list is empty");
  for (std::int64_t p : primes) require_prime(p);
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("homology order outside [0, dim]");

  std::vector<std::int64_t> ps = primes;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  TorsionReport report;
  report.order = r;
  report.method = method;
  report.seed = sketch_params.seed;
  report.dim_real = dim_homology(k, r);

  for (std::int64_t p : ps) {
    FieldDim cell;
    cell.p = p;
    cell.seed = sketch_params.seed;
    cell.dim_boundary_exact = dim_homology(k, r, p);
    cell.dim_laplacian_exact = dim_homology_laplacian(k, r, p);

    switch (method) {
      case DetectMethod::exact:
        cell.dim_fp = cell.dim_boundary_exact;
        cell.method = RankMethod::exact_ff;
        break;
      case DetectMethod::sketch: {
        std::int64_t rank_lower = 0, rank_upper = 0;
        if (r >= 1)
          rank_lower = detail::sketched_boundary_rank(k, r, p, sketch_params,
                                                      cell.s, cell.t);
        if (r + 1 <= k.dim())
          rank_upper = detail::sketched_boundary_rank(k, r + 1, p,
                                                      sketch_params, cell.s,
                                                      cell.t);
        cell.dim_fp =
            static_cast<std::int64_t>(k.count(r)) - rank_lower - rank_upper;
        cell.method = RankMethod::sketch_ff;
        break;
      }
      case DetectMethod::emulate: {
        auto [est, trace] = emulate_detection(k, r, p, sketch_params, emu_cfg);
        cell.dim_fp = static_cast<std::int64_t>(k.count(r)) - est.as_rank();
        cell.method = RankMethod::emulated_pipeline;
        cell.s = trace.s;
        cell.t = trace.t;
        break;
      }
    }
    cell.routes_agree = cell.dim_boundary_exact == cell.dim_laplacian_exact;
    report.fields.push_back(cell);
  }

  for (const FieldDim& cell : report.fields)
    if (cell.dim_fp > report.dim_real)
      report.detected_primes.push_back(cell.p);
  report.torsion_detected = !report.detected_primes.empty();
  if (report.torsion_detected) {
    report.implicated_orders.push_back(r);
    if (r >= 1) report.implicated_orders.push_back(r - 1);
  }

  if (with_oracle) {
    HomologySummaryPair oracle;
    oracle.at_r = homology_over_Z(k, r);
    if (r >= 1) oracle.at_r_minus_1 = homology_over_Z(k, r - 1);
    report.oracle_comparison = oracle;
  }
  return report;
}

// Human-readable rendering of a report.
inline std::string format_report(const TorsionReport& report) {
  std::ostringstream out;
  out << "order r = " << report.order
      << "  method = " << detect_method_name(report.method)
      << "  seed = " << report.seed << "\n";
  out << "dim H_r(R) = " << report.dim_real << "\n";
  for (const FieldDim& f : report.fields) {
    out << "  p = " << f.p << ": dim H_r(F_p) = " << f.dim_fp << " ["
        << rank_method_name(f.method) << "]"
        << "  boundary-exact = " << f.dim_boundary_exact
        << "  laplacian-exact = " << f.dim_laplacian_exact
        << (f.routes_agree ? "" : "  (routes disagree)") << "\n";
  }
  if (report.torsion_detected) {
    out << "verdict: torsion detected at order pair {" << report.order << ", "
        << report.order - 1 << "} for primes {";
    for (std::size_t i = 0; i < report.detected_primes.size(); ++i)
      out << (i ? "," : "") << report.detected_primes[i];
    out << "}\n";
  } else {
    out << "verdict: no torsion detected\n";
  }
  if (report.oracle_comparison) {
    const auto render = [&](const HomologyGroup& h) {
      std::ostringstream s;
      s << "Z^" << h.betti;
      for (std::int64_t f : h.torsion_factors) s << " + Z_" << f;
      return s.str();
    };
    out << "oracle: H_" << report.order << "(Z) = "
        << render(report.oracle_comparison->at_r);
    if (report.order >= 1)
      out << ", H_" << report.order - 1 << "(Z) = "
          << render(report.oracle_comparison->at_r_minus_1);
    out << "\n";
  }
  return out.str();
}

}  // namespace torscan
