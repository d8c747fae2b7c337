#pragma once

#include <cmath>
#include <string>

#include "json.hpp"
#include "torscan/norm_bounds.hpp"
#include "torscan/pipeline_emulator.hpp"
#include "torscan/torsion_detector.hpp"

namespace torscan {

using Json = nlohmann::ordered_json;

// Numeric results carry their provenance: method tag and seed. Rerunning with
// the same flags reproduces every value byte for byte.
inline Json tagged_number(double value, const std::string& method,
                          std::uint64_t seed) {
  return Json{{"value", value}, {"method", method}, {"seed", seed}};
}
inline Json tagged_number(std::int64_t value, const std::string& method,
                          std::uint64_t seed) {
  return Json{{"value", value}, {"method", method}, {"seed", seed}};
}

inline Json to_json(const HomologyGroup& h) {
  return Json{{"betti", h.betti}, {"torsion_factors", h.torsion_factors}};
}

inline Json to_json(const TorsionReport& r) {
  Json fields = Json::array();
  for (const FieldDim& f : r.fields) {
    Json cell{{"p", f.p},
              {"dim", tagged_number(f.dim_fp, rank_method_name(f.method),
                                    f.seed)},
              {"dim_boundary_exact", f.dim_boundary_exact},
              {"dim_laplacian_exact", f.dim_laplacian_exact},
              {"routes_agree", f.routes_agree}};
    if (f.s > 0) {
      cell["s"] = f.s;
      cell["t"] = f.t;
    }
    fields.push_back(cell);
  }
  Json verdict{{"torsion_detected", r.torsion_detected},
               {"primes", r.detected_primes},
               {"implicated_orders", r.implicated_orders}};
  Json out{{"order", r.order},
           {"method", detect_method_name(r.method)},
           {"seed", r.seed},
           {"dim_real", tagged_number(r.dim_real, "exact_rational", r.seed)},
           {"fields", fields},
           {"verdict", verdict}};
  if (r.oracle_comparison) {
    out["oracle"] = Json{{"h_r", to_json(r.oracle_comparison->at_r)}};
    if (r.order >= 1)
      out["oracle"]["h_r_minus_1"] = to_json(r.oracle_comparison->at_r_minus_1);
  }
  return out;
}

inline Json to_json(const PipelineTrace& t) {
  Json u = Json::array(), v = Json::array();
  for (double x : t.u_norms) u.push_back(x);
  for (double x : t.v_norms) v.push_back(x);
  Json overlaps = Json::array();
  for (int i = 0; i < t.overlaps.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < t.overlaps.cols(); ++j) row.push_back(t.overlaps(i, j));
    overlaps.push_back(row);
  }
  Json recovered = Json::array();
  for (std::size_t i = 0; i < t.recovered.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < t.recovered.cols(); ++j)
      row.push_back(t.recovered(i, j));
    recovered.push_back(row);
  }
  return Json{{"norms",
               Json{{"u", u},
                    {"v", v},
                    {"boundary_frobenius_sq",
                     Json::array({t.frobenius_sq_lower, t.frobenius_sq_upper})}}},
              {"kappa", t.kappa},
              {"factor", t.normalization_factor},
              {"C", t.C},
              {"max_norm_product", t.max_norm_product},
              {"epsilon_overlap", t.epsilon_overlap},
              {"s", t.s},
              {"t", t.t},
              {"p", t.p},
              {"seed", t.seed},
              {"rank", t.rank},
              {"overlaps", overlaps},
              {"recovered", recovered}};
}

inline Json to_json(const UctBreakdown& u) {
  return Json{{"holds", u.holds},
              {"dim_fp", u.dim_fp},
              {"beta_r", u.beta_r},
              {"t_r", u.t_r},
              {"t_r_minus_1", u.t_r_minus_1}};
}

inline Json to_json(const BoundSweepRow& r) {
  Json out{{"N", r.n}, {"p", r.p}, {"S", r.s}};
  if (std::isnan(r.cantelli))
    out["cantelli"] = nullptr;
  else
    out["cantelli"] = r.cantelli;
  out["berry_esseen"] = r.berry_esseen;
  out["empirical"] = r.empirical;
  out["trials"] = r.trials;
  out["seed"] = r.seed;
  return out;
}

}  // namespace torscan
