#pragma once

// Full analysis of one model as a JSON document. Blocks that cannot be
// computed are written as {"status": "unavailable", "reason": CODE}.

#include <string>

#include "gaussgap/classical.hpp"
#include "gaussgap/gap.hpp"
#include "gaussgap/io.hpp"
#include "gaussgap/model.hpp"
#include "gaussgap/stationary.hpp"

namespace gaussgap {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitNoGap = 2 };

struct ReportOptions {
  bool include_matrices = true;
};

struct AnalysisReport {
  io::json doc;
  int exit_code = kExitOk;
  GapReport gaps;
};

namespace detail {

inline io::json unavailable(const std::string& reason) {
  return io::json{{"status", "unavailable"}, {"reason", reason}};
}

inline io::json finding_json(const Finding& f) {
  io::json j;
  j["kind"] = to_string(f.kind);
  if (f.kind == FindingKind::Unstable) {
    j["case"] = f.case_tag;
    j["eigenvalue"] = io::to_json(f.eigenvalue);
    j["eigenvector"] = io::to_json(f.vector);
    j["residual"] = f.residual;
  } else if (f.kind == FindingKind::CZKernel) {
    j["eigenvalue"] = f.eigenvalue.real();
    j["kernel_vector"] = io::to_json(f.vector);
    j["residual"] = f.residual;
  }
  return j;
}

}  // namespace detail

inline AnalysisReport run_report(const io::ParsedModel& parsed, const ReportOptions& opt = {}) {
  const GklsModel& model = parsed.model;
  AnalysisReport rep;
  io::json& doc = rep.doc;
  doc["version"] = io::kReportVersion;
  doc["model"] = {{"d", model.d}, {"m", model.m}};

  const auto val = validate(model);
  doc["validation"] = {{"hermitian_residual", val.hermitian_residual},
                       {"symmetric_residual", val.symmetric_residual},
                       {"kraus_rank", val.kraus_rank}};
  if (!val.ok()) throw Error(*val.failure, val.message);

  const DriftDiffusion dd = build_drift_diffusion(model);
  io::json drift;
  if (opt.include_matrices) {
    drift["z2d"] = io::to_json(dd.z2d);
    drift["c2d"] = io::to_json(dd.c2d);
  }
  drift["block_formula_residual"] = dd.block_formula_residual;
  doc["drift_diffusion"] = drift;

  rep.gaps = analyze_gaps(dd, model.zeta);
  const GapReport& g = rep.gaps;
  doc["stability"] = {{"stable", g.stability.stable},
                      {"abscissa", g.stability.abscissa},
                      {"eigenvalues", io::to_json(g.stability.eigenvalues)}};
  doc["cz"] = {{"eigenvalues", io::to_json(dd.cz_eigenvalues)},
               {"min_eig", dd.cz_min_eig},
               {"kraus_rank_full", kraus_rank_full(dd)}};

  if (g.stationary) {
    const StationaryData& st = *g.stationary;
    io::json s;
    s["mu"] = io::to_json(st.mu);
    s["S"] = io::to_json(st.s2d);
    s["det_s_tilde"] = st.det_s_tilde;
    s["s_tilde_min_eig"] = st.s_tilde_min_eig;
    s["sigma"] = io::to_json(st.sigma);
    s["faithful"] = st.faithful;
    s["unique"] = st.unique;
    if (opt.include_matrices) s["M"] = io::to_json(st.sympl_m);
    if (st.faithful) {
      s["nu"] = io::to_json(st.nu);
      s["S_breve"] = io::to_json(st.s_breve);
    } else {
      s["nu"] = detail::unavailable(std::string(to_string(ErrorCode::NotFaithful)));
      s["S_breve"] = detail::unavailable(std::string(to_string(ErrorCode::NotFaithful)));
    }
    s["residuals"] = {{"lyapunov", st.lyapunov_residual},
                      {"williamson", st.williamson_residual},
                      {"symplectic", st.symplectic_residual}};
    doc["stationary"] = s;
  } else {
    doc["stationary"] = detail::unavailable(g.stationary_unavailable);
  }

  if (g.gns) {
    doc["gns"] = {{"omega0", g.gns->omega0},
                  {"g", g.gns->g},
                  {"has_gap", g.gns->has_gap},
                  {"witness", io::to_json(g.gns->witness)},
                  {"route_gap", g.gns->route_gap},
                  {"dissipative_residual", g.gns->dissipative_residual}};
  } else {
    doc["gns"] = detail::unavailable(g.gns_unavailable);
  }
  if (g.kms) {
    doc["kms"] = {{"omega0_breve", g.kms->omega0_breve},
                  {"g_breve", g.kms->g_breve},
                  {"witness", io::to_json(g.kms->witness)},
                  {"kernel_min_eig", g.kms->kernel_min_eig},
                  {"kernel_nonsingular", g.kms->kernel_nonsingular}};
  } else {
    doc["kms"] = detail::unavailable(g.kms_unavailable);
  }
  doc["has_gns_gap"] = g.has_gns_gap;
  doc["finding"] = detail::finding_json(g.finding);

  if (parsed.preset) {
    const auto& p = *parsed.preset;
    try {
      const auto cf = one_dim_closed_forms(p.mu2, p.lambda2, p.omega, p.kappa);
      io::json c = {{"gamma", cf.gamma},
                    {"g", cf.g},
                    {"g_breve", cf.g_breve},
                    {"sigma", cf.sigma},
                    {"exists_faithful", cf.exists_faithful}};
      if (g.gns) c["g_abs_diff"] = std::abs(cf.g - g.gns->g);
      if (g.kms) c["g_breve_abs_diff"] = std::abs(cf.g_breve - g.kms->g_breve);
      doc["closed_form"] = c;
    } catch (const Error& e) {
      doc["closed_form"] = detail::unavailable(std::string(to_string(e.code())));
    }
  } else {
    doc["closed_form"] = detail::unavailable("NoPreset");
  }

  try {
    const OuGenerator ou = restrict_to_ou(model);
    io::json c = {{"Q", io::to_json(ou.q_mat)}, {"A", io::to_json(ou.a_mat)}};
    try {
      c["gap"] = classical_gap(ou);
    } catch (const Error& e) {
      c["gap"] = detail::unavailable(std::string(to_string(e.code())));
    }
    doc["classical"] = c;
  } catch (const Error& e) {
    doc["classical"] = detail::unavailable(std::string(to_string(e.code())));
  }

  doc["diagnostics"] = g.diagnostics;
  rep.exit_code = g.finding.kind == FindingKind::GapExists && g.has_gns_gap ? kExitOk : kExitNoGap;
  return rep;
}

}  // namespace gaussgap
