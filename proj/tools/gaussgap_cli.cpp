// gaussgap: command line front end.
//
// Exit codes: 0 success, 2 the analysis finished but found no gap, 1 error.

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaussgap/gaussgap.hpp"

namespace {

using namespace gaussgap;
using io::json;

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

CVec zero_zeta(Index d) { return CVec::Zero(d); }

int cmd_analyze(const std::string& path, bool as_json) {
  const auto parsed = io::parse_model_file(path);
  const auto rep = run_report(parsed);
  if (as_json) {
    print_json(rep.doc);
    return rep.exit_code;
  }
  const auto& d = rep.doc;
  std::cout << "stable:      " << d["stability"]["stable"] << "  (abscissa "
            << d["stability"]["abscissa"] << ")\n";
  std::cout << "C_Z > 0:     " << d["cz"]["kraus_rank_full"] << "\n";
  if (d["stationary"].contains("S")) {
    std::cout << "sigma:       " << d["stationary"]["sigma"] << "\n";
    std::cout << "det(S+iJ):   " << d["stationary"]["det_s_tilde"] << "\n";
    std::cout << "faithful:    " << d["stationary"]["faithful"] << "\n";
  }
  if (d["gns"].contains("g")) std::cout << "g (GNS):     " << d["gns"]["g"] << "\n";
  if (d["kms"].contains("g_breve")) std::cout << "g (KMS):     " << d["kms"]["g_breve"] << "\n";
  std::cout << "finding:     " << d["finding"]["kind"].get<std::string>() << "\n";
  for (const auto& msg : d["diagnostics"]) std::cout << "note:        " << msg.get<std::string>() << "\n";
  return rep.exit_code;
}

int cmd_gap(const std::string& path, const std::string& mode) {
  const auto parsed = io::parse_model_file(path);
  const DriftDiffusion dd = build_drift_diffusion(parsed.model);
  const GapReport rep = analyze_gaps(dd, parsed.model.zeta);
  json out;
  bool ok = true;
  if (mode == "gns" || mode == "both") {
    if (rep.gns) {
      out["gns"] = {{"omega0", rep.gns->omega0}, {"g", rep.gns->g}, {"has_gap", rep.gns->has_gap}};
      ok = ok && rep.gns->has_gap;
    } else {
      out["gns"] = {{"status", "unavailable"}, {"reason", rep.gns_unavailable}};
      ok = false;
    }
  }
  if (mode == "kms" || mode == "both") {
    if (rep.kms) {
      out["kms"] = {{"omega0_breve", rep.kms->omega0_breve},
                    {"g_breve", rep.kms->g_breve},
                    {"kernel_nonsingular", rep.kms->kernel_nonsingular}};
      ok = ok && rep.kms->g_breve > 0.0;
    } else {
      out["kms"] = {{"status", "unavailable"}, {"reason", rep.kms_unavailable}};
      ok = false;
    }
  }
  out["finding"] = to_string(rep.finding.kind);
  print_json(out);
  return ok ? kExitOk : kExitNoGap;
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : sweep::detail::split(s, ',')) {
    const double t = sweep::detail::parse_double(item);
    if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "times must be >= 0");
    out.push_back(t);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty time list");
  return out;
}

int cmd_evolve(const std::string& path, const std::string& times, const std::string& s0) {
  const auto parsed = io::parse_model_file(path);
  const GklsModel& model = parsed.model;
  const DriftDiffusion dd = build_drift_diffusion(model);
  GaussianStateParams sp;
  if (s0 == "vacuum") {
    sp = {CVec::Zero(model.d), RMat::Identity(2 * model.d, 2 * model.d)};
  } else if (s0 == "stationary") {
    const auto st = solve_stationary(dd, model.zeta);
    sp = {st.mu, st.s2d};
  } else {
    sp = io::parse_state_text(io::read_file(s0), model.d);
  }
  json out = json::array();
  for (double t : parse_times(times)) {
    const auto e = state_evolve(dd, sp, t, model.zeta);
    json row = io::state_to_json(e);
    row["t"] = t;
    out.push_back(row);
  }
  print_json(out);
  return kExitOk;
}

/// Random centered combinations; the model is taken in its zeta = 0 normal form.
int cmd_decay(const std::string& path, int samples, unsigned long long seed,
              const std::string& times, const std::string& mode, int terms) {
  const auto parsed = io::parse_model_file(path);
  const GklsModel& model = parsed.model;
  const DriftDiffusion dd = build_drift_diffusion(model);
  const StationaryData st = solve_stationary(dd, zero_zeta(model.d));
  const auto ts = parse_times(times);
  std::vector<Embedding> modes;
  if (mode == "gns" || mode == "both") modes.push_back(Embedding::GNS);
  if (mode == "kms" || mode == "both") modes.push_back(Embedding::KMS);
  double g = 0.0, gb = 0.0;
  if (mode != "kms") g = gns_gap(dd, st).g;
  if (mode != "gns") gb = kms_gap(dd, st).g_breve;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::cout << "sample,mode,t,norm,bound\n";
  for (int s = 0; s < samples; ++s) {
    WeylCombo combo;
    for (int k = 0; k < terms; ++k) {
      CVec z(model.d);
      for (Index i = 0; i < model.d; ++i) z(i) = cplx(0.5 * nd(rng), 0.5 * nd(rng));
      combo.push_back({cplx(nd(rng), nd(rng)), z});
    }
    for (Embedding e : modes) {
      const double rate = e == Embedding::GNS ? g : gb;
      const double n0 = norm_decay(st, dd, combo, 0.0, e);
      for (double t : ts) {
        std::cout << s << "," << to_string(e) << "," << io::csv_number(t) << ","
                  << io::csv_number(norm_decay(st, dd, combo, t, e)) << ","
                  << io::csv_number(std::exp(-2.0 * rate * t) * n0) << "\n";
      }
    }
  }
  return kExitOk;
}

int cmd_sweep(const std::string& preset, const std::string& grid) {
  if (preset != "one-dim") throw Error(ErrorCode::InvalidArgument, "only --preset one-dim is supported");
  const auto points = sweep::expand(sweep::parse_grid(grid));
  const auto rows = sweep::run(points, sweep::worker_count());
  std::cout << sweep::csv_header() << "\n";
  for (const auto& r : rows) std::cout << sweep::csv_row(r) << "\n";
  return kExitOk;
}

CMat oracle_density(const GklsModel& model, const fock::TruncatedSpace& sp) {
  const auto ops = fock::build_operators(model, sp);
  return fock::stationary_density(fock::build_superoperator(ops), sp.dim);
}

int cmd_oracle(const std::string& path, int cutoff, const std::string& check) {
  const auto parsed = io::parse_model_file(path);
  const GklsModel& model = parsed.model;
  const DriftDiffusion dd = build_drift_diffusion(model);
  const StationaryData st = solve_stationary(dd, model.zeta);
  json out;
  out["cutoff"] = cutoff;
  out["check"] = check;
  if (check == "char" || check == "kms-trace") {
    const auto sp = fock::build_space(model.d, cutoff);
    const CMat rho = oracle_density(model, sp);
    out["leakage"] = fock::leakage(sp, fock::apply_predual(fock::build_operators(model, sp), rho));
    double worst = 0.0;
    const auto axis = sweep::linspace(-1.0, 1.0, 5);
    for (double re : axis) {
      for (double im : axis) {
        CVec z = CVec::Constant(model.d, cplx(re, im));
        double err;
        if (check == "char") {
          err = std::abs(fock::oracle_char_fn(sp, rho, z) - char_fn({st.mu, st.s2d}, z));
        } else {
          const auto tr = fock::oracle_kms_trace(sp, rho, z, z);
          out["diagonal_density"] = tr.diagonal_density;
          const double ref = kms_weyl_trace(st, z, z);
          err = std::abs(tr.value - ref) / ref;
        }
        worst = std::max(worst, err);
      }
    }
    out[check == "char" ? "max_abs_error" : "max_rel_error"] = worst;
  } else if (check == "gap") {
    const auto sp = fock::build_space(model.d, cutoff);
    const double g_or = fock::oracle_gap(model, sp, fock::OracleMode::GNS).gap;
    const double gb_or = fock::oracle_gap(model, sp, fock::OracleMode::KMS).gap;
    out["gns"] = {{"oracle", g_or}, {"analytic", gns_gap(dd, st).g}};
    out["kms"] = {{"oracle", gb_or}, {"analytic", kms_gap(dd, st).g_breve}};
  } else {
    throw Error(ErrorCode::InvalidArgument, "--check must be char, kms-trace or gap");
  }
  print_json(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral gaps of Gaussian quantum Markov semigroups"};
  app.require_subcommand(1);

  std::string file;
  bool as_json = false;
  auto* analyze = app.add_subcommand("analyze", "full report for a model file");
  analyze->add_option("file", file, "model file")->required();
  analyze->add_flag("--json", as_json, "print the JSON report");

  std::string mode = "both";
  auto* gap = app.add_subcommand("gap", "GNS and/or KMS spectral gap");
  gap->add_option("file", file, "model file")->required();
  gap->add_option("--mode", mode, "gns, kms or both")->check(CLI::IsMember({"gns", "kms", "both"}));

  std::string times = "0,0.5,1";
  std::string s0 = "vacuum";
  auto* evolve = app.add_subcommand("evolve", "evolve a Gaussian state");
  evolve->add_option("file", file, "model file")->required();
  evolve->add_option("--t", times, "comma separated times");
  evolve->add_option("--s0", s0, "vacuum, stationary or a state file");

  int samples = 10;
  unsigned long long seed = 1;
  int terms = 3;
  std::string tgrid = "0,0.05,0.2,0.5,1,3";
  auto* decay = app.add_subcommand("decay", "decay of random centered Weyl combinations");
  decay->add_option("file", file, "model file")->required();
  decay->add_option("--samples", samples, "number of random combinations");
  decay->add_option("--seed", seed, "RNG seed");
  decay->add_option("--terms", terms, "Weyl terms per combination");
  decay->add_option("--t-grid", tgrid, "comma separated times");
  decay->add_option("--mode", mode, "gns, kms or both")->check(CLI::IsMember({"gns", "kms", "both"}));

  std::string preset = "one-dim";
  std::string grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "one-mode parameter sweep as CSV");
  sweep_cmd->add_option("--preset", preset, "model family (one-dim)");
  sweep_cmd->add_option("--grid", grid, "mu2=lo:hi:n;lambda2=v1,v2;omega=...;kappa_frac=...");

  int cutoff = 40;
  std::string check = "char";
  auto* oracle = app.add_subcommand("oracle", "compare against the truncated Fock-space oracle");
  oracle->add_option("file", file, "model file")->required();
  oracle->add_option("--cutoff", cutoff, "max occupation per mode");
  oracle->add_option("--check", check, "char, kms-trace or gap")
      ->check(CLI::IsMember({"char", "kms-trace", "gap"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*analyze) return cmd_analyze(file, as_json);
    if (*gap) return cmd_gap(file, mode);
    if (*evolve) return cmd_evolve(file, times, s0);
    if (*decay) return cmd_decay(file, samples, seed, tgrid, mode, terms);
    if (*sweep_cmd) return cmd_sweep(preset, grid);
    if (*oracle) return cmd_oracle(file, cutoff, check);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
