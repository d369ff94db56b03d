#pragma once

// Parameter sweeps over the one-mode family, evaluated on a small worker pool.
// Rows come back in grid order whatever the completion order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gaussgap/gap.hpp"
#include "gaussgap/io.hpp"
#include "gaussgap/model.hpp"
#include "gaussgap/stationary.hpp"

namespace gaussgap::sweep {

/// Worker count: GAUSSGAP_THREADS if set (>= 1), else the hardware count.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GAUSSGAP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

/// Runs job(i) for i in [0, count) on up to `workers` threads.
inline void parallel_for(std::size_t count, unsigned workers,
                         const std::function<void(std::size_t)>& job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, count))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct GridPoint {
  double mu2 = 0.0;
  double lambda2 = 0.0;
  double omega = 0.0;
  double kappa = 0.0;
};

struct GridSpec {
  std::vector<double> mu2;
  std::vector<double> lambda2;
  std::vector<double> omega;
  std::vector<double> kappa_frac;
  /// Replacement for kappa_frac = 0 when lambda2 = 0 (that point is the
  /// vacuum, which is not faithful).
  double zero_lambda_kappa_frac = 0.15;
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "range needs n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return out;
}

/// The 200-point grid used by the acceptance suite.
inline GridSpec default_grid() {
  GridSpec g;
  g.mu2 = linspace(1.5, 4.0, 5);
  g.lambda2 = {0.0, 0.25, 0.5, 0.75, 1.0};
  g.omega = {0.5, 2.0};
  g.kappa_frac = {0.0, 0.3, -0.6, 0.9};
  return g;
}

namespace detail {

inline double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad number in grid: '" + s + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

/// "lo:hi:n" or "v1,v2,...".
inline std::vector<double> parse_axis(const std::string& s) {
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw Error(ErrorCode::ParseError, "range must be lo:hi:n, got '" + s + "'");
    const double n = parse_double(parts[2]);
    if (n < 1 || n != std::floor(n)) throw Error(ErrorCode::ParseError, "range count must be a positive integer");
    return linspace(parse_double(parts[0]), parse_double(parts[1]), static_cast<int>(n));
  }
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_double(item));
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty axis");
  return out;
}

}  // namespace detail

/// "mu2=1.5:4:5;lambda2=0,0.5;omega=2;kappa_frac=0,0.3". Missing axes keep the
/// default grid's values.
inline GridSpec parse_grid(const std::string& text) {
  GridSpec g = default_grid();
  if (text.empty()) return g;
  for (const auto& field : detail::split(text, ';')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "grid field needs '=': '" + field + "'");
    const std::string key = field.substr(0, eq);
    const auto values = detail::parse_axis(field.substr(eq + 1));
    if (key == "mu2") g.mu2 = values;
    else if (key == "lambda2") g.lambda2 = values;
    else if (key == "omega") g.omega = values;
    else if (key == "kappa_frac") g.kappa_frac = values;
    else throw Error(ErrorCode::ParseError, "unknown grid axis '" + key + "'");
  }
  return g;
}

/// kappa = f sqrt(gamma^2 + Omega^2), so |f| < 1 keeps a faithful invariant state.
inline std::vector<GridPoint> expand(const GridSpec& g) {
  std::vector<GridPoint> out;
  for (double mu2 : g.mu2) {
    for (double l2 : g.lambda2) {
      for (double om : g.omega) {
        for (double f : g.kappa_frac) {
          const double frac = (l2 == 0.0 && f == 0.0) ? g.zero_lambda_kappa_frac : f;
          const double gamma = 0.5 * (mu2 - l2);
          out.push_back({mu2, l2, om, frac * std::sqrt(gamma * gamma + om * om)});
        }
      }
    }
  }
  return out;
}

struct SweepRow {
  GridPoint point;
  double g = std::numeric_limits<double>::quiet_NaN();
  double g_closed = std::numeric_limits<double>::quiet_NaN();
  double g_breve = std::numeric_limits<double>::quiet_NaN();
  double g_breve_closed = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

inline SweepRow evaluate(const GridPoint& p) {
  SweepRow row;
  row.point = p;
  try {
    const GklsModel model = one_dim_model(p.mu2, p.lambda2, p.omega, p.kappa);
    const DriftDiffusion dd = build_drift_diffusion(model);
    const StationaryData st = solve_stationary(dd, model.zeta);
    row.sigma = st.sigma(0);
    row.g = gns_gap(dd, st).g;
    row.g_breve = kms_gap(dd, st).g_breve;
    const auto cf = one_dim_closed_forms(p.mu2, p.lambda2, p.omega, p.kappa);
    row.g_closed = cf.g;
    row.g_breve_closed = cf.g_breve;
  } catch (const Error& e) {
    row.status = std::string(to_string(e.code()));
  }
  return row;
}

inline std::vector<SweepRow> run(const std::vector<GridPoint>& points, unsigned workers) {
  std::vector<SweepRow> rows(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) { rows[i] = evaluate(points[i]); });
  return rows;
}

inline std::string csv_header() {
  return "mu2,lambda2,omega,kappa,g,g_closed,g_breve,g_breve_closed,sigma,status";
}

inline std::string csv_row(const SweepRow& r) {
  const auto n = [](double v) { return io::csv_number(v); };
  return n(r.point.mu2) + "," + n(r.point.lambda2) + "," + n(r.point.omega) + "," +
         n(r.point.kappa) + "," + n(r.g) + "," + n(r.g_closed) + "," + n(r.g_breve) + "," +
         n(r.g_breve_closed) + "," + n(r.sigma) + "," + r.status;
}

}  // namespace gaussgap::sweep
