#pragma once

// Model and state files (JSON) and CSV helpers.
//
// Model file:
//   {"version": "gaussgap-model/1", "d": 1, "m": 2,
//    "omega": [[[re, im]]], "kappa": [[[re, im]]],
//    "U": [[[re, im]], [[re, im]]], "V": [...], "zeta": [[re, im]]}
// or the one-mode preset
//   {"version": "gaussgap-model/1", "one_dim": {"mu2": 3, "lambda2": 1, "omega": 2, "kappa": 1}}

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gaussgap/dynamics.hpp"
#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/model.hpp"

namespace gaussgap::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kModelVersion = "gaussgap-model/1";
inline constexpr const char* kStateVersion = "gaussgap-state/1";
inline constexpr const char* kReportVersion = "gaussgap-report/1";

struct OneDimPreset {
  double mu2 = 0.0;
  double lambda2 = 0.0;
  double omega = 0.0;
  double kappa = 0.0;
};

struct ParsedModel {
  GklsModel model;
  std::optional<OneDimPreset> preset;
};

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "at byte " + std::to_string(e.byte) + ": " + std::string(e.what()));
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorCode::ShapeError, where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, where + ": non-finite value");
  return v;
}

inline cplx complex_number(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::ShapeError, where + ": complex numbers are [re, im] pairs");
  }
  return {number(j[0], where), number(j[1], where)};
}

inline CVec complex_vector(const json& j, Index n, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n) {
    throw Error(ErrorCode::ShapeError, where + ": expected " + std::to_string(n) + " entries");
  }
  CVec v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = complex_number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline CMat complex_matrix(const json& j, Index rows, Index cols, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw Error(ErrorCode::ShapeError,
                where + ": expected " + std::to_string(rows) + " rows of " + std::to_string(cols));
  }
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    m.row(r) = complex_vector(j[r], cols, where + "[" + std::to_string(r) + "]").transpose();
  }
  return m;
}

inline RMat real_matrix(const json& j, Index rows, Index cols, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw Error(ErrorCode::ShapeError, where + ": expected " + std::to_string(rows) + " rows");
  }
  RMat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Index>(j[r].size()) != cols) {
      throw Error(ErrorCode::ShapeError, where + ": expected " + std::to_string(cols) + " columns");
    }
    for (Index c = 0; c < cols; ++c) m(r, c) = number(j[r][c], where);
  }
  return m;
}

inline Index positive_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1) {
    throw Error(ErrorCode::ShapeError, std::string(key) + " must be a positive integer");
  }
  return static_cast<Index>(doc[key].get<long long>());
}

inline void check_version(const json& doc, const char* expected) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");
  if (!doc.contains("version") || doc["version"] != expected) {
    throw Error(ErrorCode::ParseError, std::string("version must be \"") + expected + "\"");
  }
}

}  // namespace detail

inline ParsedModel parse_model_text(const std::string& text) {
  const json doc = parse_json(text);
  detail::check_version(doc, kModelVersion);
  ParsedModel out;
  if (doc.contains("one_dim")) {
    for (const char* key : {"d", "m", "omega", "kappa", "U", "V", "zeta"}) {
      if (doc.contains(key)) {
        throw Error(ErrorCode::ShapeError,
                    std::string("preset one_dim cannot be combined with explicit ") + key);
      }
    }
    const json& p = doc["one_dim"];
    if (!p.is_object()) throw Error(ErrorCode::ShapeError, "one_dim must be an object");
    OneDimPreset pre;
    auto get = [&p](const char* key) {
      if (!p.contains(key)) throw Error(ErrorCode::ShapeError, std::string("one_dim.") + key + " missing");
      return detail::number(p[key], std::string("one_dim.") + key);
    };
    pre.mu2 = get("mu2");
    pre.lambda2 = get("lambda2");
    pre.omega = get("omega");
    pre.kappa = get("kappa");
    out.model = one_dim_model(pre.mu2, pre.lambda2, pre.omega, pre.kappa);
    out.preset = pre;
    return out;
  }
  GklsModel& m = out.model;
  m.d = detail::positive_int(doc, "d");
  m.m = detail::positive_int(doc, "m");
  for (const char* key : {"omega", "kappa", "U", "V"}) {
    if (!doc.contains(key)) throw Error(ErrorCode::ShapeError, std::string(key) + " missing");
  }
  m.omega = detail::complex_matrix(doc["omega"], m.d, m.d, "omega");
  m.kappa = detail::complex_matrix(doc["kappa"], m.d, m.d, "kappa");
  m.u = detail::complex_matrix(doc["U"], m.m, m.d, "U");
  m.v = detail::complex_matrix(doc["V"], m.m, m.d, "V");
  m.zeta = doc.contains("zeta") ? detail::complex_vector(doc["zeta"], m.d, "zeta") : CVec::Zero(m.d);
  return out;
}

inline ParsedModel parse_model_file(const std::string& path) {
  return parse_model_text(read_file(path));
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const CVec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline json to_json(const CMat& m) {
  json a = json::array();
  for (Index r = 0; r < m.rows(); ++r) a.push_back(to_json(CVec(m.row(r).transpose())));
  return a;
}

inline json to_json(const RVec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

/// Row-major nested arrays.
inline json to_json(const RMat& m) {
  json a = json::array();
  for (Index r = 0; r < m.rows(); ++r) a.push_back(to_json(RVec(m.row(r).transpose())));
  return a;
}

inline json model_to_json(const GklsModel& m) {
  json doc;
  doc["version"] = kModelVersion;
  doc["d"] = m.d;
  doc["m"] = m.m;
  doc["omega"] = to_json(m.omega);
  doc["kappa"] = to_json(m.kappa);
  doc["U"] = to_json(m.u);
  doc["V"] = to_json(m.v);
  doc["zeta"] = to_json(m.zeta);
  return doc;
}

/// {"version": "gaussgap-state/1", "mean": [[re, im], ...], "cov": [[...], ...]} (cov is 2d x 2d).
inline GaussianStateParams parse_state_text(const std::string& text, Index d) {
  const json doc = parse_json(text);
  detail::check_version(doc, kStateVersion);
  if (!doc.contains("mean") || !doc.contains("cov")) {
    throw Error(ErrorCode::ShapeError, "state needs mean and cov");
  }
  GaussianStateParams sp;
  sp.mean = detail::complex_vector(doc["mean"], d, "mean");
  sp.cov2d = detail::real_matrix(doc["cov"], 2 * d, 2 * d, "cov");
  if ((sp.cov2d - sp.cov2d.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, linalg::scale(sp.cov2d))) {
    throw Error(ErrorCode::NotSymmetric, "cov must be symmetric");
  }
  const RMat j = symplectic_matrix(d);
  const CMat st = sp.cov2d.cast<cplx>() + kI * j.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMat> es(st, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, linalg::scale(sp.cov2d))) {
    throw Error(ErrorCode::NotPositiveDefinite, "cov + iJ must be positive semidefinite");
  }
  return sp;
}

inline json state_to_json(const GaussianStateParams& sp) {
  json doc;
  doc["version"] = kStateVersion;
  doc["mean"] = to_json(sp.mean);
  doc["cov"] = to_json(sp.cov2d);
  return doc;
}

/// Shortest representation that round-trips is not needed; 17 significant digits always is.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace gaussgap::io
