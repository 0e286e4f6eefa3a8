#pragma once

// File formats: sponge, potential and measure JSON documents, curve CSV and a
// minimal deterministic SVG plot.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sponge/error.hpp"
#include "sponge/measures.hpp"
#include "sponge/spectra.hpp"
#include "sponge/sponge.hpp"

namespace sponge::io {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Config, "write failed for " + path);
}

namespace detail {

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, what + ": " + e.what());
  }
}

template <class T>
T field(const json& doc, const char* key, const std::string& what) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(ErrorCode::Config, what + ": missing \"" + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, what + ": bad \"" + key + "\": " + e.what());
  }
}

// Canonical index of each listed digit; the list must be a permutation of D.
inline std::vector<std::size_t> digit_order(const SpongeSpec& spec, const std::vector<std::vector<int>>& digits,
                                            const std::string& what) {
  if (digits.size() != spec.digit_count()) {
    throw Error(ErrorCode::AlphabetMismatch, what + ": digits do not match the sponge's digit set");
  }
  std::vector<std::size_t> order;
  std::vector<bool> seen(spec.digit_count(), false);
  for (const auto& coords : digits) {
    const int idx = spec.index_of(Digit{coords});
    if (idx < 0 || seen[static_cast<std::size_t>(idx)]) {
      throw Error(ErrorCode::AlphabetMismatch, what + ": digits do not match the sponge's digit set");
    }
    seen[static_cast<std::size_t>(idx)] = true;
    order.push_back(static_cast<std::size_t>(idx));
  }
  return order;
}

}  // namespace detail

/// {"bases":[3,2],"digits":[[0,0],[1,1],[2,0]]}
inline SpongeSpec parse_sponge(const std::string& text) {
  const json doc = detail::parse_json(text, "sponge");
  SpongeInput raw;
  raw.bases = detail::field<std::vector<int>>(doc, "bases", "sponge");
  raw.digits = detail::field<std::vector<std::vector<int>>>(doc, "digits", "sponge");
  return validate_sponge(raw);
}

inline std::string sponge_to_json(const SpongeSpec& spec) {
  json doc;
  doc["bases"] = spec.bases();
  doc["digits"] = json::array();
  for (const auto& d : spec.digits()) doc["digits"].push_back(d.coords);
  return doc.dump() + "\n";
}

/// {"digits":[[0,0],[1,1],[2,0]],"values":[[0],[1],[0]]}
inline Potential parse_potential(const SpongeSpec& spec, const std::string& text) {
  const json doc = detail::parse_json(text, "potential");
  const auto digits = detail::field<std::vector<std::vector<int>>>(doc, "digits", "potential");
  const auto values = detail::field<std::vector<std::vector<double>>>(doc, "values", "potential");
  if (values.size() != digits.size()) throw Error(ErrorCode::InvalidPotential, "potential: digits and values differ in length");
  const auto order = detail::digit_order(spec, digits, "potential");
  std::vector<std::vector<double>> canonical(spec.digit_count());
  for (std::size_t i = 0; i < order.size(); ++i) canonical[order[i]] = values[i];
  return Potential(spec, std::move(canonical));
}

/// {"digits":[...],"probs":[...],"vssc":true}
inline ProbVector parse_measure(const SpongeSpec& spec, const std::string& text) {
  const json doc = detail::parse_json(text, "measure");
  if (!doc.is_object() || !doc.contains("vssc") || doc.at("vssc") != true) {
    throw Error(ErrorCode::Config, "measure: the separation condition must be declared with \"vssc\": true");
  }
  const auto digits = detail::field<std::vector<std::vector<int>>>(doc, "digits", "measure");
  const auto probs = detail::field<std::vector<double>>(doc, "probs", "measure");
  if (probs.size() != digits.size()) throw Error(ErrorCode::InvalidProbVector, "measure: digits and probs differ in length");
  const auto order = detail::digit_order(spec, digits, "measure");
  std::vector<double> canonical(spec.digit_count());
  for (std::size_t i = 0; i < order.size(); ++i) canonical[order[i]] = probs[i];
  return ProbVector::over(spec, std::move(canonical));
}

inline SpongeSpec load_sponge(const std::string& path) { return parse_sponge(read_file(path)); }
inline Potential load_potential(const SpongeSpec& spec, const std::string& path) {
  return parse_potential(spec, read_file(path));
}
inline ProbVector load_measure(const SpongeSpec& spec, const std::string& path) {
  return parse_measure(spec, read_file(path));
}

/// %.12g
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV: alpha,value,kind,status

inline std::string curve_to_csv(const SpectrumCurve& curve) {
  std::string out = "alpha,value,kind,status\n";
  const std::string kind(to_string(curve.kind));
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out += format_number(curve.grid[i]);
    out += ',';
    if (curve.values[i]) out += format_number(*curve.values[i]);
    out += ',';
    out += kind;
    out += ',';
    out += !curve.values[i] ? "outside" : curve.is_transition_row(i) ? "transition" : "ok";
    out += '\n';
  }
  return out;
}

/// Parses CSV written by curve_to_csv. Transitions are not recoverable from
/// the rows and are left empty.
inline SpectrumCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "alpha,value,kind,status") {
    throw Error(ErrorCode::Config, "curve csv: bad header");
  }
  SpectrumCurve curve;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 4) throw Error(ErrorCode::Config, "curve csv: expected 4 fields in \"" + line + "\"");
    const auto kind = parse_spectrum_kind(cells[2]);
    if (!kind) throw Error(ErrorCode::Config, "curve csv: unknown kind " + cells[2]);
    if (first) curve.kind = *kind;
    first = false;
    try {
      curve.grid.push_back(std::stod(cells[0]));
      curve.values.push_back(cells[1].empty() ? std::nullopt : std::optional<double>(std::stod(cells[1])));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Config, "curve csv: bad number in \"" + line + "\"");
    }
  }
  return curve;
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace detail

/// Single polyline plot: alpha on x, value on y, transitions as dashed lines.
inline std::string curve_to_svg(const SpectrumCurve& curve) {
  constexpr double width = 640, height = 400, left = 70, right = 20, top = 30, bottom = 50;
  double xlo = curve.grid.empty() ? 0.0 : curve.grid.front();
  double xhi = curve.grid.empty() ? 1.0 : curve.grid.back();
  double ylo = 0.0, yhi = 0.0;
  for (const auto& v : curve.values) {
    if (v) yhi = std::max(yhi, *v);
  }
  if (xhi <= xlo) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  if (yhi <= ylo) yhi = ylo + 1.0;
  auto px = [&](double x) { return left + (x - xlo) / (xhi - xlo) * (width - left - right); };
  auto py = [&](double y) { return height - bottom - (y - ylo) / (yhi - ylo) * (height - top - bottom); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\" width=\"640\" height=\"400\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<g stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(py(ylo)) + "\" x2=\"" +
       detail::svg_num(width - right) + "\" y2=\"" + detail::svg_num(py(ylo)) + "\"/>\n";
  s += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(py(ylo)) + "\" x2=\"" + detail::svg_num(left) +
       "\" y2=\"" + detail::svg_num(top) + "\"/>\n";
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double x = xlo + (xhi - xlo) * t / 4.0;
    const double y = ylo + (yhi - ylo) * t / 4.0;
    s += "<line x1=\"" + detail::svg_num(px(x)) + "\" y1=\"" + detail::svg_num(py(ylo)) + "\" x2=\"" +
         detail::svg_num(px(x)) + "\" y2=\"" + detail::svg_num(py(ylo) + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::svg_num(px(x)) + "\" y=\"" + detail::svg_num(py(ylo) + 18) +
         "\" text-anchor=\"middle\">" + format_number(std::round(x * 1e4) / 1e4) + "</text>\n";
    s += "<line x1=\"" + detail::svg_num(left - 5) + "\" y1=\"" + detail::svg_num(py(y)) + "\" x2=\"" +
         detail::svg_num(left) + "\" y2=\"" + detail::svg_num(py(y)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::svg_num(left - 8) + "\" y=\"" + detail::svg_num(py(y) + 4) + "\" text-anchor=\"end\">" +
         format_number(std::round(y * 1e4) / 1e4) + "</text>\n";
  }
  s += "<text x=\"" + detail::svg_num((left + width - right) / 2) + "\" y=\"" + detail::svg_num(height - 10) +
       "\" text-anchor=\"middle\">alpha</text>\n";
  s += "<text x=\"15\" y=\"" + detail::svg_num((top + height - bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
       detail::svg_num((top + height - bottom) / 2) + ")\">" + std::string(to_string(curve.kind)) + "</text>\n";
  s += "</g>\n";
  for (const auto& t : curve.transitions) {
    s += "<line x1=\"" + detail::svg_num(px(t.alpha)) + "\" y1=\"" + detail::svg_num(top) + "\" x2=\"" +
         detail::svg_num(px(t.alpha)) + "\" y2=\"" + detail::svg_num(py(ylo)) +
         "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
  }
  s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    if (!curve.values[i]) continue;
    if (!first) s += ' ';
    first = false;
    s += detail::svg_num(px(curve.grid[i])) + "," + detail::svg_num(py(*curve.values[i]));
  }
  s += "\"/>\n</svg>\n";
  return s;
}

}  // namespace sponge::io
