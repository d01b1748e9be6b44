#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "setyoung/common.hpp"
#include "setyoung/convex_body.hpp"
#include "setyoung/sampled_path.hpp"
#include "setyoung/set_valued_path.hpp"
#include "setyoung/steiner.hpp"

namespace setyoung {

using ordered_json = nlohmann::ordered_json;

// %.17g round-trips doubles and keeps CSV output byte-stable.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- convex bodies: {"dim": n, "vertices": [[...], ...]} -------------------

inline ordered_json body_to_json(const ConvexBody& C) {
  ordered_json j;
  j["dim"] = C.dim;
  j["vertices"] = C.vertices;
  return j;
}

inline ConvexBody body_from_json(const ordered_json& j) {
  if (!j.contains("dim") || !j.contains("vertices"))
    throw ConfigError("body: required keys 'dim' and 'vertices'");
  const int dim = j.at("dim").get<int>();
  std::vector<Vec> verts = j.at("vertices").get<std::vector<Vec>>();
  return ConvexBody(dim, std::move(verts));
}

// ---- measures: {"kind":"uniform"} or
//                {"kind":"bump","center":[...],"concentration":x} ------------

inline ordered_json measure_to_json(const SmoothBallMeasure& mu) {
  ordered_json j;
  if (mu.kind() == SmoothBallMeasure::Kind::Uniform) {
    j["kind"] = "uniform";
  } else {
    j["kind"] = "bump";
    j["center"] = mu.center();
    j["concentration"] = mu.concentration();
  }
  return j;
}

inline SmoothBallMeasure measure_from_json(const ordered_json& j, int dim) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return SmoothBallMeasure::uniform(dim);
  if (kind == "bump")
    return SmoothBallMeasure::bump(j.at("center").get<Vec>(),
                                   j.at("concentration").get<double>());
  throw ConfigError("measure: unknown kind '" + kind + "'");
}

// ---- paths: CSV with header t,v1,...,vk ------------------------------------

inline std::string path_to_csv(const SampledPath& p) {
  std::ostringstream os;
  os << "t";
  for (std::size_t c = 1; c <= p.width; ++c) os << ",v" << c;
  os << "\n";
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    os << fmt_double(p.time_at(i));
    for (std::size_t c = 0; c < p.width; ++c)
      os << "," << fmt_double(p.values[i][c]);
    os << "\n";
  }
  return os.str();
}

inline SampledPath path_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("path csv: empty input");
  std::vector<double> times;
  std::vector<Vec> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    Vec row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) throw ConfigError("path csv: short row");
    times.push_back(row.front());
    values.emplace_back(row.begin() + 1, row.end());
  }
  if (values.size() < 2) throw ConfigError("path csv: need >= 2 rows");
  const std::size_t w = values.front().size();
  return SampledPath(times.back(), w, std::move(values));
}

// ---- set-valued paths: JSON with per-node body objects ----------------------

inline ordered_json svp_to_json(const SetValuedPath& F) {
  ordered_json j;
  j["horizon"] = F.horizon;
  j["bodies"] = ordered_json::array();
  for (const ConvexBody& b : F.bodies) j["bodies"].push_back(body_to_json(b));
  return j;
}

inline SetValuedPath svp_from_json(const ordered_json& j) {
  std::vector<ConvexBody> bodies;
  for (const auto& bj : j.at("bodies")) bodies.push_back(body_from_json(bj));
  return SetValuedPath(j.at("horizon").get<double>(), std::move(bodies));
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalFailure("cannot open for writing: " + path);
  out << text;
}

}  // namespace setyoung
