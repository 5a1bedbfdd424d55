#pragma once

// JSON and CSV formats for tables, inventories, maps, graphs, flows and
// acoustic outputs. Numbers are written in shortest round-trip form.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "gestura/acoustics.hpp"
#include "gestura/coordination.hpp"
#include "gestura/error.hpp"
#include "gestura/flow.hpp"
#include "gestura/inventory.hpp"
#include "gestura/synthesis.hpp"
#include "gestura/syllable_graph.hpp"

namespace gestura {

using Json = nlohmann::ordered_json;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kIo, "malformed number '" + std::string(s) + "'");
  }
  return v;
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorKind::kIo, "write failed for '" + path + "'");
}

inline Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kConfig, "'" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------- PsiTable

inline Json to_json(const PsiTable& t) {
  Json j;
  j["names"] = Json::array();
  for (auto n : kArticulatorNames) j["names"].push_back(std::string(n));
  for (const char* key : {"omega", "psi1", "psi2"}) j[key] = Json::array();
  for (const auto& e : t.entries) {
    j["omega"].push_back(e.omega);
    j["psi1"].push_back(e.psi1);
    j["psi2"].push_back(e.psi2);
  }
  return j;
}

inline PsiTable psi_table_from_json(const Json& j) {
  try {
    PsiTable t;
    for (const char* key : {"omega", "psi1", "psi2"}) {
      if (!j.contains(key) || j.at(key).size() != kArticulatorCount) {
        throw Error(ErrorKind::kConfig, std::string("coordination table needs 7 values for '") + key + "'");
      }
    }
    if (j.contains("names")) {
      const auto& names = j.at("names");
      if (names.size() != kArticulatorCount) throw Error(ErrorKind::kConfig, "coordination table needs 7 names");
      for (std::size_t i = 0; i < kArticulatorCount; ++i) {
        if (names[i].get<std::string>() != kArticulatorNames[i]) {
          throw Error(ErrorKind::kConfig, "articulator " + std::to_string(i + 1) + " must be " +
                                              std::string(kArticulatorNames[i]));
        }
      }
    }
    for (std::size_t i = 0; i < kArticulatorCount; ++i) {
      t.entries[i] = {j["omega"][i].get<double>(), j["psi1"][i].get<double>(), j["psi2"][i].get<double>()};
    }
    return t;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("coordination table: ") + e.what());
  }
}

// --------------------------------------------------------------- Inventory

inline Json point_json(const PolarPoint& p) { return Json{{"rho", p.rho()}, {"theta", p.theta()}}; }

inline PolarPoint point_from_json(const Json& j) {
  return PolarPoint(j.at("rho").get<double>(), j.at("theta").get<double>());
}

inline Json to_json(const PhonemeInventory& inv) {
  Json j;
  j["vowels"] = Json::object();
  for (const auto& [s, p] : inv.vowels()) j["vowels"][s] = point_json(p);
  j["consonants"] = Json::object();
  for (const auto& [s, c] : inv.consonants()) {
    Json cj;
    std::visit(
        [&](const auto& r) {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, FixedLocation>) {
            cj["location"] = point_json(r.point);
          } else if constexpr (std::is_same_v<R, FrontBackLocation>) {
            cj["front"] = point_json(r.front);
            cj["back"] = point_json(r.back);
          } else {
            cj["lean"] = {{"base", point_json(r.base)}, {"coefficient", r.coefficient}, {"max_lean", r.max_lean}};
          }
        },
        c.location);
    cj["selection"] = c.selection.indices();
    if (c.cluster_location) cj["cluster_location"] = point_json(*c.cluster_location);
    j["consonants"][s] = cj;
  }
  j["clusters"] = Json::array();
  for (const auto& [pair, sel] : inv.clusters()) {
    j["clusters"].push_back({{"pair", {pair.first, pair.second}}, {"selection", sel.indices()}});
  }
  j["aliases"] = Json::object();
  for (const auto& [a, s] : inv.aliases()) j["aliases"][a] = s;
  return j;
}

inline PhonemeInventory inventory_from_json(const Json& j) {
  try {
    PhonemeInventory inv;
    for (const auto& [s, p] : j.at("vowels").items()) inv.add_vowel(s, point_from_json(p));
    for (const auto& [s, c] : j.at("consonants").items()) {
      ConsonantSpec spec;
      if (c.contains("location")) {
        spec.location = FixedLocation{point_from_json(c["location"])};
      } else if (c.contains("front") && c.contains("back")) {
        spec.location = FrontBackLocation{point_from_json(c["front"]), point_from_json(c["back"])};
      } else if (c.contains("lean")) {
        const auto& l = c["lean"];
        VowelLeanLocation r{point_from_json(l.at("base"))};
        if (l.contains("coefficient")) r.coefficient = l["coefficient"].get<double>();
        if (l.contains("max_lean")) r.max_lean = l["max_lean"].get<double>();
        spec.location = r;
      } else {
        throw Error(ErrorKind::kInventory, "consonant '" + s + "' has no location rule");
      }
      spec.selection = SelectionVector::from_indices(c.at("selection").get<std::vector<int>>());
      if (c.contains("cluster_location")) spec.cluster_location = point_from_json(c["cluster_location"]);
      inv.add_consonant(s, spec);
    }
    if (j.contains("clusters")) {
      for (const auto& r : j["clusters"]) {
        const auto pair = r.at("pair").get<std::vector<std::string>>();
        if (pair.size() != 2) throw Error(ErrorKind::kInventory, "cluster rule needs two consonants");
        inv.add_cluster_rule(pair[0], pair[1], SelectionVector::from_indices(r.at("selection").get<std::vector<int>>()));
      }
    }
    if (j.contains("aliases")) {
      for (const auto& [a, s] : j["aliases"].items()) inv.add_alias(a, s.get<std::string>());
    }
    return inv;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInventory, std::string("inventory: ") + e.what());
  }
}

// ------------------------------------------------------------------- Map

inline Json to_json(const ArticulatoryMap& m) {
  Json j;
  j["lengths"] = Json::array();
  j["areas"] = Json::array();
  for (const auto& s : m.neutral.sections) {
    j["lengths"].push_back(s.length_cm);
    j["areas"].push_back(s.area_cm2);
  }
  j["profiles"] = Json::object();
  for (std::size_t i = 0; i < kArticulatorCount; ++i) j["profiles"][std::string(kArticulatorNames[i])] = m.profiles[i];
  j["length_gain"] = m.length_gain;
  j["lip_sections"] = m.lip_sections;
  j["reference"] = m.reference;
  return j;
}

inline ArticulatoryMap map_from_json(const Json& j) {
  try {
    ArticulatoryMap m;
    const auto lengths = j.at("lengths").get<std::vector<double>>();
    const auto areas = j.at("areas").get<std::vector<double>>();
    if (lengths.size() != areas.size()) throw Error(ErrorKind::kConfig, "map: lengths and areas differ in size");
    for (std::size_t k = 0; k < lengths.size(); ++k) m.neutral.sections.push_back({lengths[k], areas[k]});
    for (std::size_t i = 0; i < kArticulatorCount; ++i) {
      m.profiles[i] = j.at("profiles").at(std::string(kArticulatorNames[i])).get<std::vector<double>>();
    }
    if (j.contains("length_gain")) m.length_gain = j["length_gain"].get<double>();
    if (j.contains("lip_sections")) m.lip_sections = j["lip_sections"].get<std::size_t>();
    if (j.contains("reference")) {
      const auto r = j["reference"].get<std::vector<double>>();
      if (r.size() != kArticulatorCount) throw Error(ErrorKind::kConfig, "map: reference needs 7 values");
      std::copy(r.begin(), r.end(), m.reference.begin());
    }
    m.validate();
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("map: ") + e.what());
  }
}

// ----------------------------------------------------------------- Graph

inline const char* to_string(ArcMotion m) {
  switch (m) {
    case ArcMotion::kO1: return "O1";
    case ArcMotion::kO2: return "O2";
    case ArcMotion::kStationary: return "stationary";
  }
  return "?";
}

inline Json to_json(const SyllableGraph& g, double dt_ms = kDefaultFrameMs) {
  Json j;
  j["label"] = g.label();
  j["cv_aligned"] = g.cv_aligned;
  j["total_ms"] = g.total_duration_ms();
  j["total_frames"] = std::llround(g.total_duration_ms() / dt_ms);
  j["nodes"] = Json::array();
  for (const auto& n : g.nodes) {
    j["nodes"].push_back({{"id", n.id}, {"role", to_string(n.role)}, {"symbol", n.symbol},
                          {"rho", n.location.rho()}, {"theta", n.location.theta()}});
  }
  j["arcs"] = Json::array();
  for (const auto& a : g.arcs) {
    j["arcs"].push_back({{"id", a.id}, {"from", a.from}, {"to", a.to}, {"timing", a.timing_label()},
                         {"motion", to_string(a.motion)}, {"periods", a.periods},
                         {"duration_ms", a.duration_ms()}, {"duration_frames", std::llround(a.duration_ms() / dt_ms)},
                         {"selection", a.selection.indices()}, {"branch", to_string(a.branch)},
                         {"pause", a.pause}, {"K", a.shape_k}, {"nu", a.nu}});
  }
  j["segments"] = Json::array();
  for (const auto& s : g.segments) {
    j["segments"].push_back({{"kind", s.kind == SegmentKind::kSuperimposed ? "superimposed" : "vocalic"},
                             {"consonant_arcs", s.consonant_arcs}, {"vocalic_arc", s.vocalic_arc}});
  }
  j["syllables"] = Json::array();
  for (const auto& s : g.syllables) {
    j["syllables"].push_back({{"label", s.label()}, {"onset", s.onset}, {"nucleus", s.nucleus}, {"coda", s.coda},
                              {"delta_o", s.delta_o}, {"delta_e", s.delta_e}, {"T", s.period_ms},
                              {"first_segment", s.first_segment}, {"segment_count", s.segment_count}});
  }
  return j;
}

// ------------------------------------------------------------------ CSV

inline std::string flow_csv(const ParameterFlow& flow) {
  std::string out;
  for (std::size_t i = 0; i < kArticulatorCount; ++i) {
    if (i) out += ',';
    out += kArticulatorNames[i];
  }
  out += '\n';
  for (const auto& f : flow.frames) {
    for (std::size_t i = 0; i < kArticulatorCount; ++i) {
      if (i) out += ',';
      out += format_number(f[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

/// Frames only; markers travel in their own file.
inline ParameterFlow flow_from_csv(const std::string& text, double dt_ms = kDefaultFrameMs) {
  const auto rows = split_csv(text);
  if (rows.empty() || rows[0].size() != kArticulatorCount) throw Error(ErrorKind::kIo, "flow CSV needs a 7-column header");
  ParameterFlow flow;
  flow.dt_ms = dt_ms;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != kArticulatorCount) {
      throw Error(ErrorKind::kIo, "flow CSV row " + std::to_string(r) + " does not have 7 values");
    }
    ParameterVector p{};
    for (std::size_t i = 0; i < kArticulatorCount; ++i) p[i] = parse_number(rows[r][i]);
    flow.frames.push_back(p);
  }
  return flow;
}

inline Json markers_json(const ParameterFlow& flow) {
  Json j;
  j["dt_ms"] = flow.dt_ms;
  j["frames"] = flow.size();
  j["markers"] = Json::array();
  for (const auto& m : flow.markers) {
    j["markers"].push_back({{"frame", m.frame}, {"label", m.label}, {"kind", to_string(m.kind)},
                            {"segment", m.segment}, {"node", m.node}});
  }
  return j;
}

inline std::string formants_csv(const FormantTrack& t) {
  std::string out = "frame,F1,F2,F3,F4,valid\n";
  for (std::size_t j = 0; j < t.size(); ++j) {
    out += std::to_string(j);
    for (double f : t.frames[j]) out += ',' + format_number(f);
    out += t.valid[j] ? ",1\n" : ",0\n";
  }
  return out;
}

inline std::string surface_csv(const std::vector<SurfacePoint>& s) {
  std::string out = "rho,theta,F1,F2,F3\n";
  for (const auto& p : s) {
    out += format_number(p.point.rho()) + ',' + format_number(p.point.theta());
    for (double f : p.f) out += ',' + format_number(f);
    out += '\n';
  }
  return out;
}

inline std::string envelope_csv(const EnvelopeCurve& e) {
  std::string out = "frame,gain\n";
  for (std::size_t j = 0; j < e.size(); ++j) out += std::to_string(j) + ',' + format_number(e.gain[j]) + '\n';
  return out;
}

}  // namespace gestura
