#pragma once

// End-to-end runners: word synthesis, locus equations, the formant surface and
// verbal transformations.

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gestura/acoustics.hpp"
#include "gestura/coordination.hpp"
#include "gestura/error.hpp"
#include "gestura/flow.hpp"
#include "gestura/inventory.hpp"
#include "gestura/io.hpp"
#include "gestura/parser.hpp"
#include "gestura/synthesis.hpp"
#include "gestura/syllable_graph.hpp"

namespace gestura {

struct RunConfig {
  std::string word;
  double period_ms = 100.0;
  double pause_ms = 150.0;
  double delta_o = 0.7;
  double delta_e = 0.7;
  double cvc_hold_ms = 0.0;
  double dt_ms = kDefaultFrameMs;
  double f0 = 120.0;
  std::optional<double> f0_end;
  double sample_rate = 16000.0;
  unsigned jobs = 1;
  PhonemeInventory inventory = PhonemeInventory::standard();
  PsiTable table = PsiTable::vlam_default();
  ArticulatoryMap map = ArticulatoryMap::standard();

  ParseOptions parse_options() const { return {period_ms, pause_ms, delta_o, delta_e, cvc_hold_ms}; }

  void validate() const {
    auto positive = [](double v, const char* what) {
      if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::kConfig, std::string(what) + " must be positive");
    };
    positive(period_ms, "T");
    positive(dt_ms, "dt");
    positive(sample_rate, "sample rate");
    positive(f0, "f0");
    if (!(pause_ms >= 0.0)) throw Error(ErrorKind::kConfig, "Tp must be non-negative");
    if (!(cvc_hold_ms >= 0.0)) throw Error(ErrorKind::kConfig, "CVC hold must be non-negative");
  }
};

struct SynthResult {
  WordGraph graph;
  ParameterFlow flow;
  FormantTrack track;
  EnvelopeCurve envelope;
  Waveform wave;
};

inline SynthResult synthesize_graph(const WordGraph& graph, const RunConfig& cfg) {
  cfg.validate();
  SynthResult r;
  r.graph = graph;
  r.flow = compile_word(graph, cfg.table, cfg.dt_ms);
  r.track = track_formants(r.flow, cfg.map, cfg.jobs);
  r.envelope = build_envelope(r.flow.markers, r.flow.size(), cfg.dt_ms, cfg.period_ms);
  RenderOptions ro;
  ro.source.f0_end = cfg.f0_end;
  r.wave = render(r.track, r.envelope, cfg.f0, cfg.sample_rate, cfg.dt_ms, ro);
  return r;
}

inline SynthResult synthesize(const RunConfig& cfg) {
  cfg.validate();
  return synthesize_graph(parse_word(cfg.word, cfg.inventory, cfg.parse_options()), cfg);
}

// ------------------------------------------------------------------ Locus

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Least-squares line y = slope * x + intercept.
inline Regression linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::kDomain, "regression needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::kDomain, "regression abscissae are all equal");
  Regression r;
  r.n = x.size();
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.slope * x[i] + r.intercept);
    ss_res += e * e;
  }
  r.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return r;
}

struct LocusRow {
  std::string vowel;
  std::string group;  ///< "all", or "velar"/"palatal" for a front/back consonant
  double f2_onset = 0.0;
  double f2_vowel = 0.0;
  bool valid = true;
};

struct LocusResult {
  std::string consonant;
  double onset_delay_ms = 30.0;
  std::vector<LocusRow> rows;
  std::map<std::string, Regression> regressions;
};

/// F2 30 ms after the consonant marker against F2 at the centre of the vowel
/// hold, for a CV with delta_o = 0.5 over every vowel of the inventory.
inline LocusResult run_locus(const std::string& consonant, const RunConfig& cfg, double delta_o = 0.5,
                             double onset_delay_ms = 30.0) {
  cfg.validate();
  const PhonemeInventory& inv = cfg.inventory;
  if (!inv.is_consonant(consonant)) {
    throw Error(ErrorKind::kConfig, "locus needs a consonant of the inventory, got '" + consonant + "'");
  }
  const bool split = std::holds_alternative<FrontBackLocation>(inv.consonant(consonant).location);
  SyllableOptions opt{cfg.period_ms, delta_o, cfg.delta_e, cfg.cvc_hold_ms};

  std::vector<std::string> vowels;
  for (const auto& [v, p] : inv.vowels()) vowels.push_back(v);
  LocusResult res;
  res.consonant = consonant;
  res.onset_delay_ms = onset_delay_ms;
  res.rows.resize(vowels.size());
  detail::parallel_for(vowels.size(), cfg.jobs, [&](std::size_t k) {
    const std::string& v = vowels[k];
    const SyllableGraph g = build_syllable({consonant}, v, {}, inv, opt);
    const ParameterFlow flow = compile_word(g, cfg.table, cfg.dt_ms);
    std::size_t c_frame = 0;
    for (const auto& m : flow.markers) {
      if (m.kind == MarkerKind::kConsonant) c_frame = m.frame;
    }
    const std::size_t on = c_frame + static_cast<std::size_t>(std::llround(onset_delay_ms / cfg.dt_ms));
    // The hold is the last segment; its centre frame.
    const std::size_t hold_frames = static_cast<std::size_t>(std::llround(g.arc(g.segments.back().vocalic_arc).duration_ms() / cfg.dt_ms));
    const std::size_t mid = flow.size() - hold_frames + hold_frames / 2;
    const FormantSet fo = formants_of(flow.frames.at(on), cfg.map);
    const FormantSet fv = formants_of(flow.frames.at(mid), cfg.map);
    LocusRow row;
    row.vowel = v;
    row.group = split ? (is_front_vowel_angle(inv.vowel(v).theta()) ? "palatal" : "velar") : "all";
    row.f2_onset = fo.f[1];
    row.f2_vowel = fv.f[1];
    row.valid = fo.valid && fv.valid;
    res.rows[k] = row;
  });
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : res.rows) {
    if (!r.valid) continue;
    groups[r.group].first.push_back(r.f2_vowel);
    groups[r.group].second.push_back(r.f2_onset);
  }
  for (const auto& [name, xy] : groups) res.regressions[name] = linear_fit(xy.first, xy.second);
  return res;
}

inline std::string locus_csv(const LocusResult& r) {
  std::string out = "consonant,vowel,group,f2_onset,f2_vowel,valid\n";
  for (const auto& row : r.rows) {
    out += r.consonant + ',' + row.vowel + ',' + row.group + ',' + format_number(row.f2_onset) + ',' +
           format_number(row.f2_vowel) + (row.valid ? ",1\n" : ",0\n");
  }
  return out;
}

// -------------------------------------------------------------- Surface

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out;
  if (n == 1) return {a};
  for (std::size_t k = 0; k < n; ++k) out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  return out;
}

/// n angles evenly spaced over [0, 2pi).
inline std::vector<double> angle_grid(std::size_t n) {
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  return out;
}

inline std::vector<double> corner_angles() {
  return {5.0 * std::numbers::pi / 3.0, std::numbers::pi, std::numbers::pi / 3.0};
}

// ------------------------------------------------------------ Transform

enum class TransformKind { kIdentity, kClusterFusion, kResyllabification };

inline const char* to_string(TransformKind k) {
  switch (k) {
    case TransformKind::kIdentity: return "identity";
    case TransformKind::kClusterFusion: return "cluster_fusion";
    case TransformKind::kResyllabification: return "resyllabification";
  }
  return "?";
}

struct TransformReport {
  TransformKind kind = TransformKind::kIdentity;
  WordGraph before;
  WordGraph after;
  int node_delta = 0;
  double duration_delta_ms = 0.0;
  std::vector<std::string> selections_before;  ///< consonant-chain selections, in time order
  std::vector<std::string> selections_after;
  std::optional<std::size_t> boundary;
};

inline std::vector<std::string> chain_selections(const WordGraph& g) {
  std::vector<std::string> out;
  for (const auto& s : g.segments) {
    if (s.kind == SegmentKind::kSuperimposed) out.push_back(g.arc(s.consonant_arcs.front()).selection.to_string());
  }
  return out;
}

/// Canonical dotted spelling of `text`: aliases resolved, spaces removed.
inline std::string canonical_label(std::string_view text, const PhonemeInventory& inv) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    std::string token(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    std::erase(token, ' ');
    if (token.empty()) throw ParseError(start, "empty syllable");
    if (start) out += '.';
    for (const auto& p : detail::tokenize(token, start, inv)) out += p.symbol;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

/// Find the rewrite turning `before` into a graph spelled `after`.
inline TransformReport find_transform(const WordGraph& before, std::string_view after, const PhonemeInventory& inv) {
  const std::string target = canonical_label(after, inv);
  TransformReport r;
  r.before = before;
  auto finish = [&](TransformKind kind, WordGraph g) {
    r.kind = kind;
    r.after = std::move(g);
    r.node_delta = static_cast<int>(r.after.nodes.size()) - static_cast<int>(r.before.nodes.size());
    r.duration_delta_ms = r.after.total_duration_ms() - r.before.total_duration_ms();
    r.selections_before = chain_selections(r.before);
    r.selections_after = chain_selections(r.after);
    return r;
  };
  if (before.label() == target) return finish(TransformKind::kIdentity, before);
  for (std::size_t b = 0; b + 1 < before.syllables.size(); ++b) {
    try {
      WordGraph g = fuse_cluster(before, b, inv);
      if (g.label() == target) {
        r.boundary = b;
        return finish(TransformKind::kClusterFusion, std::move(g));
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotApplicable && e.kind() != ErrorKind::kInventory) throw;
    }
  }
  try {
    WordGraph g = resyllabify_vc_chain(before);
    if (g.label() == target) return finish(TransformKind::kResyllabification, std::move(g));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNotApplicable) throw;
  }
  throw Error(ErrorKind::kNotApplicable,
              "'" + target + "' is not reachable from '" + before.label() + "' by a single rewrite");
}

}  // namespace gestura
