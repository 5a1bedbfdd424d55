#pragma once

// Compilation of planning graphs into a 7 x N articulatory parameter flow.
//
// Purely vocalic stretches follow  P(t) - omega = Re[psi conj(z(t))].
// Superimposed stretches split the articulators with the exclusive selection
// vectors:  P(t) - omega = Re[S_v o psi conj(z_v(t)) + S_c o psi conj(z_c(t))].

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gestura/coordination.hpp"
#include "gestura/error.hpp"
#include "gestura/inventory.hpp"
#include "gestura/syllable_graph.hpp"
#include "gestura/trajectory.hpp"

namespace gestura {

inline constexpr double kDefaultFrameMs = 1.0;

enum class MarkerKind { kOnsetAnchor, kVowel, kConsonant, kCodaAnchor, kPause };

inline const char* to_string(MarkerKind k) {
  switch (k) {
    case MarkerKind::kOnsetAnchor: return "onset_anchor";
    case MarkerKind::kVowel: return "vowel";
    case MarkerKind::kConsonant: return "consonant";
    case MarkerKind::kCodaAnchor: return "coda_anchor";
    case MarkerKind::kPause: return "pause";
  }
  return "?";
}

/// Arrival of the plan at a node (or the start of a pause). `frame` may equal
/// the flow length for the final node.
struct Marker {
  std::size_t frame = 0;
  std::string label;
  MarkerKind kind = MarkerKind::kVowel;
  std::size_t segment = 0;
  int node = -1;

  friend bool operator==(const Marker&, const Marker&) = default;
};

struct ParameterFlow {
  std::vector<ParameterVector> frames;
  double dt_ms = kDefaultFrameMs;
  std::vector<Marker> markers;

  std::size_t size() const { return frames.size(); }
  double duration_ms() const { return static_cast<double>(frames.size()) * dt_ms; }

  std::vector<double> row(Articulator a) const {
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f[index_of(a)]);
    return out;
  }
};

/// Frames contributed by one segment, plus the value at its arrival node
/// (which is also the first frame of whatever follows).
struct FlowSegment {
  std::vector<ParameterVector> frames;
  ParameterVector terminal{};
};

struct SuperimposedSpec {
  std::vector<ArcSpec> chain;
  ArcSpec vocalic;
  SelectionVector consonant_selection;
};

namespace detail {

inline std::int64_t frame_at(double t_ms, double dt) {
  return static_cast<std::int64_t>(std::llround(t_ms / dt));
}

inline void check_dt(double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kDomain, "frame period must be positive");
}

inline ParameterVector mix(Complex z_v, Complex z_c, const SelectionVector& sc,
                           const PsiTable& table) {
  const Complex zv = std::conj(z_v);
  const Complex zc = std::conj(z_c);
  ParameterVector p{};
  for (std::size_t i = 0; i < kArticulatorCount; ++i) {
    const Complex psi = table[i].complex_gain();
    const double s_c = sc.weight(i);
    const double s_v = 1.0 - s_c;
    p[i] = table[i].omega + (s_v * psi * zv + s_c * psi * zc).real();
  }
  return p;
}

inline Complex at_fraction(const ArcSpec& arc, std::int64_t j, std::int64_t begin, std::int64_t end) {
  if (end <= begin) return arc_position_unchecked(arc.duration_ms(), arc);
  const double u = static_cast<double>(j - begin) / static_cast<double>(end - begin);
  return arc_position_unchecked(u >= 1.0 ? arc.duration_ms() : u * arc.duration_ms(), arc);
}

/// Evaluate a segment starting at absolute time t0. Chain arcs and the vocalic
/// arc are each mapped onto whole frames; boundaries are rounded from
/// cumulative times so no error builds up across a word.
inline FlowSegment evaluate(const std::vector<ArcSpec>& chain, const ArcSpec& vocalic,
                            const SelectionVector& sc, const PsiTable& table, double t0,
                            double dt, std::vector<std::int64_t>* chain_ends = nullptr) {
  vocalic.validate();
  double chain_total = 0.0;
  for (const auto& a : chain) {
    a.validate();
    chain_total += a.duration_ms();
  }
  if (!chain.empty() &&
      std::abs(chain_total - vocalic.duration_ms()) > 1e-9 * std::max(1.0, chain_total)) {
    throw Error(ErrorKind::kConsistency,
                "consonant chain lasts " + std::to_string(chain_total) +
                    " ms but the vocalic arc lasts " + std::to_string(vocalic.duration_ms()) + " ms");
  }
  const std::int64_t f0 = frame_at(t0, dt);
  const std::int64_t f1 = frame_at(t0 + vocalic.duration_ms(), dt);
  std::vector<std::int64_t> bounds = {f0};
  double acc = t0;
  for (const auto& a : chain) {
    acc += a.duration_ms();
    bounds.push_back(frame_at(acc, dt));
  }
  if (!chain.empty()) bounds.back() = f1;
  if (chain_ends) chain_ends->assign(bounds.begin() + 1, bounds.end());

  FlowSegment seg;
  seg.frames.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, f1 - f0)));
  std::size_t k = 0;
  for (std::int64_t j = f0; j < f1; ++j) {
    const Complex zv = at_fraction(vocalic, j, f0, f1);
    Complex zc = zv;
    if (!chain.empty()) {
      while (k + 1 < chain.size() && j >= bounds[k + 1]) ++k;
      zc = at_fraction(chain[k], j, bounds[k], bounds[k + 1]);
    }
    seg.frames.push_back(chain.empty() ? mix(zv, zv, SelectionVector::none(), table)
                                       : mix(zv, zc, sc, table));
  }
  const Complex zv_end = arc_position_unchecked(vocalic.duration_ms(), vocalic);
  const Complex zc_end =
      chain.empty() ? zv_end : arc_position_unchecked(chain.back().duration_ms(), chain.back());
  seg.terminal = chain.empty() ? mix(zv_end, zv_end, SelectionVector::none(), table)
                               : mix(zv_end, zc_end, sc, table);
  return seg;
}

}  // namespace detail

/// A vocalic, pause or hold arc on its own.
inline FlowSegment compile_vocalic(const ArcSpec& arc, const PsiTable& table, double dt = kDefaultFrameMs) {
  detail::check_dt(dt);
  return detail::evaluate({}, arc, SelectionVector::none(), table, 0.0, dt);
}

/// Consonant chain and vocalic arc running side by side with exclusive
/// selections.
inline FlowSegment compile_superimposed(const SuperimposedSpec& spec, const PsiTable& table,
                                        double dt = kDefaultFrameMs) {
  detail::check_dt(dt);
  if (spec.chain.empty()) throw Error(ErrorKind::kConsistency, "superimposed segment without consonants");
  return detail::evaluate(spec.chain, spec.vocalic, spec.consonant_selection, table, 0.0, dt);
}

inline SuperimposedSpec superimposed_spec(const SyllableGraph& g, const Segment& seg) {
  SuperimposedSpec spec;
  for (int c : seg.consonant_arcs) spec.chain.push_back(arc_spec(g, g.arc(c)));
  const GraphArc& v = g.arc(seg.vocalic_arc);
  spec.vocalic = arc_spec(g, v);
  spec.consonant_selection = g.arc(seg.consonant_arcs.front()).selection;
  for (int c : seg.consonant_arcs) {
    if (!g.arc(c).selection.exclusive_with(v.selection)) {
      throw Error(ErrorKind::kConsistency, "selection vectors of a superimposed segment overlap");
    }
  }
  return spec;
}

/// Whole-word flow: segments in graph order, markers at node arrivals.
inline ParameterFlow compile_word(const WordGraph& g, const PsiTable& table = PsiTable::vlam_default(),
                                  double dt = kDefaultFrameMs) {
  detail::check_dt(dt);
  ParameterFlow flow;
  flow.dt_ms = dt;
  if (g.empty()) return flow;

  auto marker_for = [&](int node_id, std::size_t frame, std::size_t segment) {
    const GraphNode& n = g.node(node_id);
    MarkerKind kind = MarkerKind::kVowel;
    switch (n.role) {
      case NodeRole::kOnsetAnchor: kind = MarkerKind::kOnsetAnchor; break;
      case NodeRole::kVowel: kind = MarkerKind::kVowel; break;
      case NodeRole::kConsonant: kind = MarkerKind::kConsonant; break;
      case NodeRole::kCodaAnchor: kind = MarkerKind::kCodaAnchor; break;
    }
    return Marker{frame, n.symbol, kind, segment, node_id};
  };

  flow.markers.push_back(marker_for(g.initial_node(), 0, 0));
  double t0 = 0.0;
  for (std::size_t s = 0; s < g.segments.size(); ++s) {
    const Segment& seg = g.segments[s];
    const GraphArc& v = g.arc(seg.vocalic_arc);
    const std::int64_t f0 = detail::frame_at(t0, dt);
    FlowSegment out;
    try {
      if (seg.kind == SegmentKind::kSuperimposed) {
        const SuperimposedSpec spec = superimposed_spec(g, seg);
        std::vector<std::int64_t> ends;
        out = detail::evaluate(spec.chain, spec.vocalic, spec.consonant_selection, table, t0, dt, &ends);
        for (std::size_t k = 0; k < seg.consonant_arcs.size(); ++k) {
          flow.markers.push_back(
              marker_for(g.arc(seg.consonant_arcs[k]).to, static_cast<std::size_t>(ends[k]), s));
        }
      } else {
        out = detail::evaluate({}, arc_spec(g, v), SelectionVector::none(), table, t0, dt);
        const std::size_t f1 = static_cast<std::size_t>(f0) + out.frames.size();
        if (v.pause) {
          flow.markers.push_back(Marker{static_cast<std::size_t>(f0), "pause", MarkerKind::kPause, s, -1});
        }
        if (v.from != v.to) flow.markers.push_back(marker_for(v.to, f1, s));
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "segment " + std::to_string(s) + ": " + e.what());
    }
    flow.frames.insert(flow.frames.end(), out.frames.begin(), out.frames.end());
    t0 += v.duration_ms();
  }
  return flow;
}

/// Norm of the least-squares residual of p - omega against Re[psi conj(z)]
/// over all single planning points z. Zero (to rounding) for any frame driven
/// by one planning point.
inline double planning_residual(const ParameterVector& p, const PsiTable& table) {
  // Re[psi conj(x + iy)] = Re(psi) x + Im(psi) y.
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < kArticulatorCount; ++i) {
    const Complex psi = table[i].complex_gain();
    const double d = p[i] - table[i].omega;
    a11 += psi.real() * psi.real();
    a12 += psi.real() * psi.imag();
    a22 += psi.imag() * psi.imag();
    b1 += psi.real() * d;
    b2 += psi.imag() * d;
  }
  const double det = a11 * a22 - a12 * a12;
  const double x = (a22 * b1 - a12 * b2) / det;
  const double y = (a11 * b2 - a12 * b1) / det;
  double ss = 0.0;
  for (std::size_t i = 0; i < kArticulatorCount; ++i) {
    const Complex psi = table[i].complex_gain();
    const double r = p[i] - table[i].omega - (psi.real() * x + psi.imag() * y);
    ss += r * r;
  }
  return std::sqrt(ss);
}

}  // namespace gestura
