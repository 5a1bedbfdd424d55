#pragma once

// Syllable graphs: nodes located in the planning plane, arcs carrying timing,
// orientation and selection. A graph is laid out as a sequence of temporal
// segments, each either superimposed (a consonant chain running alongside one
// vocalic arc, both n*T long) or purely vocalic (hold, diphthong, pause).
// Words are graphs too; they are built by joining syllable graphs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gestura/coordination.hpp"
#include "gestura/error.hpp"
#include "gestura/inventory.hpp"
#include "gestura/trajectory.hpp"

namespace gestura {

enum class NodeRole { kOnsetAnchor, kVowel, kConsonant, kCodaAnchor };

inline const char* to_string(NodeRole role) {
  switch (role) {
    case NodeRole::kOnsetAnchor: return "onset_anchor";
    case NodeRole::kVowel: return "vowel";
    case NodeRole::kConsonant: return "consonant";
    case NodeRole::kCodaAnchor: return "coda_anchor";
  }
  return "?";
}

struct GraphNode {
  int id = 0;
  NodeRole role = NodeRole::kVowel;
  PolarPoint location;
  std::string symbol;
};

enum class ArcMotion { kO1, kO2, kStationary };
enum class Branch { kConsonantal, kVocalic, kNeutral };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::kConsonantal: return "consonantal";
    case Branch::kVocalic: return "vocalic";
    case Branch::kNeutral: return "neutral";
  }
  return "?";
}

struct GraphArc {
  int id = 0;
  int from = 0;
  int to = 0;
  ArcMotion motion = ArcMotion::kO2;
  int periods = 1;
  double period_ms = 100.0;
  bool pause = false;
  SelectionVector selection = SelectionVector::all();
  Branch branch = Branch::kNeutral;
  double shape_k = kVowelArcShape;
  int nu = 1;

  double duration_ms() const { return periods * period_ms; }

  /// T1, T2, 2T2, 3T2 for moving arcs; T for a hold; Tp for a pause.
  std::string timing_label() const {
    if (pause) return "Tp";
    if (motion == ArcMotion::kStationary) return "T";
    std::string prefix = periods == 1 ? "" : std::to_string(periods);
    return prefix + (motion == ArcMotion::kO1 ? "T1" : "T2");
  }
};

enum class SegmentKind { kSuperimposed, kVocalic };

struct Segment {
  SegmentKind kind = SegmentKind::kVocalic;
  std::vector<int> consonant_arcs;  ///< in temporal order
  int vocalic_arc = 0;
};

/// Phonological bookkeeping for one syllable of a graph.
struct Syllable {
  std::vector<std::string> onset;
  std::vector<std::string> nucleus;
  std::vector<std::string> coda;
  double delta_o = 0.7;
  double delta_e = 0.7;
  double period_ms = 100.0;
  std::size_t first_segment = 0;
  std::size_t segment_count = 0;

  std::string label() const {
    std::string out;
    for (const auto& s : onset) out += s;
    for (const auto& s : nucleus) out += s;
    for (const auto& s : coda) out += s;
    return out;
  }
  bool is_vc() const { return onset.empty() && nucleus.size() == 1 && !coda.empty(); }
};

struct SyllableGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphArc> arcs;
  std::vector<Segment> segments;
  std::vector<Syllable> syllables;
  bool cv_aligned = false;

  bool empty() const { return segments.empty(); }

  const GraphNode& node(int id) const {
    for (const auto& n : nodes) {
      if (n.id == id) return n;
    }
    throw Error(ErrorKind::kConsistency, "no node with id " + std::to_string(id));
  }
  const GraphArc& arc(int id) const { return arcs.at(static_cast<std::size_t>(id)); }

  int initial_node() const { return arc(segments.front().vocalic_arc).from; }
  int terminal_node() const { return arc(segments.back().vocalic_arc).to; }

  double total_duration_ms() const {
    double total = 0.0;
    for (const auto& s : segments) total += arc(s.vocalic_arc).duration_ms();
    return total;
  }

  /// Syllable labels joined by '.'.
  std::string label() const {
    std::string out;
    for (std::size_t i = 0; i < syllables.size(); ++i) {
      if (i) out += ".";
      out += syllables[i].label();
    }
    return out;
  }

  std::vector<std::string> timing_labels() const {
    std::vector<std::string> out;
    for (const auto& a : arcs) out.push_back(a.timing_label());
    return out;
  }
  std::vector<SelectionVector> selections() const {
    std::vector<SelectionVector> out;
    for (const auto& a : arcs) out.push_back(a.selection);
    return out;
  }
  std::vector<NodeRole> roles() const {
    std::vector<NodeRole> out;
    for (const auto& n : nodes) out.push_back(n.role);
    return out;
  }
};

using WordGraph = SyllableGraph;

/// Trajectory of an arc in planning-plane terms.
inline ArcSpec arc_spec(const SyllableGraph& g, const GraphArc& a) {
  ArcSpec spec;
  spec.from_point = g.node(a.from).location;
  spec.to_point = g.node(a.to).location;
  spec.orientation = a.motion == ArcMotion::kO1 ? Orientation::kO1 : Orientation::kO2;
  spec.n_periods = a.periods;
  spec.period_ms = a.period_ms;
  spec.nu = a.nu;
  spec.shape_k = a.shape_k;
  if (a.motion == ArcMotion::kStationary) spec.to_point = spec.from_point;
  return spec;
}

struct SyllableOptions {
  double period_ms = 100.0;
  double delta_o = 0.7;
  double delta_e = 0.7;
  /// Stationary vowel between the two superimposed segments of a CVC.
  double cvc_hold_ms = 0.0;
};

struct SyllableSpec {
  std::vector<std::string> onset;
  std::vector<std::string> nucleus;
  std::vector<std::string> coda;
};

namespace detail {

inline void check_delta(double d, const char* what) {
  if (!(d > 0.0) || d > 1.0) {
    std::ostringstream os;
    os << what << " must lie in (0, 1], got " << d;
    throw Error(ErrorKind::kDomain, os.str());
  }
}

class GraphBuilder {
 public:
  explicit GraphBuilder(SyllableGraph& g) : g_(g) {}

  int add_node(NodeRole role, PolarPoint loc, std::string symbol) {
    const int id = static_cast<int>(g_.nodes.size());
    g_.nodes.push_back({id, role, loc, std::move(symbol)});
    return id;
  }

  int add_arc(int from, int to, ArcMotion motion, int periods, double period_ms,
              SelectionVector sel, Branch branch, double k) {
    GraphArc a;
    a.id = static_cast<int>(g_.arcs.size());
    a.from = from;
    a.to = to;
    a.motion = motion;
    a.periods = periods;
    a.period_ms = period_ms;
    a.selection = sel;
    a.branch = branch;
    a.shape_k = k;
    g_.arcs.push_back(a);
    return a.id;
  }

  /// Consonant chain from `start` through `consonants` to `end`, with the
  /// vocalic arc start -> end running alongside.
  void superimposed(int start, const std::vector<int>& consonants, int end,
                    SelectionVector sc, double period_ms) {
    Segment seg;
    seg.kind = SegmentKind::kSuperimposed;
    int prev = start;
    for (std::size_t i = 0; i <= consonants.size(); ++i) {
      const int next = i < consonants.size() ? consonants[i] : end;
      const ArcMotion motion = i == 0 ? ArcMotion::kO1 : ArcMotion::kO2;
      seg.consonant_arcs.push_back(
          add_arc(prev, next, motion, 1, period_ms, sc, Branch::kConsonantal, kConsonantArcShape));
      prev = next;
    }
    const int n = static_cast<int>(consonants.size()) + 1;
    seg.vocalic_arc = add_arc(start, end, ArcMotion::kO2, n, period_ms, sc.complement(),
                              Branch::kVocalic, kVowelArcShape);
    g_.segments.push_back(std::move(seg));
  }

  void vocalic(int from, int to, ArcMotion motion, double period_ms, bool pause = false) {
    Segment seg;
    seg.kind = SegmentKind::kVocalic;
    seg.vocalic_arc = add_arc(from, to, motion, 1, period_ms, SelectionVector::all(),
                              Branch::kNeutral, kVowelArcShape);
    g_.arcs.back().pause = pause;
    g_.segments.push_back(std::move(seg));
  }

 private:
  SyllableGraph& g_;
};

inline SelectionVector chain_selection(const std::vector<std::string>& consonants,
                                       const PhonemeInventory& inv) {
  if (consonants.size() == 1) return inv.consonant(consonants[0]).selection;
  return inv.cluster_selection(consonants[0], consonants[1]);
}

/// Replace every reference to node `from_id` by `to_id`.
inline void redirect(SyllableGraph& g, int from_id, int to_id) {
  for (auto& a : g.arcs) {
    if (a.from == from_id) a.from = to_id;
    if (a.to == from_id) a.to = to_id;
  }
}

/// Drop nodes not referenced by any arc and renumber nodes and arcs densely.
/// Arcs are reordered to follow the segment sequence.
inline void compact(SyllableGraph& g) {
  std::vector<int> live;
  for (const auto& seg : g.segments) {
    live.insert(live.end(), seg.consonant_arcs.begin(), seg.consonant_arcs.end());
    live.push_back(seg.vocalic_arc);
  }
  std::map<int, int> node_map;
  std::vector<GraphNode> nodes;
  for (const auto& n : g.nodes) {
    const bool used = std::any_of(live.begin(), live.end(), [&](int id) {
      return g.arc(id).from == n.id || g.arc(id).to == n.id;
    });
    if (!used) continue;
    node_map[n.id] = static_cast<int>(nodes.size());
    nodes.push_back(n);
    nodes.back().id = node_map[n.id];
  }
  std::vector<GraphArc> arcs;
  auto take = [&](int old_id) {
    GraphArc a = g.arc(old_id);
    a.id = static_cast<int>(arcs.size());
    a.from = node_map.at(a.from);
    a.to = node_map.at(a.to);
    arcs.push_back(a);
    return a.id;
  };
  for (auto& seg : g.segments) {
    for (auto& c : seg.consonant_arcs) c = take(c);
    seg.vocalic_arc = take(seg.vocalic_arc);
  }
  g.nodes = std::move(nodes);
  g.arcs = std::move(arcs);
}

/// Append `right` to `left` with ids shifted; returns the node-id offset.
inline int append(SyllableGraph& left, const SyllableGraph& right) {
  const int node_offset = static_cast<int>(left.nodes.size());
  const int arc_offset = static_cast<int>(left.arcs.size());
  const std::size_t seg_offset = left.segments.size();
  for (auto n : right.nodes) {
    n.id += node_offset;
    left.nodes.push_back(std::move(n));
  }
  for (auto a : right.arcs) {
    a.id += arc_offset;
    a.from += node_offset;
    a.to += node_offset;
    left.arcs.push_back(a);
  }
  for (auto s : right.segments) {
    for (auto& c : s.consonant_arcs) c += arc_offset;
    s.vocalic_arc += arc_offset;
    left.segments.push_back(std::move(s));
  }
  for (auto syl : right.syllables) {
    syl.first_segment += seg_offset;
    left.syllables.push_back(std::move(syl));
  }
  left.cv_aligned = left.cv_aligned && right.cv_aligned;
  return node_offset;
}

inline void check_well_formed(const SyllableGraph& g) {
  for (const auto& seg : g.segments) {
    if (seg.kind != SegmentKind::kSuperimposed) continue;
    const GraphArc& v = g.arc(seg.vocalic_arc);
    double chain = 0.0;
    for (int c : seg.consonant_arcs) {
      chain += g.arc(c).duration_ms();
      if (!g.arc(c).selection.exclusive_with(v.selection)) {
        throw Error(ErrorKind::kConsistency, "consonant and vocalic selections overlap");
      }
    }
    if (std::abs(chain - v.duration_ms()) > 1e-9 * std::max(1.0, chain)) {
      throw Error(ErrorKind::kConsistency, "consonant chain and vocalic arc durations differ");
    }
  }
}

}  // namespace detail

/// Graph of one syllable. Onset and coda hold at most two consonants; a
/// nucleus of two or more vowels is a diphthong.
inline SyllableGraph build_syllable(const SyllableSpec& spec, const PhonemeInventory& inv,
                                    const SyllableOptions& opt = {}) {
  if (spec.nucleus.empty()) {
    throw Error(ErrorKind::kUnsupportedStructure, "syllable has no vowel");
  }
  if (spec.onset.size() > 2 || spec.coda.size() > 2) {
    throw Error(ErrorKind::kUnsupportedStructure,
                "consonant clusters longer than 2 are not supported");
  }
  if (!(opt.period_ms > 0.0)) throw Error(ErrorKind::kDomain, "period T must be positive");
  if (opt.cvc_hold_ms < 0.0) throw Error(ErrorKind::kDomain, "vowel hold must be non-negative");
  detail::check_delta(opt.delta_o, "delta_o");
  detail::check_delta(opt.delta_e, "delta_e");

  const std::string& first_vowel = spec.nucleus.front();
  const std::string& last_vowel = spec.nucleus.back();
  const PolarPoint v_first = inv.vowel(first_vowel);
  const PolarPoint v_last = inv.vowel(last_vowel);
  for (const auto& v : spec.nucleus) inv.vowel(v);

  auto resolve = [&](const std::vector<std::string>& cs, double theta) {
    std::vector<PolarPoint> out;
    for (const auto& c : cs) out.push_back(inv.consonant_location(c, theta, cs.size() > 1));
    return out;
  };
  const auto onset_locs = resolve(spec.onset, v_first.theta());
  const auto coda_locs = resolve(spec.coda, v_last.theta());
  std::optional<SelectionVector> onset_sel, coda_sel;
  if (!spec.onset.empty()) onset_sel = detail::chain_selection(spec.onset, inv);
  if (!spec.coda.empty()) coda_sel = detail::chain_selection(spec.coda, inv);

  SyllableGraph g;
  detail::GraphBuilder b(g);
  const double T = opt.period_ms;

  int onset_anchor = -1;
  std::vector<int> onset_nodes, vowel_nodes, coda_nodes;
  if (!spec.onset.empty()) {
    onset_anchor = b.add_node(NodeRole::kOnsetAnchor, v_first.scaled(opt.delta_o), first_vowel);
    for (std::size_t i = 0; i < spec.onset.size(); ++i) {
      onset_nodes.push_back(b.add_node(NodeRole::kConsonant, onset_locs[i], spec.onset[i]));
    }
  }
  for (const auto& v : spec.nucleus) {
    vowel_nodes.push_back(b.add_node(NodeRole::kVowel, inv.vowel(v), v));
  }
  int coda_anchor = -1;
  if (!spec.coda.empty()) {
    for (std::size_t i = 0; i < spec.coda.size(); ++i) {
      coda_nodes.push_back(b.add_node(NodeRole::kConsonant, coda_locs[i], spec.coda[i]));
    }
    coda_anchor = b.add_node(NodeRole::kCodaAnchor, v_last.scaled(opt.delta_e), last_vowel);
  }

  if (onset_anchor >= 0) b.superimposed(onset_anchor, onset_nodes, vowel_nodes.front(), *onset_sel, T);
  for (std::size_t i = 0; i + 1 < vowel_nodes.size(); ++i) {
    b.vocalic(vowel_nodes[i], vowel_nodes[i + 1], ArcMotion::kO2, T);
  }
  // The vowel is lengthened only before its coarticulation with a coda.
  const double hold = (!spec.onset.empty() && !spec.coda.empty()) ? opt.cvc_hold_ms : T;
  if (hold > 0.0) b.vocalic(vowel_nodes.back(), vowel_nodes.back(), ArcMotion::kStationary, hold);
  if (coda_anchor >= 0) b.superimposed(vowel_nodes.back(), coda_nodes, coda_anchor, *coda_sel, T);

  Syllable syl;
  syl.onset = spec.onset;
  syl.nucleus = spec.nucleus;
  syl.coda = spec.coda;
  syl.delta_o = opt.delta_o;
  syl.delta_e = opt.delta_e;
  syl.period_ms = T;
  syl.first_segment = 0;
  syl.segment_count = g.segments.size();
  g.syllables.push_back(std::move(syl));
  return g;
}

inline SyllableGraph build_syllable(const std::vector<std::string>& onset, const std::string& vowel,
                                    const std::vector<std::string>& coda,
                                    const PhonemeInventory& inv, const SyllableOptions& opt = {}) {
  return build_syllable(SyllableSpec{onset, {vowel}, coda}, inv, opt);
}

/// Join two graphs without a pause. The anchoring vowel depends on the
/// context: xV.Cx shares left V as right V_o, xC.Cx shares left V_e as right
/// V_o, xC.Vx replaces left V_e by right V. Two adjacent vowels (xV.Vx) are
/// linked by a one-period vocalic transition.
inline WordGraph concatenate(const WordGraph& left, const WordGraph& right) {
  if (left.empty()) return right;
  if (right.empty()) return left;
  detail::check_well_formed(left);
  detail::check_well_formed(right);

  WordGraph out = left;
  const int lt = left.terminal_node();
  const int offset = detail::append(out, right);
  const int rf = right.initial_node() + offset;
  const NodeRole left_role = out.node(lt).role;
  const NodeRole right_role = out.node(rf).role;
  const bool left_closed = left_role == NodeRole::kCodaAnchor;
  const bool right_onset = right_role == NodeRole::kOnsetAnchor;

  if (right_onset) {
    detail::redirect(out, rf, lt);  // V = V_o or V_e = V_o
  } else if (left_closed) {
    detail::redirect(out, lt, rf);  // V_e = V
  } else {
    const double period = right.syllables.empty() ? 100.0 : right.syllables.front().period_ms;
    detail::GraphBuilder b(out);
    b.vocalic(lt, rf, ArcMotion::kO2, period);
    // Keep segments in time order: the transition sits at the junction.
    Segment link = out.segments.back();
    out.segments.pop_back();
    const std::size_t at = left.segments.size();
    out.segments.insert(out.segments.begin() + static_cast<std::ptrdiff_t>(at), link);
    for (std::size_t i = left.syllables.size(); i < out.syllables.size(); ++i) {
      out.syllables[i].first_segment += 1;
    }
  }
  detail::compact(out);
  return out;
}

/// Join two graphs across a pause of `pause_ms`: a neutral vocalic arc from
/// the left terminal node (V_e, or V for an open syllable) to the right
/// initial node (V_o, or V). A zero pause is plain concatenation.
inline WordGraph insert_pause(const WordGraph& left, const WordGraph& right, double pause_ms) {
  if (pause_ms < 0.0 || !std::isfinite(pause_ms)) {
    throw Error(ErrorKind::kDomain, "pause duration must be non-negative");
  }
  if (pause_ms == 0.0) return concatenate(left, right);
  if (left.empty() || right.empty()) {
    throw Error(ErrorKind::kDomain, "pause needs a graph on both sides");
  }
  detail::check_well_formed(left);
  detail::check_well_formed(right);
  WordGraph out = left;
  const int lt = left.terminal_node();
  const int offset = detail::append(out, right);
  const int rf = right.initial_node() + offset;
  detail::GraphBuilder b(out);
  b.vocalic(lt, rf, ArcMotion::kO2, pause_ms, /*pause=*/true);
  Segment link = out.segments.back();
  out.segments.pop_back();
  out.segments.insert(out.segments.begin() + static_cast<std::ptrdiff_t>(left.segments.size()), link);
  for (std::size_t i = left.syllables.size(); i < out.syllables.size(); ++i) {
    out.syllables[i].first_segment += 1;
  }
  detail::compact(out);
  return out;
}

/// Regroup a chain of VC syllables (joined without pause, unit deltas) as
/// V.CV...C. Only the syllable labels move; nodes, arcs and timing stay.
inline WordGraph resyllabify_vc_chain(const WordGraph& g) {
  if (g.cv_aligned) return g;
  for (const auto& a : g.arcs) {
    if (a.pause && a.duration_ms() > 0.0) {
      throw Error(ErrorKind::kNotApplicable, "resyllabification needs a zero pause");
    }
  }
  bool any = false;
  for (const auto& s : g.syllables) {
    if (!s.is_vc()) {
      throw Error(ErrorKind::kNotApplicable,
                  "resyllabification applies to VC syllables only, found /" + s.label() + "/");
    }
    if (s.delta_o != 1.0 || s.delta_e != 1.0) {
      throw Error(ErrorKind::kNotApplicable, "resyllabification needs delta_o = delta_e = 1");
    }
    any = true;
  }
  if (!any) throw Error(ErrorKind::kNotApplicable, "no VC syllable to regroup");

  // Each VC syllable is [hold V][coda segment]; the regrouped syllables are
  // [hold V1], [coda1 + hold V2], ..., [coda_n].
  std::vector<Syllable> out;
  Syllable first = g.syllables.front();
  first.coda.clear();
  first.segment_count = 1;
  out.push_back(first);
  for (std::size_t i = 0; i < g.syllables.size(); ++i) {
    const Syllable& cur = g.syllables[i];
    Syllable next;
    next.onset = cur.coda;
    next.delta_o = 1.0;
    next.delta_e = 1.0;
    next.period_ms = cur.period_ms;
    next.first_segment = cur.first_segment + cur.segment_count - 1;
    next.segment_count = 1;
    if (i + 1 < g.syllables.size()) {
      next.nucleus = g.syllables[i + 1].nucleus;
      next.segment_count = 2;
    }
    out.push_back(std::move(next));
  }
  WordGraph r = g;
  r.syllables = std::move(out);
  r.cv_aligned = true;
  return r;
}

/// Fuse the coda of syllable `boundary` with the onset of syllable
/// `boundary + 1` into one CC segment of 3T. Both superimposed segments must
/// hang on the same vowel (delta_e = delta_o = 1 at the junction). The junction
/// node disappears and the pair's cluster selection replaces the two
/// single-consonant selections.
inline WordGraph fuse_cluster(const WordGraph& g, std::size_t boundary, const PhonemeInventory& inv) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorKind::kNotApplicable, "cluster fusion not applicable: " + why);
  };
  if (boundary + 1 >= g.syllables.size()) fail("no syllable boundary at that index");
  const Syllable& left = g.syllables[boundary];
  const Syllable& right = g.syllables[boundary + 1];
  if (left.coda.size() != 1) fail("left syllable needs exactly one coda consonant");
  if (right.onset.size() != 1) fail("right syllable needs exactly one onset consonant");
  if (left.delta_e != 1.0 || right.delta_o != 1.0) fail("junction deltas must equal 1");
  if (!inv.has_cluster_rule(left.coda[0], right.onset[0])) {
    fail("no cluster rule for /" + left.coda[0] + right.onset[0] + "/");
  }
  const std::size_t seg_a = left.first_segment + left.segment_count - 1;
  const std::size_t seg_b = right.first_segment;
  if (seg_b != seg_a + 1) fail("syllables are separated by a pause or transition");
  const Segment& a = g.segments[seg_a];
  const Segment& b = g.segments[seg_b];
  if (a.kind != SegmentKind::kSuperimposed || b.kind != SegmentKind::kSuperimposed ||
      a.consonant_arcs.size() != 2 || b.consonant_arcs.size() != 2) {
    fail("junction is not two single-consonant superimposed segments");
  }
  const GraphArc& va = g.arc(a.vocalic_arc);
  const GraphArc& vb = g.arc(b.vocalic_arc);
  const int junction = va.to;
  if (vb.from != junction) fail("segments do not share the junction node");
  const int vowel_left = va.from;
  const int vowel_right = vb.to;
  if (g.node(junction).location != g.node(vowel_left).location) {
    fail("junction anchor is not the left vowel");
  }
  const int c1 = g.arc(a.consonant_arcs[0]).to;
  const int c2 = g.arc(b.consonant_arcs[0]).to;

  WordGraph out = g;
  const std::vector<std::string> pair = {left.coda[0], right.onset[0]};
  const SelectionVector sc = inv.cluster_selection(pair[0], pair[1]);
  const double right_theta = g.node(vowel_right).location.theta();
  for (auto& n : out.nodes) {
    if (n.id == c1) n.location = inv.consonant_location(pair[0], right_theta, true);
    if (n.id == c2) n.location = inv.consonant_location(pair[1], right_theta, true);
  }

  // Build the fused segment on the side, then splice it in place of a and b.
  const double period = g.arc(b.consonant_arcs[0]).period_ms;
  detail::GraphBuilder builder(out);
  builder.superimposed(vowel_left, {c1, c2}, vowel_right, sc, period);
  Segment fused = out.segments.back();
  out.segments.pop_back();
  out.segments.erase(out.segments.begin() + static_cast<std::ptrdiff_t>(seg_a),
                     out.segments.begin() + static_cast<std::ptrdiff_t>(seg_b) + 1);
  out.segments.insert(out.segments.begin() + static_cast<std::ptrdiff_t>(seg_a), fused);

  Syllable& nl = out.syllables[boundary];
  Syllable& nr = out.syllables[boundary + 1];
  nl.coda.clear();
  nl.segment_count -= 1;
  nr.onset = pair;
  nr.first_segment = seg_a;
  for (std::size_t i = boundary + 2; i < out.syllables.size(); ++i) {
    out.syllables[i].first_segment -= 1;
  }
  out.cv_aligned = false;
  detail::compact(out);  // drops the six old arcs and the junction node
  return out;
}

}  // namespace gestura
