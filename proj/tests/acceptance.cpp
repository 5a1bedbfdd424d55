// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace gestura;
using namespace testing_support;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

const PhonemeInventory& inv() {
  static const PhonemeInventory i = PhonemeInventory::standard();
  return i;
}

ParseOptions opts(double delta = 0.7, double pause = 150) {
  ParseOptions o;
  o.delta_o = o.delta_e = delta;
  o.pause_ms = pause;
  return o;
}

std::size_t marker(const ParameterFlow& f, const std::string& label) {
  for (const auto& m : f.markers) {
    if (m.label == label && m.kind == MarkerKind::kConsonant) return m.frame;
  }
  throw Error(ErrorKind::kConsistency, "no marker " + label);
}

void criterion1(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> r(0, 1.2), th(-2 * kPi, 4 * kPi);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const double rho = r(rng), theta = th(rng);
    worst = std::max(worst, max_abs_diff(coordinate(PolarPoint(rho, theta)), closed_form(rho, theta)));
  }
  o.check(worst <= 1e-12, "random points deviate by " + format_number(worst));
  const ParameterVector a = {-1.5, 1.25, -1.5, -3, -1.5, 3.0, 1.0};
  const ParameterVector i = {0.75, -2.5, -1.5, 1.5, -1.5, -0.75, 1.0};
  const ParameterVector u = {0.75, 1.25, 3, 1.5, 3, -0.75, -2};
  o.check(max_abs_diff(coordinate(inv().vowel("a")), a) <= 1e-12, "/a/ vector");
  o.check(max_abs_diff(coordinate(inv().vowel("i")), i) <= 1e-12, "/i/ vector");
  o.check(max_abs_diff(coordinate(inv().vowel("u")), u) <= 1e-12, "/u/ vector");
}

ArcSpec arc(PolarPoint a, PolarPoint b, Orientation o, double k) {
  ArcSpec s;
  s.from_point = a;
  s.to_point = b;
  s.orientation = o;
  s.shape_k = k;
  s.n_periods = 1;
  s.period_ms = 100;
  return s;
}

void criterion2(Outcome& o) {
  const PolarPoint i = inv().vowel("i"), a = inv().vowel("a"), b = inv().consonant_location("b", a.theta());
  for (Orientation orient : {Orientation::kO1, Orientation::kO2}) {
    for (auto [p, q] : {std::pair{i, a}, std::pair{i, b}, std::pair{b, a}}) {
      for (double k : {10.0, 30.0}) {
        const ArcSpec s = arc(p, q, orient, k);
        o.check(std::abs(arc_position(0, s) - p.to_complex()) <= 1e-12, "start point");
        o.check(std::abs(arc_position(100, s) - q.to_complex()) <= 1e-12, "end point");
      }
      auto deviation = [&](double k) {
        const auto z = sample_arc(arc(p, q, orient, k), 0.5);
        double m = 0;
        for (const auto& s : z) m = std::max(m, chord_distance(s, z.front(), z.back()));
        return m;
      };
      const double straight = deviation(1e6), curved = deviation(10);
      o.check(straight < 1e-4, "K=1e6 chord deviation " + format_number(straight));
      o.check(curved > straight, "K=10 not more curved");
    }
  }
}

void criterion3(Outcome& o) {
  const SelectionVector b = SelectionVector::from_indices({1, 2, 6});
  const SyllableGraph cv = build_syllable({"b"}, "i", {}, inv());
  o.check(cv.nodes.size() == 3 && cv.arcs.size() == 4, "CV size");
  o.check(cv.timing_labels() == std::vector<std::string>{"T1", "T2", "2T2", "T"}, "CV timing");
  o.check(cv.selections() == std::vector<SelectionVector>{b, b, b.complement(), SelectionVector::all()}, "CV selections");
  o.check(cv.roles() == std::vector<NodeRole>{NodeRole::kOnsetAnchor, NodeRole::kConsonant, NodeRole::kVowel}, "CV roles");

  const SyllableGraph cvc = build_syllable({"b"}, "i", {"g"}, inv());
  o.check(cvc.nodes.size() == 5, "CVC node count");
  o.check(cvc.roles() == std::vector<NodeRole>{NodeRole::kOnsetAnchor, NodeRole::kConsonant, NodeRole::kVowel,
                                                NodeRole::kConsonant, NodeRole::kCodaAnchor},
          "CVC roles");

  const SelectionVector gb = SelectionVector::from_indices({1, 2, 3, 6});
  const SyllableGraph ccv = build_syllable({"g", "b"}, "i", {}, inv());
  o.check(ccv.nodes.size() == 4 && ccv.arcs.size() == 5, "CCV size");
  o.check(ccv.timing_labels() == std::vector<std::string>{"T1", "T2", "T2", "3T2", "T"}, "CCV timing");
  o.check(ccv.selections() == std::vector<SelectionVector>{gb, gb, gb, gb.complement(), SelectionVector::all()},
          "CCV selections");
}

void criterion4(Outcome& o) {
  const PsiTable t = PsiTable::vlam_default();
  for (const std::string w : {"bi", "gbi", "big", "dau"}) {
    const WordGraph g = parse_word(w, inv());
    for (const auto& seg : g.segments) {
      if (seg.kind != SegmentKind::kSuperimposed) continue;
      SuperimposedSpec spec = superimposed_spec(g, seg);
      for (int c : seg.consonant_arcs) {
        o.check(g.arc(seg.vocalic_arc).selection == g.arc(c).selection.complement(), w + " selections not exclusive");
      }
      spec.consonant_selection = SelectionVector::none();
      const FlowSegment sup = compile_superimposed(spec, t);
      const FlowSegment voc = compile_vocalic(spec.vocalic, t);
      double d = 0;
      for (std::size_t j = 0; j < voc.frames.size(); ++j) d = std::max(d, max_abs_diff(sup.frames[j], voc.frames[j]));
      o.check(sup.frames.size() == voc.frames.size() && d <= 1e-12, w + " neutral selection differs");
    }
  }
  // Junctions: the frame at each segment boundary is the shared node, exactly.
  for (const std::string w : {"ibia", "big.bi", "gbi"}) {
    const WordGraph g = parse_word(w, inv());
    const ParameterFlow f = compile_word(g);
    double t0 = 0;
    for (std::size_t s = 0; s + 1 < g.segments.size(); ++s) {
      t0 += g.arc(g.segments[s].vocalic_arc).duration_ms();
      const std::size_t j = static_cast<std::size_t>(std::llround(t0));
      const FlowSegment next = compile_vocalic(arc_spec(g, g.arc(g.segments[s + 1].vocalic_arc)), t);
      const ParameterVector node = coordinate(g.node(g.arc(g.segments[s].vocalic_arc).to).location);
      o.check(max_abs_diff(f.frames[j], node) <= 1e-12, w + " junction " + std::to_string(s));
      o.check(f.frames[j] == next.frames.front(), w + " junction not bitwise continuous " + std::to_string(s));
    }
  }
}

void criterion5(Outcome& o) {
  const ParameterFlow f = compile_word(parse_word("ibi", inv()));
  const std::size_t body = static_cast<std::size_t>(Articulator::kBody);
  const double steady = coordinate(inv().vowel("i"))[body];
  const std::size_t b = marker(f, "b");
  double dev = 0;
  for (std::size_t j = b - 25; j <= b + 25; ++j) dev = std::max(dev, std::abs(f.frames[j][body] - steady));
  o.check(dev >= 0.5, "Body deviation " + format_number(dev));
  double back = 0;
  for (std::size_t j = f.size() - 50; j < f.size(); ++j) back = std::max(back, std::abs(f.frames[j][body] - steady));
  o.check(back <= 1e-3, "Body return " + format_number(back));
}

void criterion6(Outcome& o) {
  const PsiTable t = PsiTable::vlam_default();
  const ParameterFlow f = compile_word(parse_word("ibi", inv()));
  const double r = planning_residual(f.frames[marker(f, "b")], t);
  o.check(r > 1e-6, "closure residual " + format_number(r));
  double worst = 0;
  for (const auto& p : compile_word(parse_word("ia", inv())).frames) worst = std::max(worst, planning_residual(p, t));
  o.check(worst < 1e-9, "diphthong residual " + format_number(worst));
}

void criterion7(Outcome& o) {
  const FormantSet tube = formants(AreaFunction::uniform(29, 17.5, 3.0));
  const std::array<double, 4> ref = {500, 1500, 2500, 3500};
  for (int n = 0; n < 4; ++n) {
    o.check(std::abs(tube.f[n] - ref[n]) <= 0.02 * ref[n], "tube F" + std::to_string(n + 1) + " " + format_number(tube.f[n]));
  }
  const ArticulatoryMap m = ArticulatoryMap::standard();
  const FormantSet i = formants_of(coordinate(inv().vowel("i")), m);
  const FormantSet a = formants_of(coordinate(inv().vowel("a")), m);
  const FormantSet u = formants_of(coordinate(inv().vowel("u")), m);
  o.check(i.valid && a.valid && u.valid, "corner formants invalid");
  o.check(a.f[0] >= i.f[0] + 50, "F1(a) > F1(i)");
  o.check(a.f[0] >= u.f[0] + 50, "F1(a) > F1(u)");
  o.check(i.f[1] >= a.f[1] + 50, "F2(i) > F2(a)");
  o.check(a.f[1] >= u.f[1] + 50, "F2(a) > F2(u)");
}

void criterion8(Outcome& o) {
  for (const std::string c : {"b", "d", "g"}) {
    const LocusResult r = run_locus(c, RunConfig{});
    o.check(r.rows.size() == 8, c + " vowel count");
    for (const auto& [name, reg] : r.regressions) {
      o.check(reg.r2 > 0.8, c + " " + name + " R2 " + format_number(reg.r2));
    }
    if (c == "g") {
      o.check(r.regressions.count("velar") == 1 && r.regressions.count("palatal") == 1, "g not split");
    } else {
      o.check(r.regressions.count("all") == 1, c + " regression missing");
    }
  }
}

void criterion9(Outcome& o) {
  const ParseOptions unit = opts(1.0, 0.0);
  const WordGraph big = parse_word("big.bi", inv(), unit);
  const TransformReport f = find_transform(big, "bi.gbi", inv());
  const std::size_t n0 = compile_word(f.before).size(), n1 = compile_word(f.after).size();
  o.check(f.kind == TransformKind::kClusterFusion, "not a cluster fusion");
  o.check(n0 - n1 == 100, "frame delta " + std::to_string(n0) + "-" + std::to_string(n1));
  o.check(f.node_delta == -1, "node delta");
  o.check(!f.selections_after.empty() && f.selections_after.back() == "{1,2,3,6}", "cluster selection");

  const WordGraph ib = parse_word("ib.ib", inv(), unit);
  const TransformReport r = find_transform(ib, "i.bi.b", inv());
  o.check(r.kind == TransformKind::kResyllabification, "not a resyllabification");
  o.check(compile_word(r.before).frames == compile_word(r.after).frames, "flows differ");
}

void criterion10(Outcome& o) {
  const auto dir = temp_dir("acceptance");
  const auto a = run_cli("synth ibia --T 100 --out-dir " + (dir / "a").string(), dir);
  const auto b = run_cli("synth ibia --T 100 --out-dir " + (dir / "b").string(), dir);
  o.check(a.status == 0 && b.status == 0, "CLI failed: " + a.err + b.err);
  if (!o.ok) return;
  for (const std::string f : {"flow.csv", "markers.json", "formants.csv", "out.wav"}) {
    o.check(read_text((dir / "a" / f).string()) == read_text((dir / "b" / f).string()), f + " differs");
  }
  const std::size_t frames = count_lines(read_text((dir / "a" / "flow.csv").string())) - 1;
  const auto expected = static_cast<std::size_t>(std::llround(static_cast<double>(frames) * 1.0 / 1000.0 * 16000));
  const Waveform w = read_wav((dir / "a" / "out.wav").string());
  o.check(w.samples.size() == expected,
          "samples " + std::to_string(w.samples.size()) + " != " + std::to_string(expected));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    void (*run)(Outcome&);
  };
  const Criterion all[] = {
      {1, "coordination matches closed form", 1, criterion1},
      {2, "arc endpoints and straight-line limit", 1, criterion2},
      {3, "syllable graph structure", 1, criterion3},
      {4, "superimposed flow consistency", 1, criterion4},
      {5, "trough effect in /ibi/", 5, criterion5},
      {6, "closure leaves the planning surface", 1, criterion6},
      {7, "acoustic oracle", 10, criterion7},
      {8, "locus equations", 60, criterion8},
      {9, "verbal transformations", 1, criterion9},
      {10, "end-to-end determinism", 30, criterion10},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(s < c.limit_s, "took " + format_number(s) + " s");
    if (!o.ok) ++failed;
    std::printf("%s %2d %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, s, o.ok ? "" : ": ",
                o.ok ? "" : o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
  return failed ? 1 : 0;
}
