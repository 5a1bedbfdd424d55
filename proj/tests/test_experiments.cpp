#include <gtest/gtest.h>

#include "support.hpp"

using namespace gestura;

namespace {

RunConfig base_config() {
  RunConfig c;
  c.word = "ibia";
  return c;
}

RunConfig unit_config() {
  RunConfig c;
  c.delta_o = c.delta_e = 1.0;
  c.pause_ms = 0;
  return c;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kIo;
}

}  // namespace

TEST(LinearFit, ExactLine) {
  const Regression r = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(r.slope, 2);
  EXPECT_DOUBLE_EQ(r.intercept, 1);
  EXPECT_DOUBLE_EQ(r.r2, 1);
  EXPECT_EQ(r.n, 4u);
  EXPECT_EQ(kind_of([] { linear_fit({1}, {1}); }), ErrorKind::kDomain);
  EXPECT_EQ(kind_of([] { linear_fit({1, 1}, {1, 2}); }), ErrorKind::kDomain);
}

TEST(Grids, Shapes) {
  EXPECT_EQ(linspace(0, 1, 11).size(), 11u);
  EXPECT_DOUBLE_EQ(linspace(0, 1, 11).back(), 1.0);
  const auto a = angle_grid(72);
  EXPECT_EQ(a.size(), 72u);
  EXPECT_LT(a.back(), kTwoPi);
  EXPECT_EQ(corner_angles().size(), 3u);
}

TEST(Synthesize, IbiaEndToEnd) {
  const SynthResult r = synthesize(base_config());
  EXPECT_EQ(r.graph.label(), "i.bia");
  EXPECT_EQ(r.flow.size(), 500u);
  EXPECT_EQ(r.track.size(), 500u);
  EXPECT_EQ(r.envelope.size(), 500u);
  EXPECT_EQ(r.wave.samples.size(), 8000u);
}

TEST(Synthesize, Deterministic) {
  const SynthResult a = synthesize(base_config());
  RunConfig c = base_config();
  c.jobs = 4;
  const SynthResult b = synthesize(c);
  EXPECT_EQ(a.flow.frames, b.flow.frames);
  EXPECT_EQ(a.track.frames, b.track.frames);
  EXPECT_EQ(a.wave.samples, b.wave.samples);
}

TEST(Synthesize, ConfigErrors) {
  RunConfig c = base_config();
  c.period_ms = 0;
  EXPECT_EQ(kind_of([&] { synthesize(c); }), ErrorKind::kConfig);
  c = base_config();
  c.word = "xq";
  EXPECT_EQ(kind_of([&] { synthesize(c); }), ErrorKind::kParse);
}

TEST(Locus, EveryPlosiveIsLinear) {
  for (const std::string c : {"b", "d"}) {
    const LocusResult r = run_locus(c, RunConfig{});
    ASSERT_EQ(r.rows.size(), 8u);
    ASSERT_EQ(r.regressions.count("all"), 1u) << c;
    EXPECT_GT(r.regressions.at("all").r2, 0.8) << c;
  }
}

TEST(Locus, VelarSplitsByFrontness) {
  const LocusResult r = run_locus("g", RunConfig{});
  ASSERT_EQ(r.regressions.size(), 2u);
  ASSERT_EQ(r.regressions.count("palatal"), 1u);
  ASSERT_EQ(r.regressions.count("velar"), 1u);
  for (const auto& [name, reg] : r.regressions) EXPECT_GT(reg.r2, 0.8) << name;
  for (const auto& row : r.rows) {
    const bool front = is_front_vowel_angle(PhonemeInventory::standard().vowel(row.vowel).theta());
    EXPECT_EQ(row.group, front ? "palatal" : "velar");
  }
}

TEST(Locus, CsvAndErrors) {
  const LocusResult r = run_locus("b", RunConfig{});
  const std::string csv = locus_csv(r);
  EXPECT_EQ(testing_support::count_lines(csv), 9u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "consonant,vowel,group,f2_onset,f2_vowel,valid");
  EXPECT_EQ(kind_of([] { run_locus("a", RunConfig{}); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { run_locus("q", RunConfig{}); }), ErrorKind::kConfig);
}

TEST(Locus, JobsDoNotChangeResults) {
  RunConfig c;
  c.jobs = 3;
  const LocusResult a = run_locus("d", RunConfig{});
  const LocusResult b = run_locus("d", c);
  EXPECT_EQ(locus_csv(a), locus_csv(b));
}

TEST(Transform, ClusterFusion) {
  const RunConfig c = unit_config();
  const WordGraph before = parse_word("big.bi", c.inventory, c.parse_options());
  const TransformReport r = find_transform(before, "bi.gbi", c.inventory);
  EXPECT_EQ(r.kind, TransformKind::kClusterFusion);
  EXPECT_EQ(r.node_delta, -1);
  EXPECT_DOUBLE_EQ(r.duration_delta_ms, -c.period_ms);
  EXPECT_EQ(r.selections_after, (std::vector<std::string>{"{1,2,6}", "{1,2,3,6}"}));
  EXPECT_EQ(r.boundary, std::optional<std::size_t>(0));
  const std::size_t frames_before = compile_word(r.before).size();
  const std::size_t frames_after = compile_word(r.after).size();
  EXPECT_EQ(frames_before - frames_after, 100u);
}

TEST(Transform, ResyllabificationKeepsTheFlow) {
  const RunConfig c = unit_config();
  const WordGraph before = parse_word("ib.ib", c.inventory, c.parse_options());
  const TransformReport r = find_transform(before, "i.bi.b", c.inventory);
  EXPECT_EQ(r.kind, TransformKind::kResyllabification);
  EXPECT_EQ(r.node_delta, 0);
  EXPECT_EQ(r.duration_delta_ms, 0.0);
  EXPECT_EQ(compile_word(r.before).frames, compile_word(r.after).frames);
  const SynthResult a = synthesize_graph(r.before, c);
  const SynthResult b = synthesize_graph(r.after, c);
  EXPECT_EQ(a.wave.samples, b.wave.samples);
}

TEST(Transform, IdentityAndUnreachable) {
  const RunConfig c = unit_config();
  const WordGraph before = parse_word("big.bi", c.inventory, c.parse_options());
  EXPECT_EQ(find_transform(before, "big.bi", c.inventory).kind, TransformKind::kIdentity);
  EXPECT_EQ(kind_of([&] { find_transform(before, "bu", c.inventory); }), ErrorKind::kNotApplicable);
  EXPECT_EQ(kind_of([&] { find_transform(before, "b..i", c.inventory); }), ErrorKind::kParse);
}

TEST(Transform, CanonicalLabel) {
  const PhonemeInventory inv = PhonemeInventory::standard();
  EXPECT_EQ(canonical_label("bO.gbi", inv), "bɔ.gbi");
  EXPECT_EQ(canonical_label("bi gbi", inv), "bigbi");
}
