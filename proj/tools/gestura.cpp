// gestura: command-line front end.
//
//   gestura synth WORD      flow.csv, markers.json, formants.csv, out.wav
//   gestura locus C         locus.csv + regression summary
//   gestura surface         surface.csv
//   gestura transform A B   graphs, flows and renders of A and B + report.json
//
// Exit codes: 0 ok, 2 parse error, 3 configuration error, 4 internal
// consistency error. Failures print one line "error[<kind>]: <message>".

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gestura/gestura.hpp"

namespace fs = std::filesystem;
using namespace gestura;

namespace {

struct Paths {
  std::string inventory, map, table, out_dir = ".";
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kParse: return 2;
    case ErrorKind::kConsistency: return 4;
    default: return 3;
  }
}

void load(RunConfig& cfg, const Paths& p) {
  if (!p.inventory.empty()) cfg.inventory = inventory_from_json(read_json(p.inventory));
  if (!p.map.empty()) cfg.map = map_from_json(read_json(p.map));
  if (!p.table.empty()) cfg.table = psi_table_from_json(read_json(p.table));
  std::error_code ec;
  fs::create_directories(p.out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create output directory '" + p.out_dir + "': " + ec.message());
}

std::string out_path(const Paths& p, const std::string& name) { return (fs::path(p.out_dir) / name).string(); }

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_number(item));
    } catch (const Error&) {
      throw Error(ErrorKind::kConfig, std::string("bad value '") + item + "' in " + what);
    }
  }
  if (out.empty()) throw Error(ErrorKind::kConfig, std::string(what) + " is empty");
  return out;
}

void write_synth(const SynthResult& r, const Paths& p, const std::string& prefix, bool envelope) {
  write_text(out_path(p, prefix + "flow.csv"), flow_csv(r.flow));
  write_text(out_path(p, prefix + "markers.json"), markers_json(r.flow).dump(2) + "\n");
  write_text(out_path(p, prefix + "formants.csv"), formants_csv(r.track));
  write_wav(r.wave, out_path(p, prefix + "out.wav"));
  if (envelope) write_text(out_path(p, prefix + "envelope.csv"), envelope_csv(r.envelope));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Articulatory synthesis from syllable graphs"};
  app.require_subcommand(1);

  RunConfig cfg;
  Paths paths;
  unsigned long long seed = 0;
  double f0_end = 0.0;
  bool dump_envelope = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--T", cfg.period_ms, "syllable period T in ms")->capture_default_str();
    sub->add_option("--Tp", cfg.pause_ms, "pause between words in ms")->capture_default_str();
    sub->add_option("--delta-o", cfg.delta_o, "onset anchor scale")->capture_default_str();
    sub->add_option("--delta-e", cfg.delta_e, "coda anchor scale")->capture_default_str();
    sub->add_option("--cvc-hold", cfg.cvc_hold_ms, "vowel hold inside CVC in ms")->capture_default_str();
    sub->add_option("--dt", cfg.dt_ms, "frame period in ms")->capture_default_str();
    sub->add_option("--f0", cfg.f0, "fundamental frequency in Hz")->capture_default_str();
    sub->add_option("--f0-end", f0_end, "final f0 for a linear declination");
    sub->add_option("--sample-rate", cfg.sample_rate, "audio sample rate in Hz")->capture_default_str();
    sub->add_option("--inventory", paths.inventory, "inventory JSON");
    sub->add_option("--map", paths.map, "articulatory map JSON");
    sub->add_option("--table", paths.table, "coordination table JSON");
    sub->add_option("--out-dir", paths.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "reserved; the pipeline is deterministic");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  };

  auto* synth = app.add_subcommand("synth", "synthesize a word");
  common(synth);
  synth->add_option("word", cfg.word, "phonetic string, e.g. ibia or big.bi")->required();
  synth->add_flag("--envelope", dump_envelope, "also write envelope.csv");

  std::string consonant;
  auto* locus = app.add_subcommand("locus", "locus-equation experiment for one consonant");
  common(locus);
  locus->add_option("consonant", consonant, "b, d or g")->required();

  std::string rho_list, theta_spec;
  std::size_t rho_count = 11, theta_count = 72;
  auto* surface = app.add_subcommand("surface", "formants over the planning disc");
  common(surface);
  surface->add_option("--rho", rho_list, "comma-separated radii (default: rho-count values over [0,1])");
  surface->add_option("--thetas", theta_spec, "'corners' or comma-separated angles in radians");
  surface->add_option("--rho-count", rho_count, "number of radii")->capture_default_str();
  surface->add_option("--theta-count", theta_count, "number of angles over [0, 2pi)")->capture_default_str();

  std::string before, after;
  auto* transform = app.add_subcommand("transform", "verbal transformation between two spellings");
  common(transform);
  transform->add_option("before", before, "starting word")->required();
  transform->add_option("after", after, "rewritten word")->required();

  try {
    // Rewrites need unit anchors and no pause, so transform defaults to
    // those; explicit flags still win.
    for (int i = 1; i < argc; ++i) {
      if (std::string(argv[i]) == "transform") {
        cfg.delta_o = cfg.delta_e = 1.0;
        cfg.pause_ms = 0.0;
        break;
      }
    }
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return 3;
  }

  try {
    if (!(*app.get_subcommands().front())["--f0-end"]->empty()) cfg.f0_end = f0_end;
    load(cfg, paths);
    cfg.validate();

    if (synth->parsed()) {
      const SynthResult r = synthesize(cfg);
      write_synth(r, paths, "", dump_envelope);
      std::cout << "word " << r.graph.label() << ": " << r.flow.size() << " frames, " << r.wave.samples.size()
                << " samples -> " << paths.out_dir << "\n";
    } else if (locus->parsed()) {
      const LocusResult r = run_locus(consonant, cfg);
      write_text(out_path(paths, "locus.csv"), locus_csv(r));
      std::cout << "# locus /" << consonant << "/: F2 at consonant marker + " << r.onset_delay_ms
                << " ms vs F2 at vowel-hold centre, delta_o = 0.5\n";
      for (const auto& row : r.rows) {
        std::printf("%-3s %-8s onset %7.1f Hz  vowel %7.1f Hz\n", row.vowel.c_str(), row.group.c_str(),
                    row.f2_onset, row.f2_vowel);
      }
      for (const auto& [group, reg] : r.regressions) {
        std::printf("regression %-8s n=%zu slope=%.4f intercept=%.1f R2=%.4f\n", group.c_str(), reg.n, reg.slope,
                    reg.intercept, reg.r2);
      }
    } else if (surface->parsed()) {
      if (rho_count == 0 || theta_count == 0) throw Error(ErrorKind::kConfig, "grid counts must be positive");
      const std::vector<double> rhos = rho_list.empty() ? linspace(0.0, 1.0, rho_count) : parse_list(rho_list, "--rho");
      std::vector<double> thetas;
      if (theta_spec.empty()) {
        thetas = angle_grid(theta_count);
      } else if (theta_spec == "corners") {
        thetas = corner_angles();
      } else {
        thetas = parse_list(theta_spec, "--thetas");
      }
      const auto s = sample_surface(rhos, thetas, cfg.table, cfg.map, cfg.jobs);
      write_text(out_path(paths, "surface.csv"), surface_csv(s));
      std::size_t valid = 0;
      for (const auto& p : s) valid += p.valid ? 1 : 0;
      std::cout << "surface: " << s.size() << " points (" << valid << " valid) -> " << paths.out_dir << "\n";
    } else if (transform->parsed()) {
      const WordGraph g0 = parse_word(before, cfg.inventory, cfg.parse_options());
      const TransformReport rep = find_transform(g0, after, cfg.inventory);
      const SynthResult a = synthesize_graph(rep.before, cfg);
      const SynthResult b = synthesize_graph(rep.after, cfg);
      write_text(out_path(paths, "before.json"), to_json(rep.before, cfg.dt_ms).dump(2) + "\n");
      write_text(out_path(paths, "after.json"), to_json(rep.after, cfg.dt_ms).dump(2) + "\n");
      write_synth(a, paths, "before_", dump_envelope);
      write_synth(b, paths, "after_", dump_envelope);
      const bool flows_equal = a.flow.frames == b.flow.frames;
      Json j;
      j["before"] = rep.before.label();
      j["after"] = rep.after.label();
      j["rewrite"] = to_string(rep.kind);
      j["node_delta"] = rep.node_delta;
      j["duration_delta_ms"] = rep.duration_delta_ms;
      j["duration_delta_periods"] = rep.duration_delta_ms / cfg.period_ms;
      j["frame_delta"] = static_cast<long long>(b.flow.size()) - static_cast<long long>(a.flow.size());
      j["selections_before"] = rep.selections_before;
      j["selections_after"] = rep.selections_after;
      j["flows_bitwise_equal"] = flows_equal;
      write_text(out_path(paths, "report.json"), j.dump(2) + "\n");
      std::cout << rep.before.label() << " -> " << rep.after.label() << " (" << to_string(rep.kind) << ")\n"
                << "  node delta      " << rep.node_delta << "\n"
                << "  duration delta  " << rep.duration_delta_ms << " ms\n"
                << "  selections      ";
      for (const auto& s : rep.selections_before) std::cout << s << " ";
      std::cout << "-> ";
      for (const auto& s : rep.selections_after) std::cout << s << " ";
      std::cout << "\n  flows equal     " << (flows_equal ? "yes" : "no") << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
