#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "collatt/config.hpp"
#include "collatt/errors.hpp"
#include "collatt/experiments.hpp"
#include "collatt/oracle.hpp"
#include "collatt/record.hpp"
#include "collatt/render.hpp"
#include "collatt/rng.hpp"
#include "collatt/verify.hpp"

namespace {

using namespace collatt;

std::string outcome_label(VertexOutcome o) {
  return std::string(1, static_cast<char>('0' + o.alpha_l)) +
         static_cast<char>('0' + o.alpha_r);
}

std::string atom_label(uint64_t atom, size_t num_vertices) {
  if (num_vertices == 0) return "-";
  std::string s;
  for (size_t k = 0; k < num_vertices; ++k) {
    if (k) s += ' ';
    s += outcome_label(
        VertexOutcome::from_index(static_cast<int>((atom >> (2 * k)) & 3)));
  }
  return s;
}

ConfigFile load_cli_config(const std::string& path, const uint64_t* seed) {
  ConfigFile cfg = load_config(path);
  if (seed) cfg.run.seed = *seed;
  return cfg;
}

int cmd_simulate(const ConfigFile& cfg, int count, const std::string& out_dir) {
  if (count < 1) throw config_error("simulate: count must be >= 1");
  std::filesystem::create_directories(out_dir);

  // (slot, pair ordinal) -> counts of 00 01 10 11 skipped
  std::map<std::pair<int, int>, std::array<uint64_t, 5>> summary;
  for (int i = 0; i < count; ++i) {
    RunConfig rc = cfg.run;
    rc.seed = cfg.run.seed + static_cast<uint64_t>(i);
    const RunRecord rec = run(rc, cfg.output.final_state);

    char name[32];
    std::snprintf(name, sizeof name, "record-%05d.txt", i);
    save_record(rec, (std::filesystem::path(out_dir) / name).string());

    std::map<int, int> seen;  // slot -> motions so far within this run
    for (const Event& e : rec.events) {
      const int ordinal = seen[e.slot]++;
      auto& row = summary[{e.slot, ordinal}];
      if (e.realized)
        ++row[static_cast<size_t>(e.outcome.index())];
      else
        ++row[4];
    }
  }

  std::printf("wrote %d records to %s\n", count, out_dir.c_str());
  if (!summary.empty()) {
    std::printf("%4s %7s %7s %7s %7s %7s %8s\n", "slot", "ordinal", "00", "01",
                "10", "11", "skipped");
    for (const auto& [key, row] : summary)
      std::printf("%4d %7d %7llu %7llu %7llu %7llu %8llu\n", key.first,
                  key.second, static_cast<unsigned long long>(row[0]),
                  static_cast<unsigned long long>(row[1]),
                  static_cast<unsigned long long>(row[2]),
                  static_cast<unsigned long long>(row[3]),
                  static_cast<unsigned long long>(row[4]));
  }
  return 0;
}

std::vector<int> motions_from_seed(const RunConfig& rc) {
  RunRng rng(rc.seed);
  Surface s = initial_surface(rc.geometry);
  CausalDag dag(rc.geometry);
  std::vector<int> motions;
  motions.reserve(rc.steps);
  for (int i = 0; i < rc.steps; ++i) {
    const std::vector<int> pairs = rl_pairs(s);
    const int slot = pairs[uniform_index(rng.motion(), pairs.size())];
    apply_motion_inplace(s, slot, dag);
    motions.push_back(slot);
  }
  return motions;
}

int cmd_oracle(const ConfigFile& cfg, const std::vector<int>& motions_arg,
               bool use_motions_arg) {
  const std::vector<int> motions =
      use_motions_arg ? motions_arg : motions_from_seed(cfg.run);
  const GrownLattice g = grow_lattice(cfg.run.geometry, motions);
  std::vector<int> labeling(motions.size());
  for (size_t i = 0; i < labeling.size(); ++i) labeling[i] = static_cast<int>(i);

  const RAssignment assign = make_assignment(cfg.run.rmatrix);
  const StateVector psi = make_initial_state(cfg.run.geometry, cfg.run.state);
  const HistoryDistribution dist =
      enumerate_distribution(g.dag, labeling, assign, psi, JumpSpec{cfg.run.x});

  std::printf("# motions:");
  for (int m : motions) std::printf(" %d", m);
  std::printf("\n");
  for (int v : dist.vertices) {
    const Vertex& vert = g.dag.vertex(v);
    std::printf("# vertex %d: slot=%d ordinal=%d\n", v, vert.slot,
                vert.pair_ordinal);
  }

  const int label_width =
      std::max<int>(7, static_cast<int>(3 * std::max<size_t>(dist.vertices.size(), 1) - 1));
  std::printf("%-*s  probability\n", label_width, "outcome");
  for (size_t atom = 0; atom < dist.p.size(); ++atom)
    std::printf("%-*s  %.12g\n", label_width,
                atom_label(atom, dist.vertices.size()).c_str(), dist.p[atom]);
  const double total = dist.total();
  std::printf("%-*s  %.12g\n", label_width, "sum", total);
  return std::abs(total - 1.0) <= 1e-10 ? 0 : 1;
}

int cmd_verify(const std::string& suite, const ConfigFile& cfg) {
  const std::vector<CheckResult> results = verify_suite(suite, cfg.run);
  for (const CheckResult& r : results)
    std::printf("%-24s %-4s  max_deviation=%.3e  %s\n", r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.max_deviation, r.detail.c_str());
  if (!all_pass(results)) {
    std::printf("verification failed; the detail column identifies the "
                "witness instance\n");
    return 1;
  }
  return 0;
}

int cmd_render(const std::string& record_path, const std::string& format,
               const std::string& out) {
  const RunRecord rec = load_record(record_path);
  const Diagram d = build_diagram(rec);
  if (format == "text") {
    const std::string text = render_text(d);
    if (out.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) throw config_error("cannot write " + out);
      f << text;
      std::printf("wrote %s\n", out.c_str());
    }
    return 0;
  }
  if (format == "image") {
    std::string path = out;
    if (path.empty())
      path = std::filesystem::path(record_path).replace_extension(".ppm").string();
    save_ppm(d, path);
    std::printf("wrote %s\n", path.c_str());
    return 0;
  }
  throw config_error("render: format must be text or image");
}

void write_report(const ExperimentReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::string text;
  text += "experiment = " + report.name + "\n";
  text += "verdict = " + report.verdict + "\n";
  for (const auto& [k, v] : report.params)
    text += "param " + k + " = " + v + "\n";
  for (const auto& [k, v] : report.stats)
    text += "stat " + k + " = " + format_double(v) + "\n";
  for (const std::string& n : report.notes) text += "note " + n + "\n";

  const std::string report_path = (dir / (report.name + "-report.txt")).string();
  {
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw config_error("cannot write " + report_path);
    f << text;
  }
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s\n", report_path.c_str());

  if (!report.trace_rows.empty()) {
    const std::string csv_path = (dir / (report.name + "-trace.csv")).string();
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw config_error("cannot write " + csv_path);
    for (size_t i = 0; i < report.trace_columns.size(); ++i)
      f << (i ? "," : "") << report.trace_columns[i];
    f << "\n";
    for (const std::vector<double>& row : report.trace_rows) {
      for (size_t i = 0; i < row.size(); ++i)
        f << (i ? "," : "") << format_double(row[i]);
      f << "\n";
    }
    std::printf("wrote %s\n", csv_path.c_str());
  }
}

int cmd_experiment(const std::string& name, const ConfigFile& cfg,
                   const std::string& out_dir) {
  ExperimentReport report;
  if (name == "macro_collapse") {
    MacroCollapseParams params;
    params.geometry = cfg.run.geometry;
    if (cfg.run.steps > 0) params.steps = cfg.run.steps;
    params.x = cfg.run.x;
    params.p = cfg.run.p;
    params.seed = cfg.run.seed;
    params.runs = cfg.experiment.runs;
    report = macro_collapse(params);
  } else if (name == "noise_profile") {
    NoiseProfileParams params;
    params.geometry = cfg.run.geometry;
    if (cfg.run.steps > 0) params.steps = cfg.run.steps;
    params.x = cfg.run.x;
    params.p = cfg.run.p;
    params.seed = cfg.run.seed;
    params.runs = cfg.experiment.runs;
    params.state = cfg.run.state;
    params.rmatrix = cfg.run.rmatrix;
    report = noise_profile(params);
  } else if (name == "kent") {
    KentParams params;
    params.geometry = cfg.run.geometry;
    params.x = cfg.run.x;
    params.seed = cfg.run.seed;
    params.state_a = cfg.run.state;
    params.state_b = cfg.experiment.alt_state;
    params.rmatrix = cfg.run.rmatrix;
    params.filter = cfg.experiment.filter;
    params.window = cfg.experiment.window;
    params.samples = cfg.experiment.samples;
    params.exact = cfg.experiment.exact;
    report = kent_state_dependence(params);
  } else {
    throw config_error("unknown experiment: " + name +
                       " (expected macro_collapse, noise_profile or kent)");
  }
  write_report(report, out_dir);
  return report.verdict == "fail" ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and exact-verification toolkit for collapse "
               "dynamics on a periodic null lattice"};
  app.require_subcommand(1);

  std::string config_path, out, format = "text", record_path;
  std::string suite = "all", experiment_name;
  std::vector<int> motions;
  int count = 1;
  uint64_t seed = 0;
  bool seed_set = false;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file")->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run trajectories and write records");
  add_config(simulate);
  simulate->add_option("--count", count, "number of runs (seeds seed+0..seed+count-1)");
  simulate->add_option("--out", out, "output directory (default from config)");

  CLI::App* oracle = app.add_subcommand("oracle", "exact outcome distribution of a stem");
  add_config(oracle);
  oracle->add_option("--motions", motions,
                     "explicit motion slots (default: drawn from the config seed)");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_config(verify);
  verify->add_option("suite", suite,
                     "kraus|gamma|nosignal|samols|heisenberg|all");

  CLI::App* render = app.add_subcommand("render", "draw the spacetime diagram of a record");
  render->add_option("record", record_path, "record file")->required();
  render->add_option("--format", format, "text|image");
  render->add_option("--out", out, "output file (default: stdout / record path with .ppm)");

  CLI::App* experiment = app.add_subcommand("experiment", "run a scripted investigation");
  experiment->add_option("name", experiment_name,
                         "macro_collapse|noise_profile|kent")->required();
  add_config(experiment);
  experiment->add_option("--out", out, "output directory (default from config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const uint64_t* seed_ptr = seed_set ? &seed : nullptr;
    if (simulate->parsed()) {
      const ConfigFile cfg = load_cli_config(config_path, seed_ptr);
      return cmd_simulate(cfg, count, out.empty() ? cfg.output.dir : out);
    }
    if (oracle->parsed()) {
      const ConfigFile cfg = load_cli_config(config_path, seed_ptr);
      return cmd_oracle(cfg, motions, oracle->count("--motions") > 0);
    }
    if (verify->parsed()) {
      const ConfigFile cfg = load_cli_config(config_path, seed_ptr);
      return cmd_verify(suite, cfg);
    }
    if (render->parsed()) return cmd_render(record_path, format, out);
    if (experiment->parsed()) {
      const ConfigFile cfg = load_cli_config(config_path, seed_ptr);
      return cmd_experiment(experiment_name, cfg,
                            out.empty() ? cfg.output.dir : out);
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const guardrail_error& e) {
    std::fprintf(stderr, "refused: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failed: %s\n", e.what());
    return 1;
  }
  return 2;
}
