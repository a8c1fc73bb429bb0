#include "mmdwr/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmdwr/errors.hpp"
#include "mmdwr/mesh_io.hpp"
#include "mmdwr/vtk.hpp"

namespace mmdwr {

namespace {

using nlohmann::json;

// FNV-1a over the marked keys, so manifests stay small but still pin the sets.
std::string digest(const std::vector<NodeKey>& keys) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& k : keys) {
    for (char ch : k.to_string() + ";") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json config_block(const RunConfig& cfg) {
  json names = json::array();
  for (const auto& t : cfg.targets) names.push_back(t.name);
  return {{"yaml", to_yaml(cfg)}, {"targets", names}, {"seed", cfg.seed}};
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string safe_name(const std::string& name) {
  std::string s = name;
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return s;
}

std::filesystem::path output_dir(const RunConfig& cfg, const std::string& flag) {
  std::string dir = cfg.output.directory;
  if (const char* env = std::getenv("MMDWR_OUTPUT_DIR"); env && *env) dir = env;
  if (!flag.empty()) dir = flag;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

int run_solve(const RunConfig& cfg, const std::string& out_flag, std::ostream& out) {
  const auto dir = output_dir(cfg, out_flag);
  const HierarchicalTree tree = cfg.initial_tree();
  const LeafMesh mesh(tree);
  const FlowDiscretization disc(mesh, cfg.freestream);
  const SteadyResult res = solve_steady(mesh, disc.freestream_field(), cfg.freestream, cfg.solver);
  {
    std::ofstream csv(dir / "newton_history.csv");
    if (!csv) throw IoError("cannot write newton_history.csv");
    write_history_csv(csv, res.history);
  }
  if (cfg.output.vtk) export_vtk((dir / "solution.vtk").string(), mesh, flow_fields(mesh, res.u, cfg.freestream.gamma));
  save_state((dir / "state.json").string(), tree, cfg.freestream, res.u);
  write_text(dir / "manifest.json", solve_manifest(cfg, mesh, res, true));
  const int steps = res.history.empty() ? 0 : res.history.back().iteration;
  out << "cells " << mesh.num_cells() << ", newton iterations " << steps << ", residual "
      << (res.history.empty() ? 0.0 : res.history.back().residual_l1) << "\n";
  for (const auto& t : cfg.target_functionals()) out << t.name << " = " << evaluate(mesh, res.u, t) << "\n";
  return res.converged ? kExitOk : kExitNoConvergence;
}

int run_adapt(const RunConfig& cfg, bool baseline, const std::string& out_flag, std::ostream& out) {
  if (cfg.targets.empty()) throw ConfigError({{0, "targets: at least one target is required"}});
  const auto dir = output_dir(cfg, out_flag);
  const HierarchicalTree root = cfg.initial_tree();
  const auto targets = cfg.target_functionals();
  const AdaptationState st =
      baseline ? single_mesh_baseline(root, targets, cfg.resolved_baseline_weights(), cfg.freestream, cfg.adaptation)
               : adapt_loop(root, cfg.composite_functional(), cfg.freestream, cfg.adaptation);
  {
    std::ofstream csv(dir / "adaptation.csv");
    if (!csv) throw IoError("cannot write adaptation.csv");
    write_adaptation_csv(csv, targets, st.history);
  }
  write_text(dir / "manifest.json", adaptation_manifest(cfg, baseline ? "baseline" : "adapt", st, true));
  for (std::size_t i = 0; i < st.meshes.size(); ++i) {
    const std::string stem = baseline ? "mesh" : "target_" + safe_name(targets[i].name);
    std::map<std::string, std::vector<double>> scalars;
    // Indicators of the last dual step may belong to the meshes before refinement.
    if (i < st.indicators.size() && st.indicators[i].eta.mesh_id == st.meshes[i]->id())
      scalars["indicator"] = st.indicators[i].eta.values;
    save_state((dir / (stem + ".state.json")).string(), st.trees[i], cfg.freestream, st.solutions[i], scalars);
    if (cfg.output.vtk) {
      auto fields = flow_fields(*st.meshes[i], st.solutions[i], cfg.freestream.gamma);
      if (scalars.count("indicator")) fields.push_back({"indicator", scalars["indicator"]});
      export_vtk((dir / (stem + ".vtk")).string(), *st.meshes[i], fields);
    }
  }
  if (!baseline && st.union_mesh && st.union_tree) {
    save_state((dir / "union.state.json").string(), *st.union_tree, cfg.freestream, st.union_solution);
    if (cfg.output.vtk) {
      export_vtk((dir / "union.vtk").string(), *st.union_mesh,
                 flow_fields(*st.union_mesh, st.union_solution, cfg.freestream.gamma));
    }
  }
  const auto& last = st.history.back();
  out << "rounds " << last.k << ", stop " << to_string(st.stop) << ", union cells " << last.union_cells
      << ", composite " << std::setprecision(12) << last.composite << "\n";
  if (!st.stop_message.empty()) out << st.stop_message << "\n";
  return st.stop == StopReason::NewtonDiverged ? kExitDiverged : kExitOk;
}

int run_gen_mesh(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  const auto root = cfg.root_mesh();
  write_mesh_file(path, *root);
  out << "wrote " << root->triangles.size() << " triangles to " << path << "\n";
  return kExitOk;
}

int run_export(const std::string& state_path, const std::string& path, std::ostream& out) {
  const SavedState st = load_state(state_path);
  const LeafMesh mesh(st.tree);
  auto fields = flow_fields(mesh, st.field(mesh), st.freestream.gamma);
  for (const auto& [name, values] : st.cell_scalars) fields.push_back({name, values});
  export_vtk(path, mesh, fields);
  out << "wrote " << mesh.num_cells() << " cells to " << path << "\n";
  return kExitOk;
}

}  // namespace

std::string adaptation_manifest(const RunConfig& cfg, const std::string& command, const AdaptationState& state,
                                bool with_timing) {
  json j;
  j["format"] = "mmdwr-manifest-1";
  j["command"] = command;
  j["config"] = config_block(cfg);
  json rounds = json::array();
  for (const auto& r : state.history) {
    json m = json::array();
    json digests = json::array();
    for (const auto& keys : r.marked) {
      m.push_back(keys.size());
      digests.push_back(digest(keys));
    }
    json row = {{"k", r.k},
                {"target_cells", r.target_cells},
                {"union_cells", r.union_cells},
                {"dual_cells", r.dual_cells},
                {"target_values", r.target_values},
                {"union_values", r.union_values},
                {"composite", r.composite},
                {"estimates", r.estimates},
                {"weights", r.weights},
                {"estimate_total", r.estimate_total},
                {"marked", m},
                {"marked_digest", digests},
                {"newton_iterations", r.newton_iterations}};
    if (with_timing) row["seconds"] = r.seconds;
    rounds.push_back(row);
  }
  j["iterations"] = rounds;
  j["stop"] = to_string(state.stop);
  j["stop_message"] = state.stop_message;
  if (with_timing) j["created"] = utc_now();
  return dump(j);
}

std::string solve_manifest(const RunConfig& cfg, const LeafMesh& mesh, const SteadyResult& result,
                           bool with_timing) {
  json j;
  j["format"] = "mmdwr-manifest-1";
  j["command"] = "solve";
  j["config"] = config_block(cfg);
  j["cells"] = mesh.num_cells();
  j["converged"] = result.converged;
  json hist = json::array();
  for (const auto& h : result.history) hist.push_back({h.iteration, h.residual_l1, h.damping, h.linear_cycles});
  j["newton_history"] = hist;
  json values = json::object();
  for (const auto& t : cfg.target_functionals()) values[t.name] = evaluate(mesh, result.u, t);
  j["functionals"] = values;
  if (with_timing) j["created"] = utc_now();
  return dump(j);
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-mesh goal-oriented adaptation for the 2D Euler equations", "mmdwr"};
  app.require_subcommand(1);
  std::string config_path, output_flag, state_path, out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_run = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "YAML run configuration")->required();
    sub->add_option("--output", output_flag, "output directory");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "recorded in the manifest");
    return sub;
  };
  CLI::App* solve = add_run("solve", "solve the steady flow on the initial mesh");
  CLI::App* adapt = add_run("adapt", "multi-mesh goal-oriented adaptation");
  CLI::App* baseline = add_run("baseline", "single-mesh adaptation for a weighted sum of targets");
  CLI::App* gen = app.add_subcommand("gen-mesh", "write the configured initial mesh");
  gen->add_option("--config", config_path, "YAML run configuration")->required();
  gen->add_option("--out", out_path, "mesh file to write")->required();
  CLI::App* exp = app.add_subcommand("export", "convert a saved state to VTK");
  exp->add_option("--state", state_path, "state JSON written by solve/adapt/baseline")->required();
  exp->add_option("--out", out_path, "VTK file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (exp->parsed()) return run_export(state_path, out_path, out);
    RunConfig cfg = load_config(config_path);
    if (seed_given) cfg.seed = seed;
    if (gen->parsed()) return run_gen_mesh(cfg, out_path, out);
    if (solve->parsed()) return run_solve(cfg, output_flag, out);
    if (adapt->parsed()) return run_adapt(cfg, false, output_flag, out);
    if (baseline->parsed()) return run_adapt(cfg, true, output_flag, out);
    err << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error:\n" << e.what() << "\n";
    return kExitConfig;
  } catch (const NonphysicalState& e) {
    err << "nonphysical state: " << e.what() << "\n";
    return kExitNonphysical;
  } catch (const NoConvergence& e) {
    err << "no convergence: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const NewtonDiverged& e) {
    err << "newton diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace mmdwr
