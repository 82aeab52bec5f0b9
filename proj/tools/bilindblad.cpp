#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bilindblad/config.hpp"
#include "bilindblad/models.hpp"
#include "bilindblad/report.hpp"
#include "bilindblad/suites.hpp"

namespace {

namespace fs = std::filesystem;
using bilindblad::report::format_sci;

struct CommonArgs {
  std::string model;
  std::string config_path;
  std::vector<std::string> suites;
  std::string mode = "convex";
  std::uint64_t seed = 7;
  bool seed_given = false;
  std::string out_dir;
  std::vector<std::string> tol_overrides;
  std::vector<double> times;
  std::vector<double> hbars;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_suites) {
  cmd->add_option("--model", args.model, "built-in model name");
  cmd->add_option("--config", args.config_path, "model config file (JSON)");
  if (with_suites)
    cmd->add_option("--suite", args.suites,
                    "suite selection (repeatable); default: all applicable");
  cmd->add_option("--mode", args.mode, "pencil mode: convex | difference")
      ->check(CLI::IsMember({"convex", "difference"}));
  cmd->add_option("--seed", args.seed, "seed for randomized checks")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--out", args.out_dir, "output directory for artifacts");
  cmd->add_option("--tol", args.tol_overrides,
                  "tolerance override, name=value (repeatable)");
  cmd->add_option("--times", args.times, "trajectory sample times");
  cmd->add_option("--hbars", args.hbars, "semiclassical sweep values");
}

bilindblad::models::ModelFixture load_model(const CommonArgs& args) {
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in)
      throw bilindblad::config::ConfigError("cannot open " +
                                            args.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return bilindblad::config::parse_config(ss.str());
  }
  if (args.model.empty())
    throw bilindblad::config::ConfigError("provide --model or --config");
  return bilindblad::models::make_model(args.model);
}

bilindblad::suites::RunOptions to_options(const CommonArgs& args) {
  bilindblad::suites::RunOptions opt;
  opt.suites = args.suites;
  opt.seed = args.seed;
  if (!args.seed_given) {
    if (const char* env = std::getenv("BILINDBLAD_SEED"))
      opt.seed = std::strtoull(env, nullptr, 10);
  }
  opt.mode = args.mode == "difference" ? bilindblad::sym::PencilMode::Difference
                                       : bilindblad::sym::PencilMode::Convex;
  if (!args.times.empty()) opt.times = args.times;
  opt.hbars = args.hbars;
  for (const auto& kv : args.tol_overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw bilindblad::config::ConfigError("--tol expects name=value");
    opt.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return opt;
}

std::string coherence_csv(const std::vector<bilindblad::gksl::CoherenceRow>& rows) {
  std::ostringstream os;
  os << "t,sector_nu,sector_mu,block_norm,predicted_norm\n";
  for (const auto& r : rows)
    os << format_sci(r.t) << "," << r.nu << "," << r.mu << ","
       << format_sci(r.block_norm) << "," << format_sci(r.predicted_norm)
       << "\n";
  return os.str();
}

std::string sweep_csv(const bilindblad::moyal::EgorovSweep& sweep) {
  std::ostringstream os;
  os << "hbar,residual_norm,f_norm,ratio\n";
  for (const auto& p : sweep.points)
    os << format_sci(p.hbar) << "," << format_sci(p.residual_norm) << ","
       << format_sci(p.f_norm) << "," << format_sci(p.ratio) << "\n";
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

int emit_outputs(const bilindblad::models::ModelFixture& model,
                 const CommonArgs& args,
                 const bilindblad::suites::RunOptions& opt,
                 const bilindblad::suites::SuiteOutputs& result) {
  std::ostringstream header;
  header << "model=" << model.name << " seed=" << opt.seed << " mode="
         << (opt.mode == bilindblad::sym::PencilMode::Convex ? "convex"
                                                             : "difference");
  std::string text = result.report.render(header.str());
  if (result.has_sweep) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "slope=%.2f band=[1.80,2.20]\n",
                  result.sweep.slope);
    text += buf;
  }
  std::cout << text;

  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    write_file(fs::path(args.out_dir) / "report.txt", text);
    if (result.has_coherences && !result.coherences.empty())
      write_file(fs::path(args.out_dir) / "coherences.csv",
                 coherence_csv(result.coherences));
    if (result.has_sweep)
      write_file(fs::path(args.out_dir) / "egorov_sweep.csv",
                 sweep_csv(result.sweep));
  }
  return result.report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bi-Hamiltonian pencil / Lindblad verification toolkit"};
  app.require_subcommand(1);

  CommonArgs verify_args, simulate_args, sweep_args, export_args;

  auto* verify = app.add_subcommand(
      "verify", "run verification suites against a model");
  add_common(verify, verify_args, true);

  auto* simulate = app.add_subcommand(
      "simulate", "evolve sector coherences and write coherences.csv");
  add_common(simulate, simulate_args, false);

  auto* sweep = app.add_subcommand(
      "sweep", "semiclassical residual sweep, writes egorov_sweep.csv");
  add_common(sweep, sweep_args, false);

  auto* exportm = app.add_subcommand("export-model",
                                     "write a built-in model as JSON");
  exportm->add_option("--model", export_args.model, "built-in model name")
      ->required();
  exportm->add_option("--out", export_args.out_dir, "output file");

  auto* list = app.add_subcommand("list-models", "enumerate built-in models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : bilindblad::models::model_names()) {
        auto m = bilindblad::models::make_model(name);
        std::cout << name << "  -  " << m.anchor << "\n";
      }
      return 0;
    }
    if (exportm->parsed()) {
      auto m = bilindblad::models::make_model(export_args.model);
      std::string text = bilindblad::config::export_model(m);
      if (export_args.out_dir.empty()) {
        std::cout << text;
      } else {
        write_file(export_args.out_dir, text);
      }
      return 0;
    }
    if (verify->parsed()) {
      auto model = load_model(verify_args);
      auto opt = to_options(verify_args);
      auto result = bilindblad::suites::run_suite(model, opt);
      return emit_outputs(model, verify_args, opt, result);
    }
    if (simulate->parsed()) {
      auto model = load_model(simulate_args);
      auto opt = to_options(simulate_args);
      opt.suites = {"dephasing"};
      auto result = bilindblad::suites::run_suite(model, opt);
      return emit_outputs(model, simulate_args, opt, result);
    }
    if (sweep->parsed()) {
      auto model = load_model(sweep_args);
      auto opt = to_options(sweep_args);
      opt.suites = {"egorov"};
      auto result = bilindblad::suites::run_suite(model, opt);
      return emit_outputs(model, sweep_args, opt, result);
    }
  } catch (const bilindblad::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
