// Command-line pipeline for the SUDS toolkit: simulate noisy gait trials,
// fit the per-phase affine model, and score it against the phase-averaged
// template.  Talks to the core through the C API only.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "suds/suds.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

int exit_code_for(suds_status st) {
  switch (st) {
    case SUDS_OK:
      return 0;
    case SUDS_ERR_INVALID_ARG:
    case SUDS_ERR_CONFIG:
    case SUDS_ERR_IO:
    case SUDS_ERR_DIMENSION:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

[[noreturn]] void die(suds_status st, const std::string& context) {
  std::fprintf(stderr, "suds: %s: %s\n", context.c_str(), suds_last_error());
  std::exit(exit_code_for(st));
}

void check(suds_status st, const std::string& context) {
  if (st != SUDS_OK) die(st, context);
}

struct Options {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  int cycles_train = 30;
  int cycles_test = 30;
  int samples_per_cycle = 100;
  double sigma = -1.0;   // keep config default
  double lambda = 0.0;   // keep config default
  int fourier_order = 7;
  int bins = 64;
  double bandwidth = 2.0 * M_PI / 16.0;
  double ridge = 1e-8;
};

using SystemPtr = std::unique_ptr<suds_system, decltype(&suds_system_free)>;
using TrajPtr = std::unique_ptr<suds_trajectory, decltype(&suds_trajectory_free)>;
using ModelPtr = std::unique_ptr<suds_model, decltype(&suds_model_free)>;
using NominalPtr = std::unique_ptr<suds_nominal, decltype(&suds_nominal_free)>;
using ReportPtr = std::unique_ptr<suds_report, decltype(&suds_report_free)>;

SystemPtr open_system(const std::string& config) {
  suds_system* sys = nullptr;
  suds_status st;
  if (std::filesystem::exists(config)) {
    st = suds_system_open(config.c_str(), &sys);
  } else {
    st = suds_system_preset(config.c_str(), &sys);  // bare preset name
  }
  if (st != SUDS_OK) die(st, "loading system config '" + config + "'");
  return SystemPtr(sys, suds_system_free);
}

TrajPtr simulate_one(const suds_system* sys, const Options& opt, int cycles,
                     std::uint64_t seed) {
  suds_sim_params p;
  suds_sim_params_init(&p);
  p.cycles = cycles;
  p.samples_per_cycle = opt.samples_per_cycle;
  p.seed = seed;
  p.sigma = opt.sigma;
  p.lambda = opt.lambda;
  suds_trajectory* traj = nullptr;
  check(suds_simulate(sys, &p, &traj), "simulating trial");
  return TrajPtr(traj, suds_trajectory_free);
}

void save_traj(const suds_trajectory* traj, const std::string& dir, const std::string& stem) {
  const std::string csv = dir + "/" + stem + ".csv";
  const std::string meta = dir + "/" + stem + ".meta.json";
  check(suds_trajectory_save(traj, csv.c_str(), meta.c_str()), "writing " + csv);
}

void print_traj_summary(const char* label, const suds_trajectory* traj) {
  int32_t samples = 0;
  double net = 0.0, dev = 0.0;
  suds_trajectory_info(traj, &samples, nullptr, nullptr, nullptr, nullptr);
  suds_trajectory_stats(traj, &net, &dev);
  std::printf("%s: %d samples, net x displacement/cycle %.6g, drive deviation std %.6g\n",
              label, samples, net, dev);
}

TrajPtr open_traj(const std::string& csv) {
  std::string meta = csv;
  const std::string suffix = ".csv";
  if (meta.size() > suffix.size() && meta.ends_with(suffix))
    meta = meta.substr(0, meta.size() - suffix.size());
  meta += ".meta.json";
  suds_trajectory* traj = nullptr;
  check(suds_trajectory_open(csv.c_str(), meta.c_str(), &traj), "reading " + csv);
  return TrajPtr(traj, suds_trajectory_free);
}

int cmd_simulate(const Options& opt) {
  SystemPtr sys = open_system(opt.config);
  std::filesystem::create_directories(opt.out);
  TrajPtr train = simulate_one(sys.get(), opt, opt.cycles_train, opt.seed);
  TrajPtr test = simulate_one(sys.get(), opt, opt.cycles_test, opt.seed + 1);
  save_traj(train.get(), opt.out, "train");
  save_traj(test.get(), opt.out, "test");
  print_traj_summary("train", train.get());
  print_traj_summary("test", test.get());
  return 0;
}

std::pair<ModelPtr, NominalPtr> fit_from(const suds_trajectory* train, const Options& opt) {
  suds_fit_params p;
  suds_fit_params_init(&p);
  p.fourier_order = opt.fourier_order;
  p.bins = opt.bins;
  p.bandwidth = opt.bandwidth;
  p.ridge = opt.ridge;
  suds_model* model = nullptr;
  suds_nominal* nominal = nullptr;
  check(suds_fit(train, &p, &model, &nominal), "fitting model");
  return {ModelPtr(model, suds_model_free), NominalPtr(nominal, suds_nominal_free)};
}

void write_fit_outputs(const suds_model* model, const suds_nominal* nominal,
                       const std::string& dir) {
  check(suds_model_save(model, (dir + "/model.json").c_str()), "writing model.json");
  check(suds_nominal_save(nominal, (dir + "/nominal.json").c_str()), "writing nominal.json");
  check(suds_model_save_fit_report(model, (dir + "/fit_report.json").c_str()),
        "writing fit_report.json");
  int32_t features = 0, bins = 0;
  double rms = 0.0;
  suds_model_feature_count(model, &features);
  suds_model_bins(model, &bins);
  suds_model_max_residual_rms(model, &rms);
  std::printf("fit: %d phase bins, %d features, max per-bin residual rms %.6g\n", bins,
              features, rms);
}

int cmd_fit(const std::string& train_csv, const Options& opt) {
  TrajPtr train = open_traj(train_csv);
  std::filesystem::create_directories(opt.out);
  auto [model, nominal] = fit_from(train.get(), opt);
  write_fit_outputs(model.get(), nominal.get(), opt.out);
  return 0;
}

void write_eval_outputs(const suds_report* report, const std::string& dir) {
  check(suds_report_save(report, (dir + "/evaluation.json").c_str(),
                         (dir + "/residuals.csv").c_str()),
        "writing evaluation report");
  double gg = 0.0, gr = 0.0;
  suds_report_gammas(report, &gg, &gr);
  std::printf("evaluate: Gamma_ghat %.4f, Gamma_rdot %.4f\n", gg, gr);
}

int cmd_evaluate(const std::string& model_path, const std::string& nominal_path,
                 const std::string& test_csv, const Options& opt) {
  suds_model* model_raw = nullptr;
  check(suds_model_open(model_path.c_str(), &model_raw), "reading " + model_path);
  ModelPtr model(model_raw, suds_model_free);
  suds_nominal* nominal_raw = nullptr;
  check(suds_nominal_open(nominal_path.c_str(), &nominal_raw), "reading " + nominal_path);
  NominalPtr nominal(nominal_raw, suds_nominal_free);
  TrajPtr test = open_traj(test_csv);

  std::filesystem::create_directories(opt.out);
  suds_report* report_raw = nullptr;
  check(suds_evaluate(model.get(), nominal.get(), test.get(), &report_raw),
        "evaluating model");
  ReportPtr report(report_raw, suds_report_free);
  write_eval_outputs(report.get(), opt.out);
  return 0;
}

int cmd_pipeline(const Options& opt) {
  SystemPtr sys = open_system(opt.config);
  std::filesystem::create_directories(opt.out);
  TrajPtr train = simulate_one(sys.get(), opt, opt.cycles_train, opt.seed);
  TrajPtr test = simulate_one(sys.get(), opt, opt.cycles_test, opt.seed + 1);
  save_traj(train.get(), opt.out, "train");
  save_traj(test.get(), opt.out, "test");
  print_traj_summary("train", train.get());
  print_traj_summary("test", test.get());

  auto [model, nominal] = fit_from(train.get(), opt);
  write_fit_outputs(model.get(), nominal.get(), opt.out);

  suds_report* report_raw = nullptr;
  check(suds_evaluate(model.get(), nominal.get(), test.get(), &report_raw),
        "evaluating model");
  ReportPtr report(report_raw, suds_report_free);
  write_eval_outputs(report.get(), opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous swimmer simulation and per-phase affine system identification"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool fit_flags, bool sim_flags) {
    cmd->add_option("--out", opt.out, "Output directory");
    if (sim_flags) {
      cmd->add_option("--seed", opt.seed, "RNG seed (test stream uses seed+1)");
      cmd->add_option("--cycles-train", opt.cycles_train, "Training cycles");
      cmd->add_option("--cycles-test", opt.cycles_test, "Held-out cycles");
      cmd->add_option("--samples-per-cycle", opt.samples_per_cycle, "Samples per cycle");
      cmd->add_option("--sigma", opt.sigma, "OU diffusion (overrides config)");
      cmd->add_option("--lambda", opt.lambda, "OU attraction rate (overrides config)");
    }
    if (fit_flags) {
      cmd->add_option("--fourier-order", opt.fourier_order, "Nominal gait Fourier order");
      cmd->add_option("--bins", opt.bins, "Phase bins");
      cmd->add_option("--bandwidth", opt.bandwidth, "Phase kernel bandwidth (rad)");
      cmd->add_option("--ridge", opt.ridge, "Ridge regularization");
    }
  };

  CLI::App* sim = app.add_subcommand("simulate", "Simulate train/test trials to CSV");
  sim->add_option("--config", opt.config, "System config file or preset name")->required();
  add_common(sim, false, true);

  std::string train_csv;
  CLI::App* fit = app.add_subcommand("fit", "Fit a model from a training trajectory");
  fit->add_option("train", train_csv, "Training trajectory CSV")->required();
  add_common(fit, true, false);

  std::string model_path, nominal_path, test_csv;
  CLI::App* ev = app.add_subcommand("evaluate", "Score a model on held-out data");
  ev->add_option("model", model_path, "Model JSON")->required();
  ev->add_option("nominal", nominal_path, "Nominal gait JSON")->required();
  ev->add_option("test", test_csv, "Held-out trajectory CSV")->required();
  add_common(ev, false, false);

  CLI::App* pipe = app.add_subcommand("pipeline", "simulate + fit + evaluate");
  pipe->add_option("--config", opt.config, "System config file or preset name")->required();
  add_common(pipe, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  if (sim->parsed()) return cmd_simulate(opt);
  if (fit->parsed()) return cmd_fit(train_csv, opt);
  if (ev->parsed()) return cmd_evaluate(model_path, nominal_path, test_csv, opt);
  if (pipe->parsed()) return cmd_pipeline(opt);
  return kExitUsage;
}
