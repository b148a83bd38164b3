#include "bbmsf/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bbmsf/config.hpp"
#include "bbmsf/report.hpp"
#include "bbmsf/small_signal.hpp"
#include "bbmsf/verify.hpp"

namespace bbmsf {

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kConfig = 2;

unsigned thread_cap() {
  const char* env = std::getenv("BBMSF_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError({"BBMSF_THREADS must be a positive integer"});
  return static_cast<unsigned>(v);
}

// Writes to `path` if given, otherwise to the output stream.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError({"cannot write '" + path + "'"});
  f << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

struct Options {
  std::string config;
  std::string out;
  std::string spec;
  std::string scenario;
  std::string format = "csv";
  std::string kind = "gvd";
  std::string method = "analytic";
  double fmin = 10.0;
  double fmax = 20e3;
  int points = 50;
  double amplitude = 0.01;
  unsigned long seed = 0;
};

int analyze(const Options& o, std::ostream& out) {
  const RunConfig cfg = load_run_config(o.config);
  const auto& p = cfg.converter;
  const double vo = voltage_transfer(p.vi, p.n, p.d);
  const double po = vo * load_current(cfg.load, vo);
  const auto r = device_stresses(p, po, cfg.reset_duty_model);
  auto j = steady_state_json(p, cfg.load, r);
  if (cfg.parasitics) j["losses"] = loss_json(conduction_losses(p, po, *cfg.parasitics, cfg.reset_duty_model), "config");
  emit(dump(j), o.out.empty() ? cfg.outputs.report : o.out, out);
  return kOk;
}

int simulate(const Options& o, std::ostream& out) {
  const RunConfig cfg = load_run_config(o.config);
  const auto w = find_periodic_steady_state(cfg.converter, cfg.load, cfg.sim);
  emit(waveform_csv(w), o.out.empty() ? cfg.outputs.waveform : o.out, out);
  return kOk;
}

int bode(const Options& o, std::ostream& out) {
  const RunConfig cfg = load_run_config(o.config);
  std::vector<std::string> errors;
  if (!(o.fmin > 0.0) || !(o.fmax > o.fmin)) errors.push_back("--fmin/--fmax must satisfy 0 < fmin < fmax");
  if (o.points < 2) errors.push_back("--points must be at least 2");
  if (!(o.amplitude > 0.0 && o.amplitude < 1.0)) errors.push_back("--amplitude must be in (0, 1)");
  const auto* res = std::get_if<ResistiveLoad>(&cfg.load);
  if (res == nullptr && o.method != "numeric") errors.push_back("analytic response needs a resistive load");
  if (!errors.empty()) throw ConfigError(errors);

  const ResponseKind kind = response_kind_from_string(o.kind);
  const auto grid = log_grid(o.fmin, o.fmax, o.points);
  std::vector<FrequencyResponse> responses;
  if (o.method != "numeric") responses.push_back(analytic_frequency_response(cfg.converter, res->rl, kind, grid));
  if (o.method != "analytic") {
    NumericResponseOptions opts;
    opts.amplitude_fraction = o.amplitude;
    opts.max_threads = thread_cap();
    responses.push_back(numeric_frequency_response(cfg.converter, cfg.load, cfg.sim, kind, grid, opts));
  }
  emit(bode_csv(responses), o.out.empty() ? cfg.outputs.bode : o.out, out);
  return kOk;
}

int design(const Options& o, std::ostream& out) {
  const DesignRequest req = load_design_request(o.spec);
  const auto j = design_report_json(req);
  emit(dump(j), o.out, out);
  for (const auto& pt : j["feasibility"]["points"]) {
    if (!pt["feasible"].get<bool>()) return kNumerical;
  }
  return kOk;
}

int string_cmd(const Options& o, std::ostream& out) {
  const ScenarioConfig sc = load_scenario_config(o.scenario);
  const auto r = evaluate_scenario(sc.scenario, sc.n, sc.nd, sc.d_max);
  emit(o.format == "json" ? dump(scenario_json(r)) : scenario_csv(r), o.out, out);
  return r.all_feasible() ? kOk : kNumerical;
}

int verify(const Options& o, std::ostream& out) {
  const RunConfig cfg = load_run_config(o.config);
  const auto report = run_verification(cfg, thread_cap());
  emit(format_verify_table(report), o.out, out);
  return report.all_pass() ? kOk : kNumerical;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"BBMSF converter analysis toolkit", "bbmsf"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "Reserved for stochastic extensions; currently has no effect");

  auto* an = app.add_subcommand("analyze", "Steady-state report (JSON)");
  an->add_option("--config", o.config, "Run configuration")->required();
  an->add_option("--out", o.out, "Output file (default: stdout)");

  auto* sim = app.add_subcommand("simulate", "Periodic steady-state waveform (CSV)");
  sim->add_option("--config", o.config, "Run configuration")->required();
  sim->add_option("--out", o.out, "Output file (default: stdout)");

  auto* bo = app.add_subcommand("bode", "Frequency response (CSV)");
  bo->add_option("--config", o.config, "Run configuration")->required();
  bo->add_option("--kind", o.kind, "Transfer function")->check(CLI::IsMember({"gvd", "gvv", "zo"}));
  bo->add_option("--method", o.method, "Analytic, numeric or both")
      ->check(CLI::IsMember({"analytic", "numeric", "both"}));
  bo->add_option("--fmin", o.fmin, "Lowest frequency [Hz]");
  bo->add_option("--fmax", o.fmax, "Highest frequency [Hz]");
  bo->add_option("--points", o.points, "Log-spaced points");
  bo->add_option("--amplitude", o.amplitude, "Numeric perturbation amplitude (fraction of operating value)");
  bo->add_option("--out", o.out, "Output file (default: stdout)");

  auto* de = app.add_subcommand("design", "Design report from a specification (JSON)");
  de->add_option("--spec", o.spec, "Design request")->required();
  de->add_option("--out", o.out, "Output file (default: stdout)");

  auto* st = app.add_subcommand("string", "String scenario table");
  st->add_option("--scenario", o.scenario, "Scenario file")->required();
  st->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  st->add_option("--out", o.out, "Output file (default: stdout)");

  auto* ve = app.add_subcommand("verify", "Run the cross-check suite");
  ve->add_option("--config", o.config, "Run configuration")->required();
  ve->add_option("--out", o.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }

  try {
    if (an->parsed()) return analyze(o, out);
    if (sim->parsed()) return simulate(o, out);
    if (bo->parsed()) return bode(o, out);
    if (de->parsed()) return design(o, out);
    if (st->parsed()) return string_cmd(o, out);
    return verify(o, out);
  } catch (const ConfigError& e) {
    for (const auto& msg : e.errors()) err << "error: " << msg << "\n";
    return kConfig;
  } catch (const SimulationError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const DesignError& e) {
    err << "design failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
}

}  // namespace bbmsf
