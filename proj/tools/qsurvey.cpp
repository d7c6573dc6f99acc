// qsurvey: verification suites, EPR experiments and diameter surveys.
//
//   qsurvey verify --suite all --manifold su2 --seed 42
//   qsurvey epr --manifold wh --trials 1000000 --seed 7 --grid 0,0.5,1,1.5,2
//   qsurvey survey --manifold wh --grid 0:3:31 --format csv
//
// Exit codes: 0 all cases pass, 1 some case failed, 2 configuration or I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "qsurvey/qsurvey.hpp"

namespace {

int threads_from_env() {
  const char* v = std::getenv("QSURVEY_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw qsurvey::ParameterError("QSURVEY_THREADS must be a non-negative integer");
  return static_cast<int>(n);
}

void add_common(CLI::App* cmd, qsurvey::SuiteConfig& cfg) {
  cmd->add_option("--manifold", cfg.manifold, "su2 or wh")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--trials", cfg.n_trials, "Monte-Carlo trials per experiment")->capture_default_str();
  cmd->add_option("--cutoff", cfg.cutoff, "Fock cutoff n_max")->capture_default_str();
  cmd->add_option("--r", cfg.r, "twisted vacuum parameter in [0,1)")->capture_default_str();
  cmd->add_option("--grid", cfg.grid, "separations: a:b:n or x,y,z");
  cmd->add_option("--out", cfg.output_path, "output file (default stdout)");
  cmd->add_option("--format", cfg.format, "json or csv")->capture_default_str();
}

// Opened before any computation so an unwritable path fails fast.
std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& file) {
  if (path.empty()) return std::cout;
  file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*file) throw qsurvey::IOError("cannot write output path '" + path + "'");
  return *file;
}

void emit(std::ostream& out, const qsurvey::ReportEnvelope& env, const std::string& format) {
  if (format == "csv") {
    qsurvey::write_cases_csv(out, env);
  } else {
    out << qsurvey::to_json(env).dump(2) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state geometry and hidden-variable survey"};
  app.require_subcommand(1);

  qsurvey::SuiteConfig cfg;
  std::string trial_log;

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", cfg.suite,
                     "identity, metric, bell, dispersion, dynamics, hv-epr, hv-cdf or all")
      ->capture_default_str();
  add_common(verify, cfg);

  auto* epr = app.add_subcommand("epr", "coincidence experiments over a separation grid");
  add_common(epr, cfg);
  epr->add_option("--trial-log", trial_log, "per-trial CSV for the first grid point");

  auto* survey = app.add_subcommand("survey", "tabulate d and p over a separation grid");
  add_common(survey, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const int threads = threads_from_env();
    const auto cmd = verify->parsed() ? qsurvey::Command::verify
                     : epr->parsed()  ? qsurvey::Command::epr
                                      : qsurvey::Command::survey;
    qsurvey::validate_config(cfg, cmd);
    std::unique_ptr<std::ofstream> file, log_file;
    std::ostream& out = open_output(cfg.output_path, file);

    qsurvey::ReportEnvelope env;
    if (cmd == qsurvey::Command::verify) {
      env = qsurvey::cmd_verify(cfg, threads);
      emit(out, env, cfg.format);
    } else if (cmd == qsurvey::Command::epr) {
      std::vector<qsurvey::TrialRecord> records;
      if (!trial_log.empty()) {
        log_file = std::make_unique<std::ofstream>(trial_log, std::ios::binary | std::ios::trunc);
        if (!*log_file) throw qsurvey::IOError("cannot write trial log '" + trial_log + "'");
      }
      env = qsurvey::cmd_epr(cfg, threads, log_file ? &records : nullptr);
      if (log_file) qsurvey::write_trial_csv(*log_file, records);
      emit(out, env, cfg.format);
    } else {
      std::vector<qsurvey::SurveyRow> rows;
      env = qsurvey::cmd_survey(cfg, rows);
      if (cfg.format == "csv") {
        qsurvey::write_survey_csv(out, rows);
      } else {
        emit(out, env, cfg.format);
      }
    }
    out.flush();
    if (!out) throw qsurvey::IOError("write failed");
    return env.overall_pass() ? 0 : 1;
  } catch (const qsurvey::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qsurvey::IOError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
