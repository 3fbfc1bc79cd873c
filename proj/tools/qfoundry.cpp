#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "qfoundry/errors.hpp"
#include "qfoundry/exec.hpp"
#include "qfoundry/scenarios.hpp"
#include "qfoundry/verify.hpp"

namespace {

using qfoundry::cli::ScenarioConfig;

struct Common {
  std::uint64_t seed = qfoundry::rng::kDefaultSeed;
  std::string output;
  std::string format;
  int jobs = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "random seed")->envname("QFOUNDRY_SEED");
  sub->add_option("--output", c.output, "write the table to this file (CSV also gets <file>.meta.json)");
  sub->add_option("--format", c.format, "json | csv (default json, or csv for a .csv output)")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--jobs", c.jobs, "OpenMP worker count")->check(CLI::NonNegativeNumber);
}

struct Subcommand {
  CLI::App* app;
  std::string scenario;
  std::map<std::string, std::string> values;
  std::map<std::string, std::string> scans;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement and nonlocality toolkit: runs named scenarios and writes result tables."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QFOUNDRY_VERSION));

  Common common;
  std::vector<std::unique_ptr<Subcommand>> subs;
  for (const auto& spec : qfoundry::cli::scenario_specs()) {
    auto s = std::make_unique<Subcommand>();
    s->scenario = spec.name;
    s->app = app.add_subcommand(spec.name, spec.summary);
    for (const auto& p : spec.params) {
      s->app->add_option("--" + p.key, s->values[p.key], p.help + " [" + p.default_value + "]");
      if (p.scannable) s->app->add_option("--scan-" + p.key, s->scans[p.key], "scan " + p.key + " over lo:hi:step");
    }
    add_common(s->app, common);
    subs.push_back(std::move(s));
  }

  double kcbs_offset_deg = 0.0;
  bool serial = false;
  CLI::App* verify = app.add_subcommand("verify", "run the self-checks and print pass/fail with measured values");
  verify->add_option("--seed", common.seed, "random seed")->envname("QFOUNDRY_SEED");
  verify->add_option("--kcbs-theta-offset", kcbs_offset_deg, "perturb the KCBS pentagram (deg)");
  verify->add_option("--jobs", common.jobs, "OpenMP worker count")->check(CLI::NonNegativeNumber);
  verify->add_flag("--serial", serial, "use the serial reference kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (verify->parsed()) {
    qfoundry::set_jobs(common.jobs);
    qfoundry::verify::VerifyOptions opt;
    opt.seed = common.seed;
    opt.kcbs_theta_offset = kcbs_offset_deg * std::numbers::pi / 180.0;
    opt.exec = serial ? qfoundry::Exec::Serial : qfoundry::Exec::Parallel;
    const auto report = qfoundry::verify::verify_all(opt);
    std::cout << report.text();
    return report.all_pass() ? 0 : 1;
  }

  for (const auto& s : subs) {
    if (!s->app->parsed()) continue;
    ScenarioConfig config;
    config.scenario = s->scenario;
    config.seed = common.seed;
    config.output = common.output;
    config.jobs = common.jobs;
    const bool csv = common.format == "csv" ||
                     (common.format.empty() && config.output.size() > 4 &&
                      config.output.compare(config.output.size() - 4, 4, ".csv") == 0);
    config.format = csv ? qfoundry::cli::Format::Csv : qfoundry::cli::Format::Json;
    for (const auto& [key, value] : s->values)
      if (s->app->count("--" + key) > 0) config.params[key] = value;
    try {
      for (const auto& [key, text] : s->scans) {
        if (s->app->count("--scan-" + key) == 0) continue;
        if (config.scan) throw qfoundry::ValidationError("parameter 'scan-" + key + "': only one scan per run");
        config.scan = qfoundry::cli::Scan::parse(key, text);
      }
    } catch (const qfoundry::ValidationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    return qfoundry::cli::run(config, std::cout, std::cerr);
  }
  return 2;
}
