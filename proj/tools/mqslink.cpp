// mqslink command-line front end.
//
//   mqslink run <config> [--out DIR] [--threads N] [--log LEVEL]
//   mqslink validate <config>
//   mqslink defaults > config
//
// Exit status: 0 success, 1 one or more requests failed, 2 invalid config.

#include <algorithm>
#include <iostream>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "mqslink/config.hpp"
#include "mqslink/parallel.hpp"
#include "mqslink/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitInvalidConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magneto-quasistatic necklace/contact-lens link simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mqslink::kArtifactVersion);

  std::string config_path;
  std::string out_dir = "out";
  unsigned threads = 0;
  std::string log_level = "info";
  bool allow_defaults = false;

  auto* run = app.add_subcommand("run", "Run every request of a scenario config");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  run->add_option("--log", log_level, "Log level")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();
  run->add_flag("--allow-defaults", allow_defaults, "Fill missing sections and keys from the nominal scenario");

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario config");
  validate->add_option("config", config_path, "Scenario config file")->required();
  validate->add_flag("--allow-defaults", allow_defaults, "Fill missing sections and keys from the nominal scenario");

  auto* defaults = app.add_subcommand("defaults", "Print the nominal scenario config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalidConfig;
  }

  auto logger = spdlog::stderr_color_mt("mqslink");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::from_str(log_level));

  if (defaults->parsed()) {
    std::cout << mqslink::default_config_text();
    return kExitOk;
  }

  mqslink::ScenarioConfig config;
  try {
    config = mqslink::parse_config(config_path, {allow_defaults});
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInvalidConfig;
  }

  if (validate->parsed()) {
    std::cout << config_path << ": ok, " << config.requests.size() << " requests, "
              << mqslink::config_digest(config) << '\n';
    return kExitOk;
  }

  mqslink::set_thread_count(threads ? threads : std::max(1u, std::thread::hardware_concurrency()));
  spdlog::info("config {} ({})", config_path, mqslink::config_digest(config));
  spdlog::debug("{} worker threads", mqslink::thread_count());

  mqslink::RunOptions options;
  options.progress = [](const std::string& name) { spdlog::info("request {}", name); };
  mqslink::RunReport report;
  try {
    report = mqslink::run_scenario(config, out_dir, options);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitPartial;
  }

  for (const auto& w : report.warnings) spdlog::warn("{}", w);
  for (const auto& r : report.requests) {
    for (const auto& w : r.warnings) spdlog::warn("{}: {}", r.name, w);
    if (!r.ok) spdlog::error("{} failed: {}", r.name, r.error);
  }
  spdlog::info("wrote {}/{}", out_dir, mqslink::kReportFileName);
  return report.any_failed() ? kExitPartial : kExitOk;
}
