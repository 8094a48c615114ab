// evwg: run one simulation mode from a config file.
//
//   evwg <mode> --config <path> [--out-dir <dir>] [--seed <u64>] [--threads <k>]

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "evwg/config.hpp"
#include "evwg/error.hpp"
#include "evwg/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Evanescent-wave guided atom simulator"};
  app.set_version_flag("--version", "evwg 0.1.0");

  std::string mode_name;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;

  app.add_option("mode", mode_name,
                 "convert-units | freqmap | portrait | fixedpoints | ensemble | detect | quantum | revival")
      ->required();
  app.add_option("--config,-c", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out-dir,-o", out_dir, "Output directory (default: $EVWG_OUT_DIR or .)");
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (1 = bit-exact serial)")
                          ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const evwg::Mode mode = evwg::parse_mode(mode_name);
    const evwg::RunConfig cfg = evwg::load_config(config_path);

    evwg::RunOptions options;
    if (*out_opt) {
      options.out_dir = out_dir;
    } else if (const char* env = std::getenv("EVWG_OUT_DIR"); env && *env) {
      options.out_dir = env;
    }
    if (*seed_opt) options.seed = seed;
    if (*threads_opt) options.threads = threads;

    const auto result = evwg::run(cfg, mode, options);
    std::cout << result.summary << '\n';
    return 0;
  } catch (const evwg::ConfigError& e) {
    std::cerr << "evwg: config error in " << config_path << ": " << e.what() << '\n';
    return 2;
  } catch (const evwg::RunError& e) {
    std::cerr << "evwg: " << mode_name << " failed in " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "evwg: " << e.what() << '\n';
    return 1;
  }
}
