// Command-line front end. Uses only the public C API.

#include "pehfd/pehfd.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitIo = 4,
  kExitInternal = 5,
};

int exit_code_for(pehfd_status s) {
  switch (s) {
    case PEHFD_OK:
      return kExitOk;
    case PEHFD_ERR_INVALID_ARGUMENT:
    case PEHFD_ERR_CONFIG:
      return kExitConfig;
    case PEHFD_ERR_DATA:
      return kExitData;
    case PEHFD_ERR_IO:
      return kExitIo;
    default:
      return kExitInternal;
  }
}

struct ConfigDeleter {
  void operator()(pehfd_config* c) const { pehfd_config_free(c); }
};
struct ResultDeleter {
  void operator()(pehfd_result* r) const { pehfd_result_free(r); }
};

using CommandFn = pehfd_status (*)(const pehfd_config*, pehfd_result**);

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<long long> seed;
  std::vector<std::string> overrides;  // key=value
};

int report_failure(const char* stage, pehfd_status s) {
  std::fprintf(stderr, "pehfd: %s failed (%s): %s\n", stage, pehfd_status_name(s),
               pehfd_last_error());
  return exit_code_for(s);
}

int run(const Options& opt, const std::vector<std::pair<std::string, std::string>>& flags,
        CommandFn cmd) {
  pehfd_config* raw = nullptr;
  if (auto s = pehfd_config_create(&raw); s != PEHFD_OK) return report_failure("setup", s);
  std::unique_ptr<pehfd_config, ConfigDeleter> cfg(raw);

  if (!opt.config_path.empty()) {
    if (auto s = pehfd_config_load(cfg.get(), opt.config_path.c_str()); s != PEHFD_OK) {
      return report_failure("loading config", s);
    }
  }
  std::vector<std::pair<std::string, std::string>> settings = flags;
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "pehfd: --set expects key=value, got '%s'\n", kv.c_str());
      return kExitConfig;
    }
    settings.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.out_dir) settings.emplace_back("out_dir", *opt.out_dir);
  if (opt.seed) settings.emplace_back("seed", std::to_string(*opt.seed));
  for (const auto& [key, value] : settings) {
    if (auto s = pehfd_config_set(cfg.get(), key.c_str(), value.c_str()); s != PEHFD_OK) {
      return report_failure("configuration", s);
    }
  }

  pehfd_result* res_raw = nullptr;
  const auto status = cmd(cfg.get(), &res_raw);
  std::unique_ptr<pehfd_result, ResultDeleter> res(res_raw);
  if (status != PEHFD_OK) return report_failure("command", status);
  std::fputs(pehfd_result_text(res.get()), stdout);
  for (size_t i = 0; i < pehfd_result_file_count(res.get()); ++i) {
    const std::string f = pehfd_result_file(res.get(), i);
    if (f.size() < 4 || (f.compare(f.size() - 4, 4, ".csv") != 0 &&
                         f.compare(f.size() - 4, 4, ".svg") != 0)) {
      continue;
    }
    std::printf("wrote %s\n", f.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-harvester fault detection simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", pehfd_version());

  Options opt;
  app.add_option("--config", opt.config_path, "Run configuration (key = value file)");
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--seed", opt.seed, "Base seed for splits / surrogate generation");
  app.add_option("--set", opt.overrides, "Override a configuration key (key=value)")
      ->take_all();

  // Per-command convenience flags; each maps onto a configuration key.
  std::vector<std::pair<std::string, std::string>> flags;
  struct Flag {
    std::string name;
    std::string key;
    std::string help;
  };
  const auto add_flags = [&](CLI::App* sub, std::vector<Flag> defs) {
    for (auto& d : defs) {
      sub->add_option_function<std::string>(
          d.name, [&flags, key = d.key](const std::string& v) { flags.emplace_back(key, v); },
          d.help);
    }
  };
  const Flag manifest{"--manifest", "manifest", "Recording manifest CSV"};
  const Flag design{"--design", "design", "Design name or thickness in mm"};
  const Flag designs{"--designs", "designs", "Comma-separated designs (default: all)"};
  const Flag period{"--T", "T_s", "Integration period T in seconds"};
  const Flag repeats{"--repeats", "repeats", "Number of seeded 80/20 splits"};
  const Flag k{"--k", "k", "Neighbours for kNN"};
  const Flag classes{"--classes", "classes", "Comma-separated labels to keep"};
  const Flag table{"--design-table", "design_table", "Design table file"};

  CommandFn chosen = nullptr;
  const auto sub = [&](const char* name, const char* help, CommandFn fn) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&chosen, fn] { chosen = fn; });
    return s;
  };

  add_flags(sub("thought-experiment", "Two-tone / two-harvester energy comparison",
                pehfd_cmd_thought_experiment),
            {period, table,
             {"--f-healthy", "f_healthy_hz", "Healthy vibration frequency (Hz)"},
             {"--f-faulty", "f_faulty_hz", "Faulty vibration frequency (Hz)"},
             {"--thought-designs", "thought_designs", "Two designs: PEH1,PEH2"}});
  add_flags(sub("extract", "Write per-segment energy features", pehfd_cmd_extract),
            {manifest, design, period, classes, table});
  add_flags(sub("classify", "kNN accuracy over repeated holdout splits", pehfd_cmd_classify),
            {manifest, design, period, repeats, k, classes, table});
  add_flags(sub("sweep", "Accuracy over designs and integration periods", pehfd_cmd_sweep),
            {manifest, designs, repeats, k, classes, table,
             {"--T-values", "T_values", "Comma-separated integration periods"}});
  add_flags(sub("scatter", "Mean faulty vs healthy energy per design (CSV + SVG)",
                pehfd_cmd_scatter),
            {manifest, designs, period, table});
  add_flags(sub("energy-report", "Sampling-rate and ADC/TX energy comparison",
                pehfd_cmd_energy_report),
            {period, {"--fs-raw", "fs_raw_hz", "Raw sampling rate (Hz)"}});
  add_flags(sub("surrogate-gen", "Write a synthetic labelled corpus + manifest",
                pehfd_cmd_surrogate_gen),
            {{"--spec", "surrogate_spec", "Surrogate spec file"}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return run(opt, flags, chosen);
}
