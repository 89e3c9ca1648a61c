// gwpdyn command-line runner; uses only the C interface.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "gwpdyn/gwpdyn.h"

namespace {

int report(gwp_status s) {
  std::fprintf(stderr, "error: code=%s key=%s message=%s\n", gwp_status_name(s),
               *gwp_last_error_key() ? gwp_last_error_key() : "-", gwp_last_error());
  return 1;
}

int run_config(gwp_config* cfg, const std::string& out_dir) {
  gwp_run_summary summary{};
  const gwp_status s = gwp_run(cfg, out_dir.c_str(), &summary);
  gwp_config_free(cfg);
  if (s != GWP_OK && s != GWP_ERR_CHECK_FAILED) return report(s);
  std::printf("wrote %s (%d rows, %ld potential evaluations, %.3f s)\n", gwp_last_output_path(),
              summary.rows_written, summary.potential_evaluations, summary.wall_seconds);
  if (s == GWP_ERR_CHECK_FAILED) return report(s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian wavepacket dynamics with geometric integrators"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run a configuration file");
  run->add_option("config", config_path, "key = value configuration file")->required();
  run->add_option("-o,--output", out_dir, "output directory");
  run->add_option("-s,--set", overrides, "override as key=value (repeatable)");

  std::string preset_name;
  bool paper_scale = false;
  auto* preset = app.add_subcommand("preset", "run a named preset");
  preset->add_option("name", preset_name, "preset name (see list-presets)")->required();
  preset->add_flag("--paper-scale", paper_scale, "use the published run lengths");
  preset->add_option("-o,--output", out_dir, "output directory");
  preset->add_option("-s,--set", overrides, "override as key=value (repeatable)");

  bool dump_only = false;
  preset->add_flag("--print", dump_only, "print the preset configuration instead of running it");

  auto* list = app.add_subcommand("list-presets", "list the available presets");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (size_t i = 0; i < gwp_preset_count(); ++i)
      std::printf("%-24s %s\n", gwp_preset_name(i), gwp_preset_description(i));
    return 0;
  }

  gwp_config* cfg = nullptr;
  gwp_status s = run->parsed() ? gwp_config_load(config_path.c_str(), &cfg)
                               : gwp_config_preset(preset_name.c_str(), paper_scale ? 1 : 0, &cfg);
  if (s != GWP_OK) return report(s);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      gwp_config_free(cfg);
      std::fprintf(stderr, "error: code=config key=- message=override '%s' is not key=value\n", o.c_str());
      return 1;
    }
    s = gwp_config_set(cfg, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str());
    if (s != GWP_OK) {
      gwp_config_free(cfg);
      return report(s);
    }
  }
  if (dump_only) {
    size_t needed = 0;
    gwp_config_dump(cfg, nullptr, 0, &needed);
    std::string text(needed, '\0');
    gwp_config_dump(cfg, text.data(), text.size(), nullptr);
    std::fputs(text.c_str(), stdout);
    gwp_config_free(cfg);
    return 0;
  }
  return run_config(cfg, out_dir);
}
