// spin2d command line driver; talks to the library through the C API only.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spin2d/spin2d.h"

namespace {

int report_error(const char* what, s2d_status s) {
  std::cerr << "spin2d: " << (*what ? std::string(what) + ": " : std::string()) << s2d_last_error() << "\n";
  return s == S2D_INVALID_ARGUMENT || s == S2D_IO_ERROR ? 2 : static_cast<int>(s);
}

int run_verify(const std::string& path, bool json, const uint64_t* seed, int refine, const std::string& out) {
  s2d_config* cfg = nullptr;
  if (s2d_status s = s2d_config_load(path.c_str(), &cfg); s != S2D_OK) return report_error("", s);
  if (seed) s2d_config_set_seed(cfg, *seed);

  s2d_report* rep = nullptr;
  const s2d_status s = s2d_verify(cfg, refine, &rep);
  s2d_config_free(cfg);
  if (s != S2D_OK) return report_error("verify", s);

  std::cout << (json ? s2d_report_json(rep) : s2d_report_table(rep));
  int code = s2d_report_exit_code(rep);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    f << s2d_report_json(rep);
    if (!f) {
      std::cerr << "spin2d: cannot write report '" << out << "'\n";
      code = 2;
    }
  }
  // a task that errored names itself and the point in the report
  for (size_t i = 0; i < s2d_report_task_count(rep); ++i) {
    s2d_task_info t;
    if (s2d_report_task(rep, i, &t) == S2D_OK && t.exit_code >= 2) std::cerr << "spin2d: " << t.error << "\n";
  }
  s2d_report_free(rep);
  return code;
}

int run_separate(const std::string& path, const std::string& csv) {
  s2d_config* cfg = nullptr;
  if (s2d_status s = s2d_config_load(path.c_str(), &cfg); s != S2D_OK) return report_error("", s);
  size_t rows = 0;
  const s2d_status s = s2d_separate_csv(cfg, csv.c_str(), &rows);
  s2d_config_free(cfg);
  if (s != S2D_OK) return report_error("separate", s);
  std::cout << "wrote " << rows << " rows to " << csv << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin2d: numerical checks of spin geometry in two dimensions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(s2d_version()));

  std::string config, out, csv;
  bool json = false;
  uint64_t seed = 0;
  int refine = 1;

  CLI::App* verify = app.add_subcommand("verify", "run the tasks listed in a config and report residuals");
  verify->add_option("config", config, "config file")->required();
  verify->add_flag("--json", json, "one JSON object per task on stdout");
  CLI::Option* seed_opt = verify->add_option("--seed", seed, "override the config seed");
  verify->add_option("--grid-refine", refine, "rerun grid quadrature on a K times finer grid")
      ->check(CLI::PositiveNumber);
  verify->add_option("--out", out, "also write the JSON report here");

  CLI::App* separate = app.add_subcommand("separate", "integrate a separated solution and export it");
  separate->add_option("config", config, "config file")->required();
  separate->add_option("--csv", csv, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*verify) return run_verify(config, json, *seed_opt ? &seed : nullptr, refine, out);
  return run_separate(config, csv);
}
