// lab <experiment> --field p^r --seed s --out dir [flags]

#include <iostream>

#include <CLI11.hpp>

#include "pdlab/lab.hpp"

int main(int argc, char** argv) {
  using namespace pdlab;
  CLI::App app{"Seeded experiments over finite fields"};
  app.set_version_flag("--version", kVersion);

  ExperimentConfig cfg;
  bool list = false;
  std::vector<std::string> sets;
  std::string names;
  for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;

  app.add_option("experiment", cfg.experiment, "one of: " + names);
  app.add_flag("--list", list, "print the experiment names and exit");
  app.add_option("--field", cfg.field, "field as p^r or a prime p");
  app.add_option("--seed", cfg.seed, "run seed")->capture_default_str();
  app.add_option("--out", cfg.out, "directory for summary.json and detail.csv");
  app.add_option("--set", sets,
                 "NAME=SPEC set source, e.g. A=vspace:2:1, X=nonzero:subfield:1, "
                 "B=random:12, W=list:1,2,5");
  app.add_option("--K", cfg.k, "ratio parameter K, e.g. 2 or 3/2");
  app.add_option("--size", cfg.size, "primary set size");
  app.add_option("--size2", cfg.size2, "secondary set size");
  app.add_option("--trials", cfg.trials, "number of seeded instances");
  app.add_option("--subfield-degree", cfg.subfield_degree, "subfield degree k");
  app.add_option("--pairs", cfg.pairs, "number of (u, v) queries");
  app.add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (list) {
    for (const auto& n : experiment_names()) std::cout << n << '\n';
    return 0;
  }
  if (cfg.experiment.empty() || cfg.field.empty()) {
    std::cerr << "lab: an experiment and --field are required\n" << app.help();
    return kConfigError;
  }
  for (const auto& item : sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "lab: --set expects NAME=SPEC, got '" << item << "'\n";
      return kConfigError;
    }
    cfg.sets[item.substr(0, eq)] = item.substr(eq + 1);
  }

  const auto res = run(cfg);
  const auto& s = res.summary;
  std::cout << cfg.experiment << " " << cfg.field << ": "
            << (res.exit_code == kPass ? "PASS" : "FAIL") << " (" << s["checks"]["run"]
            << " checks, " << s["checks"]["failed"] << " failed";
  if (s.value("descriptive", false)) std::cout << ", descriptive";
  std::cout << ")\n";
  if (s.contains("error")) std::cerr << "lab: " << s["error"].get<std::string>() << '\n';
  for (const auto& f : s["failures"]) std::cerr << "  failed: " << f.get<std::string>() << '\n';
  if (cfg.out.empty()) std::cout << s.dump(2) << '\n';
  return res.exit_code;
}
