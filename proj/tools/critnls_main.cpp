// Command-line front end: subcommand + flags -> RunManifest -> run().
// Exit status: 0 all configured verdicts pass, 2 inconclusive (hypothesis not
// met; report still written), 1 config/schema errors, solver errors, or a
// failed verdict.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <critnls/config.hpp>

int main(int argc, char** argv) {
  CLI::App app{"critnls: pseudospectral toolkit for the energy-critical "
               "Schrodinger flow (propagator, dyadic calculus, contraction "
               "solver, estimate campaigns)"};
  app.require_subcommand(1);

  std::string config_path, out_dir, experiment, input;
  long long seed = 0;
  int threads = 1, n_flag = 0, seeds_flag = 0;
  bool force = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir,
                    "output directory (default: $CRITNLS_OUT or ./critnls-out, "
                    "plus a per-command leaf)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_flag("--force", force,
                  "redo a run in place even if its manifest already exists");
    sub->add_option("--threads", threads,
                    "worker threads recorded in the manifest")
        ->check(CLI::Range(1, 256));
    return sub;
  };

  add_common(app.add_subcommand(
      "solve", "integrate one configured datum and store the trajectory"));
  CLI::App* check = add_common(app.add_subcommand(
      "check", "run one estimate campaign and write its report"));
  check->add_option("--experiment", experiment,
                    "strichartz | exotic-strichartz | nonlinear-estimate | "
                    "small-data | lipschitz");
  check->add_option("--n", n_flag, "override the dimension");
  check->add_option("--seeds", seeds_flag, "override the number of seeds");
  CLI::App* stability = add_common(app.add_subcommand(
      "stability", "fit the perturbative stability exponent"));
  stability->add_option("--n", n_flag, "override the dimension");
  add_common(app.add_subcommand(
      "scatter", "long-horizon radial run with scattering-state extraction"));
  CLI::App* report = add_common(app.add_subcommand(
      "report", "re-render a stored report (json/csv/svg bundle)"));
  report->add_option("--input", input, "stored report JSON to re-render");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  critnls::RunManifest m;
  m.command = sub->get_name();
  m.out_dir = out_dir;
  m.force = force;
  m.threads = threads;
  m.version = critnls::version_stamp();
  m.config = nlohmann::ordered_json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config file " << config_path << "\n";
      return 1;
    }
    try {
      m.config = nlohmann::ordered_json::parse(f);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
      return 1;
    }
    m.config_path = config_path;
  }
  if (!m.config.is_object()) {
    std::cerr << "config error: top level must be a JSON object\n";
    return 1;
  }
  if (sub->count("--seed")) m.config["seed"] = seed;
  if (sub == check) {
    if (check->count("--experiment")) m.config["experiment"] = experiment;
    if (check->count("--n")) m.config["n"] = n_flag;
    if (check->count("--seeds")) m.config["seeds"] = seeds_flag;
  }
  if (sub == stability && stability->count("--n")) m.config["n"] = n_flag;
  if (sub == report && report->count("--input")) m.config["input"] = input;
  return critnls::run(m);
}
