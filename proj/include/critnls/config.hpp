#pragma once
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace critnls {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One orchestrated run: a command, its validated configuration, and the
// output contract. Artifacts are reproducible from the manifest alone
// (config + seed + version determine every byte written).
struct RunManifest {
  std::string command;      // solve | check | stability | scatter | report
  std::string config_path;  // empty when the config came from flags alone
  nlohmann::ordered_json config;
  std::string out_dir;
  bool force = false;
  int threads = 1;
  std::string version;
};

// Code + bump-profile stamp recorded in every manifest and report bundle.
std::string version_stamp();

// Default output root: $CRITNLS_OUT when set, else ./critnls-out.
std::string default_output_root();

// Strict schema pass for the given command: unknown keys are rejected by
// name, values are range-checked with diagnostics naming the offending key,
// and defaults are filled in. Returns the normalized config document.
nlohmann::ordered_json validate_config(const std::string& command,
                                       const nlohmann::ordered_json& raw);

// Validates, guards the output directory (refuses a rerun over an existing
// manifest unless forced), stamps manifest.json, dispatches, and writes the
// report bundle. Returns the process exit status: 0 when every configured
// verdict passes, 2 on an inconclusive verdict (hypothesis not met; the
// report is still written), 1 on error or a failed verdict.
int run(const RunManifest& manifest);

}  // namespace critnls
