#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/geodensity.hpp"

namespace gtdmine {

/// Flat key=value settings; keys are the long flag names without "--".
using Settings = std::map<std::string, std::string>;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

const std::vector<std::string>& command_names();
/// Keys a command accepts, in manifest order.
const std::vector<std::string>& command_keys(const std::string& command);
Settings default_settings(const std::string& command);

/// Reads a config or manifest file. "command" must match when present;
/// digest and output lines are skipped. Throws InvalidConfig.
Settings read_config_file(const std::string& path, const std::string& command);

struct RunConfig {
    std::string command;
    Settings settings;  // fully resolved, echoed into the manifest

    std::string csv, schema, encoding, data, model, in, presets;
    std::string out, out_model, out_report, out_grid;
    std::string format = "text";
    bool strict = false;

    ClassifierConfig classifier;
    std::size_t k = 10;
    std::uint64_t seed = 42;

    std::optional<GeoBounds> bounds;
    std::string region;
    std::size_t nx = 360;
    std::size_t ny = 180;
    double smooth = 0;
};

/// Applies `overrides` over the config file over the defaults and
/// checks every value and referenced input file. Throws InvalidConfig,
/// InvalidHyperparameter, InvalidBounds or FileNotFound.
RunConfig resolve_config(const std::string& command, const Settings& overrides,
                         const std::optional<std::string>& config_path = std::nullopt);

/// Executes a resolved command. Returns an exit status; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line, argv[0] included.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string sha256_file(const std::string& path);
std::string manifest_text(const RunConfig& config, const std::vector<std::string>& outputs);

}  // namespace gtdmine
