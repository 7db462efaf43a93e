// Command-line front end (list / run)
//
// Exit codes: 0 ok, 2 usage, 3 validation, 4 numeric failure.
// Thread count: --threads, else DRET_THREADS, else 1.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dret/scenarios.hpp"

namespace dret::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kValidation = 3, kNumeric = 4 };

inline constexpr const char* kVersion = "1.0.0";

// One line per preset: name, regime, citation. Alphabetical.
std::string list_presets();

struct RunArgs {
    std::optional<std::string> scenario;
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> replay;  // meta.json of an earlier run
    std::optional<double> tmax;
    std::optional<double> dt_out;
    std::optional<int> fock_max;
    std::optional<std::size_t> heom_cutoff;
    std::optional<std::size_t> wigner_frames;
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> threads;
    bool emit_plots{false};
};

struct RunOutcome {
    int exit_code{kOk};
    std::filesystem::path out_dir;
    nlohmann::json meta;
};

// Resolves the run configuration, simulates, and writes the export bundle.
// meta.json is written whenever an output directory could be determined.
RunOutcome run(const RunArgs& args, std::ostream& out, std::ostream& err);

// Full command line, argv[0] included.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dret::cli
