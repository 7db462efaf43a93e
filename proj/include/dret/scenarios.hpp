// Figure presets and JSON run configuration
//
// Config schema (version 1), all energies in units of J_ref, sites 1-based:
//
//   {
//     "version": 1,
//     "name": "my-run",
//     "regime": "closed" | "heom",
//     "chain": {
//       "energy_offsets": [..],        // Omega_j - Omega_ref, one per site
//       "reference_site": 2,           // optional; offsets are absolute when omitted
//       "couplings": [[..], ..]        // full symmetric N x N, zero diagonal
//     },
//     "mode": { "frequency": w, "site_couplings": [f_1, ..] },           // closed only
//     "bath": { "reorganization": [..], "relaxation": [..],             // heom only
//               "scaling": [..], "thermal_energy": kT },
//     "initial_site": 1,
//     "time": { "tmax": 30.0, "dt_out": 0.05 },
//     "numerics": { "fock_max": 30, "fock_escalation_cap": 400, "fock_auto_converge": false,
//                   "closed_tolerance": 1e-15, "heom_cutoff": 6, "heom_rtol": 1e-7,
//                   "heom_atol": 1e-10, "heom_fixed_step": null },
//     "wigner": { "frames": 0, "extent": 8.0, "points": 201 }
//   }
//
// Unknown keys are rejected at every level.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dret/model.hpp"

namespace dret {

enum class Regime { Closed, Heom };

const char* to_string(Regime r) noexcept;

struct ChainSpec {
    std::vector<double> energy_offsets;
    std::optional<std::size_t> reference_site;  // 0-based
    RealMatrix couplings;

    MoleculeChain chain() const;
};

struct Numerics {
    int fock_max{30};
    int fock_escalation_cap{400};
    bool fock_auto_converge{false};
    double closed_tolerance{1e-15};
    std::size_t heom_cutoff{6};
    double heom_rtol{1e-7};
    double heom_atol{1e-10};
    std::optional<double> heom_fixed_step;
};

struct WignerOptions {
    std::size_t frames{0};
    double extent{8.0};
    std::size_t points{201};
};

struct RunConfig {
    int version{1};
    std::string name;
    Regime regime{Regime::Closed};
    ChainSpec chain_spec;
    std::optional<SharedMode> mode;
    std::optional<BathSpec> bath;
    std::size_t initial_site{0};  // 0-based
    double tmax{30.0};
    double dt_out{0.05};
    Numerics numerics;
    WignerOptions wigner;
    std::vector<std::string> defaults_applied;  // keys filled from defaults on load

    MoleculeChain chain() const { return chain_spec.chain(); }
};

// Throws ValidationError naming the violated invariant.
void validate_config(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

// Parse errors carry the JSON parser's byte/line position; validation errors name the field.
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

struct ScenarioPreset {
    RunConfig config;
    std::string citation;
    std::vector<std::string> checks;  // acceptance checks that apply
    std::string window_note;          // how the time window was chosen
    std::vector<double> relaxation_sweep;  // gamma values swept for the figure, if any
};

// Names of the acceptance checks presets may reference.
const std::vector<std::string>& known_checks();

// Alphabetical.
std::vector<std::string> preset_names();
ScenarioPreset preset(const std::string& name);
bool has_preset(const std::string& name);

}  // namespace dret
