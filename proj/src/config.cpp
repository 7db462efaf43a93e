// JSON run configuration: strict parsing, defaults, round trip

#include "dret/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace dret {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!ok.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

std::string path_of(const std::string& where, const char* key) {
    return where.empty() ? std::string(key) : where + "." + key;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ValidationError(field + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(field + ": must be finite");
    return x;
}

std::vector<double> number_list(const json& v, const std::string& field) {
    if (!v.is_array()) throw ValidationError(field + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

long long integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ValidationError(field + ": expected an integer");
    return v.get<long long>();
}

std::size_t site_number(const json& v, const std::string& field) {
    const long long s = integer(v, field);
    if (s < 1) throw ValidationError(field + ": sites are numbered from 1");
    return static_cast<std::size_t>(s - 1);
}

std::size_t count(const json& v, const std::string& field) {
    const long long n = integer(v, field);
    if (n < 0) throw ValidationError(field + ": must be non-negative");
    return static_cast<std::size_t>(n);
}

RealMatrix matrix(const json& v, const std::string& field) {
    if (!v.is_array()) throw ValidationError(field + ": expected an array of rows");
    const auto n = static_cast<Eigen::Index>(v.size());
    RealMatrix m = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::string rf = field + "[" + std::to_string(i) + "]";
        const auto row = number_list(v[static_cast<std::size_t>(i)], rf);
        if (static_cast<Eigen::Index>(row.size()) != n) {
            throw ValidationError(rf + ": couplings must be square");
        }
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
    }
    return m;
}

json matrix_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

// line and column of a byte offset, both 1-based
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

const char* to_string(Regime r) noexcept {
    return r == Regime::Closed ? "closed" : "heom";
}

MoleculeChain ChainSpec::chain() const {
    // Offsets are relative to the reference site, whose own energy is the zero.
    return MoleculeChain{energy_offsets, couplings};
}

void validate_config(const RunConfig& c) {
    if (c.version != kSchemaVersion) {
        throw ValidationError("version: unsupported schema version " + std::to_string(c.version));
    }
    const auto chain = c.chain();
    if (static_cast<std::size_t>(c.chain_spec.couplings.rows()) != c.chain_spec.energy_offsets.size()) {
        throw ValidationError("chain.couplings: dimension differs from number of energy offsets");
    }
    require(validate_chain(chain), "chain");
    const std::size_t n = chain.site_count();
    if (c.chain_spec.reference_site) {
        const std::size_t r = *c.chain_spec.reference_site;
        if (r >= n) throw ValidationError("chain.reference_site: out of range");
        if (c.chain_spec.energy_offsets[r] != 0.0) {
            throw ValidationError("chain.energy_offsets: offset of the reference site must be 0");
        }
    }
    if (c.initial_site >= n) throw ValidationError("initial_site: out of range");
    if (!(c.tmax > 0.0) || !std::isfinite(c.tmax)) throw ValidationError("time.tmax: must be positive");
    if (!(c.dt_out > 0.0) || c.dt_out > c.tmax) {
        throw ValidationError("time.dt_out: must be positive and not exceed tmax");
    }
    if (c.regime == Regime::Closed) {
        if (!c.mode) throw ValidationError("mode: required for the closed regime");
        if (c.bath) throw ValidationError("bath: not used by the closed regime");
        require(validate_mode(*c.mode, n), "mode");
        if (c.numerics.fock_max < 1) throw ValidationError("numerics.fock_max: must be at least 1");
        if (c.numerics.fock_max >= c.numerics.fock_escalation_cap) {
            throw ValidationError("numerics.fock_escalation_cap: must exceed fock_max");
        }
        if (!(c.numerics.closed_tolerance > 0.0) || c.numerics.closed_tolerance >= 1e-3) {
            throw ValidationError("numerics.closed_tolerance: must lie in (0, 1e-3)");
        }
        if (c.wigner.frames > 0) {
            if (!(c.wigner.extent > 0.0)) throw ValidationError("wigner.extent: must be positive");
            if (c.wigner.points < 3) throw ValidationError("wigner.points: need at least 3");
        }
    } else {
        if (!c.bath) throw ValidationError("bath: required for the heom regime");
        if (c.mode) throw ValidationError("mode: not used by the heom regime");
        require(validate_bath(*c.bath, n), "bath");
        if (c.numerics.heom_cutoff < 1) throw ValidationError("numerics.heom_cutoff: must be at least 1");
        if (!(c.numerics.heom_rtol > 0.0) || !(c.numerics.heom_atol > 0.0)) {
            throw ValidationError("numerics.heom_rtol/heom_atol: must be positive");
        }
        if (c.numerics.heom_fixed_step && !(*c.numerics.heom_fixed_step > 0.0)) {
            throw ValidationError("numerics.heom_fixed_step: must be positive");
        }
        if (c.wigner.frames > 0) throw ValidationError("wigner.frames: only available in the closed regime");
    }
}

json to_json(const RunConfig& c) {
    json j;
    j["version"] = c.version;
    j["name"] = c.name;
    j["regime"] = to_string(c.regime);
    json chain;
    chain["energy_offsets"] = c.chain_spec.energy_offsets;
    if (c.chain_spec.reference_site) chain["reference_site"] = *c.chain_spec.reference_site + 1;
    chain["couplings"] = matrix_json(c.chain_spec.couplings);
    j["chain"] = std::move(chain);
    if (c.mode) {
        j["mode"] = {{"frequency", c.mode->frequency}, {"site_couplings", c.mode->site_couplings}};
    }
    if (c.bath) {
        j["bath"] = {{"reorganization", c.bath->reorganization},
                     {"relaxation", c.bath->relaxation},
                     {"scaling", c.bath->scaling},
                     {"thermal_energy", c.bath->thermal_energy}};
    }
    j["initial_site"] = c.initial_site + 1;
    j["time"] = {{"tmax", c.tmax}, {"dt_out", c.dt_out}};
    json num;
    num["fock_max"] = c.numerics.fock_max;
    num["fock_escalation_cap"] = c.numerics.fock_escalation_cap;
    num["fock_auto_converge"] = c.numerics.fock_auto_converge;
    num["closed_tolerance"] = c.numerics.closed_tolerance;
    num["heom_cutoff"] = c.numerics.heom_cutoff;
    num["heom_rtol"] = c.numerics.heom_rtol;
    num["heom_atol"] = c.numerics.heom_atol;
    num["heom_fixed_step"] = c.numerics.heom_fixed_step ? json(*c.numerics.heom_fixed_step) : json(nullptr);
    j["numerics"] = std::move(num);
    j["wigner"] = {{"frames", c.wigner.frames}, {"extent", c.wigner.extent}, {"points", c.wigner.points}};
    return j;
}

RunConfig config_from_json(const json& j) {
    reject_unknown(j, "config",
                   {"version", "name", "regime", "chain", "mode", "bath", "initial_site", "time",
                    "numerics", "wigner"});
    RunConfig c;
    auto fill = [&c](const json& obj, const std::string& where, const char* key, auto&& apply) {
        if (obj.contains(key)) {
            apply(obj.at(key), path_of(where, key));
        } else {
            c.defaults_applied.push_back(path_of(where, key));
        }
    };

    if (!j.contains("version")) throw ValidationError("version: required");
    c.version = static_cast<int>(integer(j.at("version"), "version"));
    if (c.version != kSchemaVersion) {
        throw ValidationError("version: unsupported schema version " + std::to_string(c.version));
    }
    fill(j, "", "name", [&](const json& v, const std::string& f) {
        if (!v.is_string()) throw ValidationError(f + ": expected a string");
        c.name = v.get<std::string>();
    });
    if (!j.contains("regime")) throw ValidationError("regime: required");
    {
        const json& r = j.at("regime");
        if (r == "closed") {
            c.regime = Regime::Closed;
        } else if (r == "heom") {
            c.regime = Regime::Heom;
        } else {
            throw ValidationError("regime: expected \"closed\" or \"heom\"");
        }
    }

    if (!j.contains("chain")) throw ValidationError("chain: required");
    const json& ch = j.at("chain");
    reject_unknown(ch, "chain", {"energy_offsets", "reference_site", "couplings"});
    if (!ch.contains("energy_offsets")) throw ValidationError("chain.energy_offsets: required");
    if (!ch.contains("couplings")) throw ValidationError("chain.couplings: required");
    c.chain_spec.energy_offsets = number_list(ch.at("energy_offsets"), "chain.energy_offsets");
    c.chain_spec.couplings = matrix(ch.at("couplings"), "chain.couplings");
    if (ch.contains("reference_site")) {
        c.chain_spec.reference_site = site_number(ch.at("reference_site"), "chain.reference_site");
    }

    if (j.contains("mode")) {
        const json& m = j.at("mode");
        reject_unknown(m, "mode", {"frequency", "site_couplings"});
        if (!m.contains("frequency") || !m.contains("site_couplings")) {
            throw ValidationError("mode: frequency and site_couplings are required");
        }
        c.mode = SharedMode{number(m.at("frequency"), "mode.frequency"),
                            number_list(m.at("site_couplings"), "mode.site_couplings")};
    }
    if (j.contains("bath")) {
        const json& b = j.at("bath");
        reject_unknown(b, "bath", {"reorganization", "relaxation", "scaling", "thermal_energy"});
        BathSpec bath;
        for (const char* k : {"reorganization", "relaxation", "thermal_energy"}) {
            if (!b.contains(k)) throw ValidationError(std::string("bath.") + k + ": required");
        }
        bath.reorganization = number_list(b.at("reorganization"), "bath.reorganization");
        bath.relaxation = number_list(b.at("relaxation"), "bath.relaxation");
        bath.thermal_energy = number(b.at("thermal_energy"), "bath.thermal_energy");
        if (b.contains("scaling")) {
            bath.scaling = number_list(b.at("scaling"), "bath.scaling");
        } else {
            bath.scaling.assign(bath.reorganization.size(), 0.0);
            c.defaults_applied.emplace_back("bath.scaling");
        }
        c.bath = std::move(bath);
    }

    fill(j, "", "initial_site",
         [&](const json& v, const std::string& f) { c.initial_site = site_number(v, f); });

    auto section = [&](const char* key, std::initializer_list<const char*> allowed) -> json {
        if (!j.contains(key)) return json::object();
        reject_unknown(j.at(key), key, allowed);
        return j.at(key);
    };
    const json time = section("time", {"tmax", "dt_out"});
    fill(time, "time", "tmax", [&](const json& v, const std::string& f) { c.tmax = number(v, f); });
    fill(time, "time", "dt_out", [&](const json& v, const std::string& f) { c.dt_out = number(v, f); });

    const json num = section("numerics", {"fock_max", "fock_escalation_cap", "fock_auto_converge",
                                          "closed_tolerance", "heom_cutoff", "heom_rtol", "heom_atol",
                                          "heom_fixed_step"});
    fill(num, "numerics", "fock_max",
         [&](const json& v, const std::string& f) { c.numerics.fock_max = static_cast<int>(integer(v, f)); });
    fill(num, "numerics", "fock_escalation_cap", [&](const json& v, const std::string& f) {
        c.numerics.fock_escalation_cap = static_cast<int>(integer(v, f));
    });
    fill(num, "numerics", "fock_auto_converge", [&](const json& v, const std::string& f) {
        if (!v.is_boolean()) throw ValidationError(f + ": expected true or false");
        c.numerics.fock_auto_converge = v.get<bool>();
    });
    fill(num, "numerics", "closed_tolerance",
         [&](const json& v, const std::string& f) { c.numerics.closed_tolerance = number(v, f); });
    fill(num, "numerics", "heom_cutoff",
         [&](const json& v, const std::string& f) { c.numerics.heom_cutoff = count(v, f); });
    fill(num, "numerics", "heom_rtol",
         [&](const json& v, const std::string& f) { c.numerics.heom_rtol = number(v, f); });
    fill(num, "numerics", "heom_atol",
         [&](const json& v, const std::string& f) { c.numerics.heom_atol = number(v, f); });
    fill(num, "numerics", "heom_fixed_step", [&](const json& v, const std::string& f) {
        if (!v.is_null()) c.numerics.heom_fixed_step = number(v, f);
    });

    const json wig = section("wigner", {"frames", "extent", "points"});
    fill(wig, "wigner", "frames", [&](const json& v, const std::string& f) { c.wigner.frames = count(v, f); });
    fill(wig, "wigner", "extent", [&](const json& v, const std::string& f) { c.wigner.extent = number(v, f); });
    fill(wig, "wigner", "points", [&](const json& v, const std::string& f) { c.wigner.points = count(v, f); });

    validate_config(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = locate(text, e.byte);
        std::ostringstream msg;
        msg << path.string() << ":" << line << ":" << col << ": JSON parse error: " << e.what();
        throw ValidationError(msg.str());
    }
    try {
        return config_from_json(j);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json(config).dump(2) << '\n';
}

}  // namespace dret
