// CSV/JSON writers for run outputs
//
// CSV files are comma-separated with a header row and 17 significant digits,
// time in units of 1/J_ref. Site columns are 1-based (P_1, P_2, ...).

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dret/closed.hpp"
#include "dret/heom.hpp"

namespace dret::io {

// Shortest text that always reads back to the same double ("%.17g").
std::string format_number(double x);

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

// populations.csv, observables.csv and wigner_NNNN.csv. Returns written file names.
std::vector<std::string> write_closed_outputs(const std::filesystem::path& dir,
                                              const TrajectoryResult& result);

// populations.csv, observables.csv and coherences.csv.
std::vector<std::string> write_heom_outputs(const std::filesystem::path& dir,
                                            const heom::HeomResult& result);

// Long format, one row per grid point: Q,P,W.
void write_wigner_frame(const std::filesystem::path& path, const WignerField& field);

// Gnuplot scripts that read the CSV files written above.
std::vector<std::string> write_gnuplot_scripts(const std::filesystem::path& dir, std::size_t sites,
                                               bool heom, std::size_t wigner_frames);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

std::string wigner_file_name(std::size_t frame);

}  // namespace dret::io
