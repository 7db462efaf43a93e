// CSV/JSON writers

#include "dret/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dret::io {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<std::string> site_header(const char* prefix, std::size_t sites) {
    std::vector<std::string> h{"t"};
    for (std::size_t k = 0; k < sites; ++k) h.push_back(prefix + std::to_string(k + 1));
    return h;
}

}  // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_table(const fs::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::logic_error("write_table: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string wigner_file_name(std::size_t frame) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "wigner_%04zu.csv", frame);
    return buf;
}

void write_wigner_frame(const fs::path& path, const WignerField& field) {
    auto out = open_out(path);
    out << "Q,P,W\n";
    for (std::size_t i = 0; i < field.grid.q_points; ++i) {
        const std::string q = format_number(field.grid.q_at(i));
        for (std::size_t j = 0; j < field.grid.p_points; ++j) {
            out << q << ',' << format_number(field.grid.p_at(j)) << ','
                << format_number(field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> write_closed_outputs(const fs::path& dir, const TrajectoryResult& r) {
    const std::size_t sites = r.populations.empty() ? 0 : r.populations.front().size();
    std::vector<std::vector<double>> pop, obs;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        std::vector<double> row{r.times[i]};
        row.insert(row.end(), r.populations[i].begin(), r.populations[i].end());
        pop.push_back(std::move(row));
        obs.push_back({r.times[i], r.rms_displacement[i], r.energy[i], r.norm[i]});
    }
    write_table(dir / "populations.csv", site_header("P_", sites), pop);
    write_table(dir / "observables.csv", {"t", "delta", "energy", "norm"}, obs);
    std::vector<std::string> files{"populations.csv", "observables.csv"};
    for (std::size_t f = 0; f < r.wigner_frames.size(); ++f) {
        const auto name = wigner_file_name(f);
        write_wigner_frame(dir / name, r.wigner_frames[f].field);
        files.push_back(name);
    }
    return files;
}

std::vector<std::string> write_heom_outputs(const fs::path& dir, const heom::HeomResult& r) {
    const std::size_t sites = r.populations.empty() ? 0 : r.populations.front().size();
    std::vector<std::vector<double>> pop, obs, coh;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        std::vector<double> row{r.times[i]};
        row.insert(row.end(), r.populations[i].begin(), r.populations[i].end());
        pop.push_back(std::move(row));
        obs.push_back({r.times[i], r.rms_displacement[i], r.trace[i]});
        std::vector<double> c{r.times[i]};
        c.insert(c.end(), r.coherences[i].begin(), r.coherences[i].end());
        coh.push_back(std::move(c));
    }
    std::vector<std::string> coh_header{"t"};
    for (std::size_t j = 0; j < sites; ++j) {
        for (std::size_t k = j + 1; k < sites; ++k) {
            coh_header.push_back("abs_rho_" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
        }
    }
    write_table(dir / "populations.csv", site_header("P_", sites), pop);
    write_table(dir / "observables.csv", {"t", "delta", "trace"}, obs);
    write_table(dir / "coherences.csv", coh_header, coh);
    return {"populations.csv", "observables.csv", "coherences.csv"};
}

std::vector<std::string> write_gnuplot_scripts(const fs::path& dir, std::size_t sites, bool heom,
                                               std::size_t wigner_frames) {
    std::vector<std::string> files;
    {
        auto out = open_out(dir / "populations.gp");
        out << "set datafile separator ','\nset key outside\nset xlabel 't J'\nset ylabel 'P_k'\n"
            << "set terminal pngcairo size 900,600\nset output 'populations.png'\n"
            << "plot for [k=2:" << sites + 1
            << "] 'populations.csv' using 1:k with lines title columnhead(k)\n";
        files.emplace_back("populations.gp");
    }
    {
        auto out = open_out(dir / "observables.gp");
        out << "set datafile separator ','\nset xlabel 't J'\nset ylabel 'Delta'\n"
            << "set terminal pngcairo size 900,600\nset output 'delta.png'\n"
            << "plot 'observables.csv' using 1:2 with lines title 'Delta'\n";
        files.emplace_back("observables.gp");
    }
    if (heom && sites > 1) {
        auto out = open_out(dir / "coherences.gp");
        const std::size_t pairs = sites * (sites - 1) / 2;
        out << "set datafile separator ','\nset key outside\nset xlabel 't J'\nset ylabel '|rho_jk|'\n"
            << "set terminal pngcairo size 900,600\nset output 'coherences.png'\n"
            << "plot for [k=2:" << pairs + 1
            << "] 'coherences.csv' using 1:k with lines title columnhead(k)\n";
        files.emplace_back("coherences.gp");
    }
    if (wigner_frames > 0) {
        auto out = open_out(dir / "wigner.gp");
        out << "# renders every wigner_NNNN.csv to wigner_NNNN.png\n"
            << "set datafile separator ','\nset view map\nset size ratio -1\n"
            << "set xlabel 'Q'\nset ylabel 'P'\nset palette defined (-1 'blue', 0 'white', 1 'red')\n"
            << "set terminal pngcairo size 700,600\n"
            << "do for [i=0:" << wigner_frames - 1 << "] {\n"
            << "  f = sprintf('wigner_%04d', i)\n"
            << "  set output f.'.png'\n"
            << "  splot f.'.csv' using 1:2:3 with image notitle\n"
            << "}\n";
        files.emplace_back("wigner.gp");
    }
    return files;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace dret::io
