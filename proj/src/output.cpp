#include "adjoint_fp/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/grid_io.hpp"

namespace adjoint_fp {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open(const fs::path& file) {
    if (file.has_parent_path()) ensure_dir(file.parent_path());
    std::ofstream out(file);
    if (!out) throw IoError("cannot write '" + file.string() + "'");
    return out;
}

void close(std::ofstream& out, const fs::path& file) {
    out.close();
    if (!out) throw IoError("failed writing '" + file.string() + "'");
}

std::string snapshot_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%04zu", k);
    return buf;
}

}  // namespace

void write_text(const std::string& text, const fs::path& file) {
    auto out = open(file);
    out << text;
    close(out, file);
}

void write_grid_function(const GridFunction& u, const fs::path& file) {
    auto out = open(file);
    write_csv(out, u);
    close(out, file);
}

void emit_plotdata(const Trajectory& traj, const fs::path& out_dir) {
    if (traj.snapshots.empty()) throw std::invalid_argument("emit_plotdata: empty trajectory");
    ensure_dir(out_dir);
    std::ostringstream manifest, diag, steps;
    diag << "time,mass,min,max\n";
    steps << "time,dt,mass,min,max\n";
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const State& s = traj.snapshots[k];
        manifest << format_double(traj.times[k]);
        for (std::size_t f = 0; f < s.size(); ++f) {
            const std::string& field = traj.field_names[f];
            const fs::path rel = fs::path(field) / (snapshot_name(k) + ".csv");
            std::ostringstream meta;
            meta << "# field=" << field << " time=" << format_double(traj.times[k]);
            {
                const fs::path file = out_dir / rel;
                auto out = open(file);
                write_csv(out, s[f], meta.str());
                close(out, file);
            }
            if (s[f].grid().dim() == 2) {
                const fs::path file = out_dir / field / (snapshot_name(k) + ".mat");
                auto out = open(file);
                write_matrix(out, s[f]);
                close(out, file);
            }
            manifest << " " << rel.generic_string();
        }
        manifest << "\n";
        const auto& d = traj.diagnostics[k];
        diag << format_double(traj.times[k]) << "," << format_double(d.mass) << "," << format_double(d.min) << ","
             << format_double(d.max) << "\n";
    }
    for (const auto& st : traj.steps) {
        steps << format_double(st.time) << "," << format_double(st.dt) << "," << format_double(st.density.mass) << ","
              << format_double(st.density.min) << "," << format_double(st.density.max) << "\n";
    }
    write_text(manifest.str(), out_dir / "manifest.txt");
    write_text(diag.str(), out_dir / "diagnostics.csv");
    write_text(steps.str(), out_dir / "steps.csv");
}

void write_eikonal_log(const std::vector<EikonalLogEntry>& log, const fs::path& file) {
    std::ostringstream os;
    os << "step,iterations,residual\n";
    for (const auto& e : log) os << e.step << "," << e.iterations << "," << format_double(e.residual) << "\n";
    write_text(os.str(), file);
}

void write_empirical(const EmpiricalDensity& d, const fs::path& file) {
    auto out = open(file);
    std::ostringstream meta;
    meta << "# meta seed=" << d.seed << " particles=" << d.particles
         << " surviving_fraction=" << format_double(d.surviving_fraction);
    write_csv(out, d.density, meta.str());
    close(out, file);
}

}  // namespace adjoint_fp
