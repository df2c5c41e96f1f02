#include "popdyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "popdyn/version.hpp"

namespace popdyn::io {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

void write_header(std::ostream& os, const std::string& scenario_echo) {
    for (const auto& line : header_lines(scenario_echo)) os << line << "\n";
}

struct Rgb {
    unsigned char r, g, b;
};

Rgb color_for(int label, const AttractorRegistry& reg) {
    if (label < 0) return {255, 255, 255};  // undetermined: white
    static const Rgb extras[] = {{0, 200, 0}, {255, 0, 255}, {255, 255, 0}, {255, 128, 0}};
    if (label >= static_cast<int>(reg.entries.size())) return {128, 128, 128};
    switch (reg.entries[label].kind) {
        case AttractorKind::BoundaryE0: return {255, 0, 0};
        case AttractorKind::BoundaryExK: return {0, 255, 255};
        case AttractorKind::BoundaryEyK: return {0, 0, 0};
        case AttractorKind::Interior: return {0, 0, 255};
        default: return extras[label % 4];
    }
}

}  // namespace

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> header_lines(const std::string& scenario_echo) {
    std::vector<std::string> out;
    out.push_back(std::string("# popdyn ") + kVersion);
    std::istringstream in(scenario_echo);
    std::string line;
    while (std::getline(in, line)) out.push_back("# " + line);
    return out;
}

void write_scalar_equilibria_csv(const std::string& path, const ScalarEquilibria& eq,
                                 const std::string& scenario_echo) {
    auto f = open_out(path);
    write_header(f, scenario_echo);
    f << "value,role,stability,derivative\n";
    for (const auto& r : eq.roots) {
        f << format17(r.value) << ',' << to_string(r.role) << ',' << to_string(r.stability) << ','
          << format17(r.deriv) << "\n";
    }
}

void write_planar_equilibria_csv(const std::string& path, const PlanarEquilibria& eq,
                                 const std::string& scenario_echo) {
    auto f = open_out(path);
    write_header(f, scenario_echo);
    f << "x,y,role,lambda1,lambda2,class\n";
    for (const auto& b : eq.boundary) {
        const char* cls = to_string(b.stability);
        f << format17(b.point.x) << ',' << format17(b.point.y) << ',' << to_string(b.role) << ','
          << format17(b.eigenvalues[0].real()) << ',' << format17(b.eigenvalues[1].real()) << ','
          << cls << "\n";
    }
    for (const auto& p : eq.interior) {
        f << format17(p.point.x) << ',' << format17(p.point.y) << ",interior,"
          << format17(p.eigenvalues[0].real()) << ',' << format17(p.eigenvalues[1].real()) << ','
          << to_string(p.cls) << "\n";
    }
}

void write_nullclines_csv(const std::string& path, const NullclineAnalysis& nc,
                          const std::string& scenario_echo) {
    auto f = open_out(path);
    write_header(f, scenario_echo);
    f << "# x_c = " << format17(nc.x_c) << ", F1(x_c) = " << format17(nc.F1_at_xc)
      << ", y_c = " << format17(nc.y_c) << ", F2(y_c) = " << format17(nc.F2_at_yc)
      << ", predicted = " << to_string(nc.predicted) << "\n";
    f << "curve,x,y\n";
    for (const auto& p : nc.curve1) f << "F1," << format17(p.x) << ',' << format17(p.y) << "\n";
    for (const auto& p : nc.curve2) f << "F2," << format17(p.x) << ',' << format17(p.y) << "\n";
}

void write_scalar_trajectory_csv(const std::string& path, const Trajectory& tr,
                                 const std::string& scenario_echo) {
    auto f = open_out(path);
    write_header(f, scenario_echo);
    if (tr.diverged) f << "# truncated: overflow\n";
    f << "t,u\n";
    for (size_t t = 0; t < tr.values.size(); ++t) f << t << ',' << format17(tr.values[t]) << "\n";
}

void write_planar_trajectory_csv(const std::string& path, const std::vector<State>& tr,
                                 const std::string& scenario_echo) {
    auto f = open_out(path);
    write_header(f, scenario_echo);
    f << "t,x,y\n";
    for (size_t t = 0; t < tr.size(); ++t)
        f << t << ',' << format17(tr[t].x) << ',' << format17(tr[t].y) << "\n";
}

void write_raster_csv(const std::string& path, const BasinRaster& raster,
                      const std::string& scenario_echo) {
    auto f = open_out(path);
    write_header(f, scenario_echo);
    f << "# window = " << format17(raster.x_lo) << ',' << format17(raster.x_hi) << ','
      << format17(raster.y_lo) << ',' << format17(raster.y_hi) << " resolution = " << raster.nx
      << 'x' << raster.ny << " max_steps = " << raster.max_steps
      << " tol = " << format17(raster.tol) << "\n";
    f << "i,j,x,y,label\n";
    for (int i = 0; i < raster.nx; ++i) {
        for (int j = 0; j < raster.ny; ++j) {
            const State c = raster.cell_center(i, j);
            f << i << ',' << j << ',' << format17(c.x) << ',' << format17(c.y) << ','
              << raster.label(i, j) << "\n";
        }
    }
}

void write_raster_ppm(const std::string& path, const BasinRaster& raster,
                      const AttractorRegistry& reg, const std::string& scenario_echo,
                      bool binary) {
    auto f = open_out(path, binary);
    f << (binary ? "P6" : "P3") << "\n";
    write_header(f, scenario_echo);
    f << raster.nx << ' ' << raster.ny << "\n255\n";
    // image rows run top to bottom: j = ny-1 first, so the origin sits at the
    // bottom-left corner of the picture
    for (int j = raster.ny - 1; j >= 0; --j) {
        for (int i = 0; i < raster.nx; ++i) {
            const Rgb c = color_for(raster.label(i, j), reg);
            if (binary) {
                f.put(static_cast<char>(c.r));
                f.put(static_cast<char>(c.g));
                f.put(static_cast<char>(c.b));
            } else {
                f << int(c.r) << ' ' << int(c.g) << ' ' << int(c.b) << "\n";
            }
        }
    }
}

}  // namespace popdyn::io
