#include "pat/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace pat {

namespace {

void write_exact(std::ofstream& out, const void* data, size_t bytes) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    if (!out) throw std::runtime_error("io: short write");
}

void read_exact(std::ifstream& in, void* data, size_t bytes) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
    if (in.gcount() != static_cast<std::streamsize>(bytes)) throw std::runtime_error("io: short read");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open for reading: " + path);
    return in;
}

void write_pgm_bytes(const std::vector<double>& values, int width, int height, const std::string& path) {
    auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it;
    const double mx = *mx_it;
    const double span = mx > mn ? mx - mn : 1.0;
    std::ofstream out = open_out(path);
    out << "P5\n" << width << " " << height << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(width));
    for (int iy = 0; iy < height; ++iy) {
        for (int ix = 0; ix < width; ++ix) {
            const double v = values[static_cast<size_t>(iy) * width + ix];
            row[static_cast<size_t>(ix)] = static_cast<unsigned char>(std::lround(255.0 * (v - mn) / span));
        }
        write_exact(out, row.data(), row.size());
    }
}

}  // namespace

void write_field(const ScalarField& f, const std::string& path) {
    std::ofstream out = open_out(path);
    const uint32_t nx = static_cast<uint32_t>(f.grid.nx);
    const uint32_t ny = static_cast<uint32_t>(f.grid.ny);
    const float h = static_cast<float>(f.grid.h);
    write_exact(out, "PATF", 4);
    write_exact(out, &nx, 4);
    write_exact(out, &ny, 4);
    write_exact(out, &h, 4);
    write_exact(out, f.values.data(), sizeof(double) * f.values.size());
}

ScalarField read_field(const std::string& path) {
    std::ifstream in = open_in(path);
    char magic[4];
    read_exact(in, magic, 4);
    if (std::memcmp(magic, "PATF", 4) != 0) throw std::invalid_argument("read_field: bad magic in " + path);
    uint32_t nx = 0;
    uint32_t ny = 0;
    float h = 0.0f;
    read_exact(in, &nx, 4);
    read_exact(in, &ny, 4);
    read_exact(in, &h, 4);
    if (nx == 0 || ny == 0 || !(h > 0.0f)) throw std::invalid_argument("read_field: bad header in " + path);
    Grid2D g;
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(ny);
    g.h = static_cast<double>(h);
    g.extent = 0.5 * g.h * (g.nx - 1);
    g.x0 = -g.extent;
    g.y0 = -0.5 * g.h * (g.ny - 1);
    ScalarField f(g);
    read_exact(in, f.values.data(), sizeof(double) * f.values.size());
    return f;
}

void write_sinogram(const Sinogram& g, const std::string& path) {
    std::ofstream out = open_out(path);
    const uint32_t count = static_cast<uint32_t>(g.count);
    const uint32_t nt = static_cast<uint32_t>(g.nt);
    write_exact(out, "PATS", 4);
    write_exact(out, &count, 4);
    write_exact(out, &nt, 4);
    write_exact(out, &g.h_t, 8);
    write_exact(out, g.values.data(), sizeof(double) * g.values.size());
}

Sinogram read_sinogram(const std::string& path) {
    std::ifstream in = open_in(path);
    char magic[4];
    read_exact(in, magic, 4);
    if (std::memcmp(magic, "PATS", 4) != 0) throw std::invalid_argument("read_sinogram: bad magic in " + path);
    uint32_t count = 0;
    uint32_t nt = 0;
    double h_t = 0.0;
    read_exact(in, &count, 4);
    read_exact(in, &nt, 4);
    read_exact(in, &h_t, 8);
    if (count == 0 || nt == 0 || !(h_t > 0.0)) throw std::invalid_argument("read_sinogram: bad header in " + path);
    Sinogram g(static_cast<int>(count), static_cast<int>(nt), h_t);
    read_exact(in, g.values.data(), sizeof(double) * g.values.size());
    return g;
}

void write_pgm(const ScalarField& f, const std::string& path) {
    write_pgm_bytes(f.values, f.grid.nx, f.grid.ny, path);
}

void write_pgm(const Sinogram& g, const std::string& path) {
    write_pgm_bytes(g.values, g.nt, g.count, path);
}

void write_field_csv(const ScalarField& f, const std::string& path) {
    std::ofstream out = open_out(path);
    out.precision(17);
    for (int iy = 0; iy < f.grid.ny; ++iy) {
        for (int ix = 0; ix < f.grid.nx; ++ix) {
            out << f.at(ix, iy);
            out << (ix + 1 < f.grid.nx ? ',' : '\n');
        }
    }
    if (!out) throw std::runtime_error("io: short write: " + path);
}

void write_iteration_log_csv(const IterationLog& log, const std::string& path) {
    bool with_objective = false;
    for (const auto& e : log.entries) with_objective = with_objective || std::isfinite(e.objective);
    std::ofstream out = open_out(path);
    out.precision(17);
    out << "k,residual,rel_residual,rel_error,seconds";
    if (with_objective) out << ",objective";
    out << "\n";
    for (const auto& e : log.entries) {
        out << e.k << ',' << e.residual << ',' << e.rel_residual << ',';
        if (std::isfinite(e.rel_error)) out << e.rel_error;
        out << ',' << e.seconds;
        if (with_objective) out << ',' << e.objective;
        out << "\n";
    }
    if (!out) throw std::runtime_error("io: short write: " + path);
}

}  // namespace pat
