#include "pat/medium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pat {

namespace {

constexpr double kSourceBallRadius = 0.9;

double primitive_value(const PrimitiveSpec& p, double x, double y) {
    const double dx = x - p.cx;
    const double dy = y - p.cy;
    const double d2 = dx * dx + dy * dy;
    const double r2 = p.radius * p.radius;
    if (p.kind == PrimitiveSpec::Kind::Disk) {
        return d2 <= r2 ? p.amp : 0.0;
    }
    const double s = d2 / r2;
    if (s >= 1.0) return 0.0;
    return p.amp * std::exp(1.0 - 1.0 / (1.0 - s));
}

void add_primitive(ScalarField& f, const PrimitiveSpec& p) {
    const Grid2D& g = f.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double v = primitive_value(p, g.x(ix), y);
            if (v != 0.0) f.at(ix, iy) += v;
        }
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& text, size_t expected, const std::string& what) {
    const auto parts = split(text, ',');
    if (parts.size() != expected) {
        throw std::invalid_argument("expected " + std::to_string(expected) + " numbers in " + what);
    }
    std::vector<double> out;
    for (const auto& p : parts) {
        size_t pos = 0;
        out.push_back(std::stod(trim(p), &pos));
    }
    return out;
}

}  // namespace

ScalarField make_phantom(const Grid2D& grid, const std::vector<PrimitiveSpec>& prims) {
    for (const auto& p : prims) {
        if (!(p.radius > 0.0)) throw std::invalid_argument("make_phantom: primitive radius must be > 0");
        const double reach = std::hypot(p.cx, p.cy) + p.radius;
        if (reach >= kSourceBallRadius) {
            throw std::invalid_argument("make_phantom: primitive extends outside the 0.9-ball source region");
        }
    }
    ScalarField f(grid);
    for (const auto& p : prims) add_primitive(f, p);
    return f;
}

Medium make_medium(const Grid2D& grid, const CoefficientSpec& c_spec, const CoefficientSpec& a_spec) {
    Medium m;
    m.c = ScalarField(grid);
    m.a = ScalarField(grid);
    std::fill(m.c.values.begin(), m.c.values.end(), c_spec.base);
    std::fill(m.a.values.begin(), m.a.values.end(), a_spec.base);
    for (const auto& b : c_spec.bumps) {
        if (b.kind != PrimitiveSpec::Kind::Bump) {
            throw std::invalid_argument("make_medium: coefficients are constant-plus-smooth-bumps only");
        }
        add_primitive(m.c, b);
    }
    for (const auto& b : a_spec.bumps) {
        if (b.kind != PrimitiveSpec::Kind::Bump) {
            throw std::invalid_argument("make_medium: coefficients are constant-plus-smooth-bumps only");
        }
        add_primitive(m.a, b);
    }

    const double c_min = *std::min_element(m.c.values.begin(), m.c.values.end());
    const double a_min = *std::min_element(m.a.values.begin(), m.a.values.end());
    if (!(c_min > 0.0)) throw std::invalid_argument("make_medium: sound speed must stay positive");
    if (a_min < 0.0) throw std::invalid_argument("make_medium: damping must be nonnegative");

    m.c_plus = *std::max_element(m.c.values.begin(), m.c.values.end());
    m.c0 = m.c_plus;

    const size_t n = m.c.values.size();
    m.contrast.resize(n);
    m.damp_rate.resize(n);
    const double c0_sq = m.c0 * m.c0;
    for (size_t i = 0; i < n; ++i) {
        const double c_sq = m.c.values[i] * m.c.values[i];
        m.contrast[i] = c_sq / c0_sq - 1.0;
        m.damp_rate[i] = c0_sq * m.a.values[i];
    }
    return m;
}

std::vector<PrimitiveSpec> parse_primitives(const std::string& text) {
    std::vector<PrimitiveSpec> out;
    for (const auto& piece : split(text, ';')) {
        const std::string item = trim(piece);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("primitive needs kind:args, got " + item);
        const std::string kind = trim(item.substr(0, colon));
        const auto nums = parse_numbers(item.substr(colon + 1), 4, "primitive '" + kind + "'");
        PrimitiveSpec p;
        if (kind == "disk") {
            p.kind = PrimitiveSpec::Kind::Disk;
        } else if (kind == "bump") {
            p.kind = PrimitiveSpec::Kind::Bump;
        } else {
            throw std::invalid_argument("unknown primitive kind: " + kind);
        }
        p.cx = nums[0];
        p.cy = nums[1];
        p.radius = nums[2];
        p.amp = nums[3];
        out.push_back(p);
    }
    return out;
}

CoefficientSpec parse_coefficient(const std::string& text) {
    CoefficientSpec spec;
    bool saw_const = false;
    for (const auto& piece : split(text, ';')) {
        const std::string item = trim(piece);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("coefficient needs kind:args, got " + item);
        const std::string kind = trim(item.substr(0, colon));
        if (kind == "const") {
            const auto nums = parse_numbers(item.substr(colon + 1), 1, "const");
            spec.base = nums[0];
            saw_const = true;
        } else if (kind == "bump") {
            const auto nums = parse_numbers(item.substr(colon + 1), 4, "bump");
            PrimitiveSpec p;
            p.kind = PrimitiveSpec::Kind::Bump;
            p.cx = nums[0];
            p.cy = nums[1];
            p.radius = nums[2];
            p.amp = nums[3];
            if (!(p.radius > 0.0)) throw std::invalid_argument("coefficient bump radius must be > 0");
            spec.bumps.push_back(p);
        } else {
            throw std::invalid_argument("coefficient primitives are const: or bump:, got " + kind);
        }
    }
    if (!saw_const && spec.bumps.empty()) {
        throw std::invalid_argument("empty coefficient spec");
    }
    return spec;
}

}  // namespace pat
