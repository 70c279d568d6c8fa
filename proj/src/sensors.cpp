#include "pat/sensors.hpp"

#include <iostream>
#include <stdexcept>

namespace pat {

SensorArray boundary_sensors(const Grid2D& grid, const SensorView& view) {
    const int off = omega_offset(grid);
    const int m = omega_samples(grid);
    const int lo = off;
    const int hi = off + m - 1;

    SensorArray s;
    s.h = grid.h;
    s.cells.reserve(static_cast<size_t>(4) * (m - 1));
    auto push = [&](int ix, int iy) {
        s.cells.push_back(grid.idx(ix, iy));
        s.positions.push_back({grid.x(ix), grid.y(iy)});
    };
    // Counterclockwise from (-1,-1); each side is half-open so corners are
    // counted once (a side owns the corner it starts from).
    for (int ix = lo; ix < hi; ++ix) push(ix, lo);   // bottom, owns (-1,-1)
    for (int iy = lo; iy < hi; ++iy) push(hi, iy);   // right, owns (1,-1)
    for (int ix = hi; ix > lo; --ix) push(ix, hi);   // top, owns (1,1)
    for (int iy = hi; iy > lo; --iy) push(lo, iy);   // left, owns (-1,1)

    s.chi.resize(s.cells.size(), 1.0);
    if (view.kind == SensorView::Kind::HalfPlane) {
        int active = 0;
        for (size_t i = 0; i < s.positions.size(); ++i) {
            s.chi[i] = s.positions[i][0] > view.threshold ? 1.0 : 0.0;
            active += s.chi[i] > 0.0 ? 1 : 0;
        }
        if (active == 0) {
            std::cerr << "boundary_sensors: warning: half-plane threshold " << view.threshold
                      << " leaves no active sensor\n";
        }
    }
    return s;
}

SensorView parse_sensor_view(const std::string& text) {
    if (text == "full") return SensorView::full();
    const std::string prefix = "half_plane:";
    if (text.rfind(prefix, 0) == 0) {
        size_t pos = 0;
        const double thr = std::stod(text.substr(prefix.size()), &pos);
        return SensorView::half_plane(thr);
    }
    throw std::invalid_argument("sensors must be 'full' or 'half_plane:THRESHOLD', got " + text);
}

}  // namespace pat
