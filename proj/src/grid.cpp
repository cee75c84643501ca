#include "hjdisc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjdisc {

PeriodicGrid::PeriodicGrid(int node_count) : n(node_count) {
    if (node_count < 8) throw std::invalid_argument("PeriodicGrid: need at least 8 nodes");
}

std::vector<double> PeriodicGrid::nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = node(i);
    return xs;
}

GridFn::GridFn(PeriodicGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n)
        throw std::invalid_argument("GridFn: value count does not match grid");
    for (double x : values)
        if (!std::isfinite(x)) throw std::invalid_argument("GridFn: non-finite sample");
}

GridFn constant_fn(const PeriodicGrid& grid, double value) {
    return GridFn(grid, std::vector<double>(static_cast<std::size_t>(grid.n), value));
}

GridFn sample_fn(const PeriodicGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) v[static_cast<std::size_t>(i)] = f(grid.node(i));
    return GridFn(grid, std::move(v));
}

double interpolate(const GridFn& f, double x, InterpOrder order) {
    const int n = f.grid.n;
    const double t = wrap_angle(x) / f.grid.dx();
    int k = static_cast<int>(std::floor(t));
    double w = t - k;
    if (k >= n) { k -= n; }
    if (order == InterpOrder::Linear) {
        const double a = f[k];
        const double b = f[(k + 1) % n];
        return (1.0 - w) * a + w * b;
    }
    // periodic Catmull-Rom
    const double pm1 = f[(k - 1 + n) % n];
    const double p0 = f[k];
    const double p1 = f[(k + 1) % n];
    const double p2 = f[(k + 2) % n];
    const double w2 = w * w, w3 = w2 * w;
    return 0.5 * ((2.0 * p0) + (-pm1 + p1) * w + (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * w2 +
                  (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * w3);
}

GridFn gradient(const GridFn& f) {
    const int n = f.grid.n;
    const double inv2dx = 1.0 / (2.0 * f.grid.dx());
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = (f[(i + 1) % n] - f[(i - 1 + n) % n]) * inv2dx;
    return GridFn(f.grid, std::move(g));
}

double sup_distance(const GridFn& f, const GridFn& g) {
    if (f.grid != g.grid) throw std::invalid_argument("sup_distance: grid mismatch");
    double d = 0.0;
    for (int i = 0; i < f.grid.n; ++i) d = std::max(d, std::fabs(f[i] - g[i]));
    return d;
}

double min_value(const GridFn& f) { return *std::min_element(f.values.begin(), f.values.end()); }
double max_value(const GridFn& f) { return *std::max_element(f.values.begin(), f.values.end()); }

GridFn operator+(const GridFn& f, double shift) {
    GridFn out = f;
    for (double& v : out.values) v += shift;
    return out;
}

GridFn operator-(const GridFn& f) {
    GridFn out = f;
    for (double& v : out.values) v = -v;
    return out;
}

} // namespace hjdisc
