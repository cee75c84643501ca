#pragma once

#include "hjdisc/torus.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hjdisc {

/// Uniform periodic grid on the circle [0, 2*pi). `dim` is reserved for
/// future d-dimensional tori; only dim == 1 is supported in v1.
struct PeriodicGrid {
    int n = 0;
    int dim = 1;

    explicit PeriodicGrid(int node_count);
    PeriodicGrid() = default;

    double dx() const { return kTwoPi / n; }
    double node(int i) const { return i * dx(); }
    std::vector<double> nodes() const;

    bool operator==(const PeriodicGrid& other) const { return n == other.n && dim == other.dim; }
    bool operator!=(const PeriodicGrid& other) const { return !(*this == other); }
};

/// Real-valued function sampled on a periodic grid.
struct GridFn {
    PeriodicGrid grid;
    std::vector<double> values;

    GridFn() = default;
    GridFn(PeriodicGrid g, std::vector<double> v);

    int size() const { return grid.n; }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

enum class InterpOrder { Linear, Cubic };

GridFn constant_fn(const PeriodicGrid& grid, double value);
GridFn sample_fn(const PeriodicGrid& grid, const std::function<double(double)>& f);

/// Periodic interpolation; exact at nodes. Linear is the monotone choice
/// used inside the semigroup; cubic (Catmull-Rom) is for post-processing.
double interpolate(const GridFn& f, double x, InterpOrder order = InterpOrder::Linear);

/// Centered periodic differences (f_{i+1} - f_{i-1}) / (2 dx).
GridFn gradient(const GridFn& f);

/// Sup-norm distance; throws on grid mismatch.
double sup_distance(const GridFn& f, const GridFn& g);

double min_value(const GridFn& f);
double max_value(const GridFn& f);

GridFn operator+(const GridFn& f, double shift);
GridFn operator-(const GridFn& f);

} // namespace hjdisc
