#pragma once

#include "hjdisc/model.hpp"
#include "hjdisc/semigroup.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace hjdisc {

using ModelFamily = std::function<ContactModel(double)>;

enum class CriticalMethod { Bisection, NonNegFormula, ManeLimit };

std::string to_string(CriticalMethod m);

struct CriticalReport {
    double c0 = 0.0;
    bool minus_infinity = false;                 // empty discount zero set
    std::pair<double, double> bracket{0.0, 0.0};
    CriticalMethod method = CriticalMethod::Bisection;
    std::vector<std::pair<double, LongtimeClass>> classifications;
    std::vector<double> undetermined_probes;
    std::optional<double> cross_check;           // a-scan extrapolation
    double cross_check_gap = 0.0;
    bool success = false;
};

struct BisectionOptions {
    double tol_c = 0.02;
    int max_shifts = 8;    // +tol_c/10 retries on an Undetermined midpoint
};

/// Critical value by behavioral bisection on the classification boundary:
/// DivergedDown below c0, Converged above. Probes use the constant datum
/// above all subsolutions, so classify_longtime decides each side.
CriticalReport bisect_critical(const ModelFamily& family, std::pair<double, double> bracket,
                               const PeriodicGrid& grid, const SemigroupConfig& cfg,
                               const BisectionOptions& opt = {});

struct ManeResult {
    double value = 0.0;
    double fit_residual = 0.0;
    bool tail_warning = false;   // non-linear tail
};

/// Mane critical value c(h) as the negative long-time drift of the
/// undiscounted backward semigroup (lambda = 0, c = 0 in the operator),
/// fitted over the last half of the node-mean trace.
ManeResult mane_value(const HamiltonianSpec& h, const PeriodicGrid& grid,
                      const SemigroupConfig& cfg);

struct NonNegOptions {
    double zero_tol_closed = 1e-8;
    double zero_tol_tabulated = 1e-4;
    int max_cluster_nodes = 5;
    std::vector<double> scan_a{-1.0, -4.0, -16.0, -64.0};
};

/// Critical value of a non-negative discount factor: on a finite zero set,
/// c0 = max over zero clusters of -l(x*, 0); cross-checked (or replaced,
/// when the zero set is not isolated) by the Mane limit of c(h + a lambda)
/// as a -> -infinity. An empty zero set reports c0 = -infinity.
CriticalReport nonneg_critical(const ContactModel& m, const PeriodicGrid& grid,
                               const SemigroupConfig& cfg, const NonNegOptions& opt = {});

} // namespace hjdisc
