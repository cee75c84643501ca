#pragma once

#include "hjdisc/model.hpp"
#include "hjdisc/semigroup.hpp"

#include <vector>

namespace hjdisc {

/// Phase point (x, p, u) of the characteristic system (x wrapped mod 2*pi
/// on construction and in recorded orbits).
struct ContactState {
    double x = 0.0, p = 0.0, u = 0.0;
};

/// Right-hand side of the contact characteristic system
///   x' = h_p,  p' = -lambda'(x) u - h_x - lambda(x) p,
///   u' = p h_p - h(x,p) - lambda(x) u + c.
ContactState characteristic_field(const ContactModel& m, const ContactState& s);

struct OrbitRecord {
    std::vector<double> times;
    std::vector<ContactState> states;
    std::vector<double> lambda_avg;   // running (1/t) * integral of lambda(x(s))
    bool escaped = false;             // state norm exceeded 1e6; record truncated
};

/// Classical RK4 on the characteristic field; Backward integrates the
/// negated field. The lambda average is accumulated by the trapezoid rule.
OrbitRecord integrate(const ContactModel& m, const ContactState& s, double t_final, double dt,
                      Direction dir, int record_stride = 1);

struct FixedPointOptions {
    double tol = 1e-10;      // on the euclidean norm of the field
    int max_iters = 100;
    double fd_step = 1e-6;   // numerical Jacobian step
};

/// Newton iteration on the characteristic field with a truncated-SVD
/// least-squares step. The truncation keeps the iterate from sliding along
/// a fixed-point continuum (the critical-case degeneracy); when progress
/// stalls the full pseudo-inverse takes over to finish isolated but
/// degenerate roots. Throws if the residual tolerance is not met.
ContactState find_fixed_point(const ContactModel& m, const ContactState& seed,
                              const FixedPointOptions& opt = {});

struct MatherConfig {
    int seed_stride = 8;             // every 8th node seeds an orbit
    double orbit_T = 50.0;           // forward integration time
    double orbit_dt = 1e-3;
    double escape_calibration = 0.1; // orbit leaves the 1-graph beyond this
    double graph_tol = 0.1;          // fixed-point membership in the 1-graph
    double lambda_floor = -1e-4;     // Mather measures of u_- have avg(lambda) >= 0
    double kink_factor = 10.0;       // discard seeds with |d2 u| > factor * median
    FixedPointOptions newton;
};

struct SeedOutcome {
    ContactState seed;
    double average = 0.0;   // Birkhoff average of lambda at the final time
    bool escaped = false;
};

struct FixedPointInfo {
    ContactState state;
    double lambda = 0.0;
};

/// Sampled estimate of a(c) = inf over Mather measures of the lambda
/// integral: the minimum over non-escaped seed averages and the lambda
/// values of accepted fixed points.
struct MatherEstimate {
    double a_hat = 0.0;
    std::vector<SeedOutcome> per_seed;
    std::vector<FixedPointInfo> fixed_points;
};

MatherEstimate estimate_mather_average(const ContactModel& m, const StationarySolution& u_minus,
                                       const MatherConfig& cfg = {});

/// min over jets of lambda(x) + Lie-derivative term of G = ln(u - psi):
///   lambda(x) + (c - lambda psi - psi' h_p - [h - p h_p]) / (u - psi).
/// psi must be a strict subsolution at some level below c and the jets must
/// sit strictly above psi.
double lyapunov_margin(const ContactModel& m, const GridFn& psi,
                       const std::vector<ContactState>& jets);

/// max over recorded times of |u(t) - u_minus(x(t))|.
double calibration_error(const StationarySolution& u_minus, const OrbitRecord& orbit);

} // namespace hjdisc
