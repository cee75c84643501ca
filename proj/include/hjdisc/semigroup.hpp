#pragma once

#include "hjdisc/grid.hpp"
#include "hjdisc/model.hpp"

#include <memory>
#include <optional>

namespace hjdisc {

struct SemigroupConfig {
    double dt = 2e-3;          // time step
    double v_max = 12.0;       // velocity window bound
    int n_v = 33;              // coarse velocity samples
    int refine_iters = 24;     // golden-section refinement count
    double t_max = 10.0;       // horizon
    double tol = 1e-6;         // stationarity tolerance (per unit time)
    double M_div = 25.0;       // divergence threshold
    int record_stride = 1;     // trace recording stride

    void validate() const;
};

enum class Direction { Backward, Forward };

/// Time series of sup-norm distances produced by semigroup evolution.
struct EvolutionTrace {
    std::vector<double> times;
    std::vector<double> dist_to_ref;   // empty when no reference was given
    std::vector<double> min_val;
    std::vector<double> max_val;
    bool truncated = false;            // a step was flagged non-finite
    double boundary_fraction = 0.0;    // worst per-step share of nodes whose
                                       // minimizer hit +/- v_max
    bool window_warning = false;       // boundary_fraction above 1%
};

struct StationarySolution {
    GridFn u;
    double c = 0.0;
    Direction direction = Direction::Backward;
    double residual = 0.0;     // sup of one-step change per unit time
    long iterations = 0;
};

struct StepStats {
    int boundary_hits = 0;     // minimizer at +/- v_max
};

/// One semi-Lagrangian step of the backward solution semigroup:
///   (T_dt phi)(x_i) ~= min_v { e^{-lambda(x_i) dt} phi(x_i - v dt)
///                             + dt (l(x_i, v) + c) },
/// coarse n_v-grid search followed by golden-section refinement.
/// Results exceeding +/- 10 M_div come back non-finite markers via the
/// caller (evolve flags them); the step itself never throws on magnitude.
GridFn step_backward(const ContactModel& m, const GridFn& phi, const SemigroupConfig& cfg,
                     StepStats* stats = nullptr);

/// Reusable backward stepper bound to a (model, grid, config) triple; the
/// per-node cost tables are built once. The model must outlive the Evolver.
class Evolver {
public:
    Evolver(const ContactModel& m, const PeriodicGrid& grid, const SemigroupConfig& cfg);
    ~Evolver();
    Evolver(const Evolver&) = delete;
    Evolver& operator=(const Evolver&) = delete;

    void step(const GridFn& in, GridFn& out, StepStats* stats = nullptr) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct EvolveResult {
    GridFn u;
    EvolutionTrace trace;
};

/// Evolve phi for t_final (rounded to whole steps). The forward semigroup
/// is computed through the duality T^+ phi = -T̆^-(-phi) on the reflected
/// model, bit-exactly.
EvolveResult evolve(const ContactModel& m, const GridFn& phi, double t_final, Direction dir,
                    const SemigroupConfig& cfg, const GridFn* reference = nullptr);

/// Stationary solution by long-time iteration from the Lemma-2.1-style
/// constant bound (backward) or its dual (forward). Throws when the
/// iteration diverges ("no stationary solution detected") or the horizon
/// expires before the stationarity tolerance is met.
StationarySolution solve_stationary(const ContactModel& m, Direction dir, const PeriodicGrid& grid,
                                    const SemigroupConfig& cfg);

/// max over nodes of lambda(x_i) phi_i + h(x_i, grad phi_i) - c;
/// <= 0 certifies a discrete subsolution.
double subsolution_residual(const ContactModel& m, const GridFn& phi);

/// Backward action function h^c_{x0,u0}(., t) by evolving the penalized
/// cone datum u0 + M_pen dist(x, x0).
GridFn action_function(const ContactModel& m, double x0, double u0, double t,
                       const PeriodicGrid& grid, const SemigroupConfig& cfg);

enum class LongtimeClass { Converged, DivergedDown, DivergedUp, Undetermined };

std::string to_string(LongtimeClass c);

struct LongtimeResult {
    LongtimeClass kind = LongtimeClass::Undetermined;
    std::optional<StationarySolution> solution;   // set when Converged
    double t_stop = 0.0;
    double last_residual = 0.0;
};

LongtimeResult classify_longtime(const ContactModel& m, const GridFn& phi,
                                 const SemigroupConfig& cfg);

} // namespace hjdisc
