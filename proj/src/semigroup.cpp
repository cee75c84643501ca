#include "hjdisc/semigroup.hpp"

#include "hjdisc/threads.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace hjdisc {

void SemigroupConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SemigroupConfig: dt must be positive");
    if (!(v_max > 0.0)) throw std::invalid_argument("SemigroupConfig: v_max must be positive");
    if (n_v < 9) throw std::invalid_argument("SemigroupConfig: n_v must be >= 9");
    if (!(M_div > 0.0)) throw std::invalid_argument("SemigroupConfig: M_div must be positive");
    if (record_stride < 1) throw std::invalid_argument("SemigroupConfig: record_stride must be >= 1");
}

std::string to_string(LongtimeClass c) {
    switch (c) {
        case LongtimeClass::Converged: return "converged";
        case LongtimeClass::DivergedDown: return "diverged_down";
        case LongtimeClass::DivergedUp: return "diverged_up";
        case LongtimeClass::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

// Per-model, per-grid tables reused across the many steps of an evolution.
// For the closed-form kinds the Lagrangian splits as kinetic(v) + l(x, 0),
// which keeps all trigonometry out of the refinement loop.
struct StepWorkspace {
    std::vector<double> x;        // nodes
    std::vector<double> disc;     // e^{-lambda(x_i) dt}
    std::vector<double> lcost;    // dt * (l(x_i, v_j) + c), layout [j][i]
    std::vector<double> xcost;    // dt * (l(x_i, 0) + c) when separable
    std::vector<double> vs;       // coarse velocities
    const ContactModel* model = nullptr;
    double dt = 0.0, v_max = 0.0, c = 0.0, kin_coeff = 0.0;
    int n = 0, n_v = 0;
    bool separable = false;

    void build(const ContactModel& m, const PeriodicGrid& grid, const SemigroupConfig& cfg) {
        model = &m;
        dt = cfg.dt;
        v_max = cfg.v_max;
        c = m.c;
        n = grid.n;
        n_v = cfg.n_v;
        x = grid.nodes();
        separable = m.h.kind() != HamiltonianKind::Tabulated;
        kin_coeff = m.h.kind() == HamiltonianKind::QuadraticP2 ? 0.25 : 0.5;
        disc.resize(static_cast<std::size_t>(n));
        xcost.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            disc[static_cast<std::size_t>(i)] = std::exp(-m.lambda(x[static_cast<std::size_t>(i)]) * dt);
            xcost[static_cast<std::size_t>(i)] = dt * (m.h.lagrangian(x[static_cast<std::size_t>(i)], 0.0) + c);
        }
        vs.resize(static_cast<std::size_t>(n_v));
        for (int j = 0; j < n_v; ++j)
            vs[static_cast<std::size_t>(j)] = -v_max + 2.0 * v_max * j / (n_v - 1);
        lcost.resize(static_cast<std::size_t>(n_v) * static_cast<std::size_t>(n));
        for (int j = 0; j < n_v; ++j)
            for (int i = 0; i < n; ++i)
                lcost[static_cast<std::size_t>(j) * n + i] =
                    separable ? xcost[static_cast<std::size_t>(i)] +
                                    dt * kin_coeff * vs[static_cast<std::size_t>(j)] * vs[static_cast<std::size_t>(j)]
                              : dt * (m.h.lagrangian(x[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]) + c);
    }
};

inline double obj_at(const StepWorkspace& ws, const GridFn& phi, int i, double v) {
    const double xi = ws.x[static_cast<std::size_t>(i)];
    const double base = ws.disc[static_cast<std::size_t>(i)] * interpolate(phi, xi - v * ws.dt);
    if (ws.separable) return base + ws.xcost[static_cast<std::size_t>(i)] + ws.dt * ws.kin_coeff * v * v;
    return base + ws.dt * (ws.model->h.lagrangian(xi, v) + ws.c);
}

void step_into(const StepWorkspace& ws, const GridFn& phi, int refine_iters, GridFn& out,
               StepStats* stats) {
    const int n = ws.n;
    const double dx = phi.grid.dx();
    static thread_local std::vector<double> best, bestv;
    best.assign(static_cast<std::size_t>(n), 1e300);
    bestv.assign(static_cast<std::size_t>(n), 0.0);

    // coarse scan: for a fixed v the foot point is the same shift for every
    // node, so the interpolation is one fused pass over the array
    for (int j = 0; j < ws.n_v; ++j) {
        const double v = ws.vs[static_cast<std::size_t>(j)];
        double s = v * ws.dt / dx;                    // fractional index shift
        double kf = std::floor(s);
        int k = static_cast<int>(kf);
        const double w = s - kf;
        k %= n;
        if (k < 0) k += n;
        const double* lrow = &ws.lcost[static_cast<std::size_t>(j) * n];
        // phi[(i - k) mod n] and phi[(i - k - 1) mod n]
        int ia = (0 - k % n + n) % n;
        int ib = (ia - 1 + n) % n;
        for (int i = 0; i < n; ++i) {
            const double lerp = (1.0 - w) * phi[ia] + w * phi[ib];
            const double val = ws.disc[static_cast<std::size_t>(i)] * lerp + lrow[i];
            if (val < best[static_cast<std::size_t>(i)]) {
                best[static_cast<std::size_t>(i)] = val;
                bestv[static_cast<std::size_t>(i)] = v;
            }
            ib = ia;
            ++ia;
            if (ia == n) ia = 0;
        }
    }

    // golden-section polish around the winning coarse sample
    const double dv = ws.vs[1] - ws.vs[0];
    const double gr = 0.6180339887498949;
    std::atomic<int> hits{0};
    auto refine_range = [&](std::size_t lo, std::size_t hi) {
        int local_hits = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            double a = std::max(bestv[i] - dv, -ws.v_max);
            double b = std::min(bestv[i] + dv, ws.v_max);
            double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
            double f1 = obj_at(ws, phi, static_cast<int>(i), c1);
            double f2 = obj_at(ws, phi, static_cast<int>(i), c2);
            for (int it = 0; it < refine_iters; ++it) {
                if (f1 < f2) { b = c2; c2 = c1; f2 = f1; c1 = b - gr * (b - a); f1 = obj_at(ws, phi, static_cast<int>(i), c1); }
                else { a = c1; c1 = c2; f1 = f2; c2 = a + gr * (b - a); f2 = obj_at(ws, phi, static_cast<int>(i), c2); }
            }
            const double mid = 0.5 * (a + b);
            const double fm = obj_at(ws, phi, static_cast<int>(i), mid);
            double val = best[i];
            double vwin = bestv[i];
            if (f1 < val) { val = f1; vwin = c1; }
            if (f2 < val) { val = f2; vwin = c2; }
            if (fm < val) { val = fm; vwin = mid; }
            out.values[i] = val;
            if (std::fabs(vwin) >= ws.v_max - 1e-12) ++local_hits;
        }
        hits += local_hits;
    };
    if (worker_count() > 1 && n >= 128) {
        parallel_for(static_cast<std::size_t>(n), refine_range);
    } else {
        refine_range(0, static_cast<std::size_t>(n));
    }
    if (stats) stats->boundary_hits = hits.load();
}

GridFn negate(const GridFn& f) { return -f; }

} // namespace

GridFn step_backward(const ContactModel& m, const GridFn& phi, const SemigroupConfig& cfg,
                     StepStats* stats) {
    cfg.validate();
    StepWorkspace ws;
    ws.build(m, phi.grid, cfg);
    GridFn out = phi;
    step_into(ws, phi, cfg.refine_iters, out, stats);
    return out;
}

struct Evolver::Impl {
    StepWorkspace ws;
    int refine_iters = 0;
};

Evolver::Evolver(const ContactModel& m, const PeriodicGrid& grid, const SemigroupConfig& cfg)
    : impl_(std::make_unique<Impl>()) {
    cfg.validate();
    impl_->ws.build(m, grid, cfg);
    impl_->refine_iters = cfg.refine_iters;
}

Evolver::~Evolver() = default;

void Evolver::step(const GridFn& in, GridFn& out, StepStats* stats) const {
    if (out.grid != in.grid) out = in;
    step_into(impl_->ws, in, impl_->refine_iters, out, stats);
}

EvolveResult evolve(const ContactModel& m, const GridFn& phi, double t_final, Direction dir,
                    const SemigroupConfig& cfg, const GridFn* reference) {
    cfg.validate();
    if (!(t_final > 0.0)) throw std::invalid_argument("evolve: t_final must be positive");

    if (dir == Direction::Forward) {
        // T^{c,+}_t phi = -T̆^{c,-}_t(-phi) by definition
        const ContactModel rm = reflect(m);
        GridFn nphi = negate(phi);
        std::optional<GridFn> nref;
        if (reference) nref = negate(*reference);
        EvolveResult r = evolve(rm, nphi, t_final, Direction::Backward, cfg,
                                nref ? &*nref : nullptr);
        r.u = negate(r.u);
        for (std::size_t k = 0; k < r.trace.times.size(); ++k) {
            const double lo = r.trace.min_val[k], hi = r.trace.max_val[k];
            r.trace.min_val[k] = -hi;
            r.trace.max_val[k] = -lo;
        }
        return r;
    }

    StepWorkspace ws;
    ws.build(m, phi.grid, cfg);
    const long steps = std::lround(t_final / cfg.dt);
    EvolveResult res;
    res.u = phi;
    GridFn next = phi;
    StepStats stats;
    const double blow = 10.0 * cfg.M_div;
    for (long k = 1; k <= steps; ++k) {
        step_into(ws, res.u, cfg.refine_iters, next, &stats);
        std::swap(res.u, next);
        res.trace.boundary_fraction =
            std::max(res.trace.boundary_fraction, static_cast<double>(stats.boundary_hits) / phi.grid.n);
        const double lo = min_value(res.u), hi = max_value(res.u);
        const bool bad = !std::isfinite(lo) || !std::isfinite(hi) || lo < -blow || hi > blow;
        if (k % cfg.record_stride == 0 || k == steps || bad) {
            res.trace.times.push_back(k * cfg.dt);
            res.trace.min_val.push_back(lo);
            res.trace.max_val.push_back(hi);
            if (reference) res.trace.dist_to_ref.push_back(sup_distance(res.u, *reference));
        }
        if (bad) {
            res.trace.truncated = true;
            break;
        }
    }
    res.trace.window_warning = res.trace.boundary_fraction > 0.01;
    return res;
}

namespace {

StationarySolution solve_backward(const ContactModel& m, const PeriodicGrid& grid,
                                  const SemigroupConfig& cfg) {
    const ModelConstants mc = model_constants(m);
    if (!(mc.lambda_plus > 0.0))
        throw std::runtime_error("solve_stationary: backward solve needs max lambda > 0");
    // constant datum above every subsolution (anchor value (c - e0)/lambda(x1))
    const double phi0 = (m.c - mc.e0) / mc.lambda_plus + 1.0 + mc.E0;
    GridFn u = constant_fn(grid, phi0);

    StepWorkspace ws;
    ws.build(m, grid, cfg);
    GridFn next = u;
    const long steps = std::lround(cfg.t_max / cfg.dt);
    double res = 0.0;
    for (long k = 1; k <= steps; ++k) {
        step_into(ws, u, cfg.refine_iters, next, nullptr);
        res = sup_distance(next, u) / cfg.dt;
        std::swap(u, next);
        if (res < cfg.tol)
            return StationarySolution{u, m.c, Direction::Backward, res, k};
        const double lo = min_value(u), hi = max_value(u);
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo < -cfg.M_div || hi > cfg.M_div)
            throw std::runtime_error("solve_stationary: no stationary solution detected (divergence)");
    }
    throw std::runtime_error("solve_stationary: stationarity not reached before t_max");
}

} // namespace

StationarySolution solve_stationary(const ContactModel& m, Direction dir, const PeriodicGrid& grid,
                                    const SemigroupConfig& cfg) {
    cfg.validate();
    if (dir == Direction::Backward) return solve_backward(m, grid, cfg);
    // dual construction: v_+ = -u_-(reflected model), iterated from a low constant
    StationarySolution dual = solve_backward(reflect(m), grid, cfg);
    return StationarySolution{negate(dual.u), m.c, Direction::Forward, dual.residual,
                              dual.iterations};
}

double subsolution_residual(const ContactModel& m, const GridFn& phi) {
    const GridFn dphi = gradient(phi);
    double worst = -1e300;
    for (int i = 0; i < phi.grid.n; ++i) {
        const double x = phi.grid.node(i);
        worst = std::max(worst, m.lambda(x) * phi[i] + m.h.h(x, dphi[i]) - m.c);
    }
    return worst;
}

GridFn action_function(const ContactModel& m, double x0, double u0, double t,
                       const PeriodicGrid& grid, const SemigroupConfig& cfg) {
    cfg.validate();
    if (t < cfg.dt) throw std::invalid_argument("action_function: t must be >= dt");
    // cone slope above the Lipschitz bound of the action function
    double lip_est = 0.0;
    const double hfd = 1e-4;
    for (int i = 0; i < 32; ++i) {
        const double x = i * kTwoPi / 32;
        lip_est = std::max(lip_est, std::fabs(m.h.lagrangian(x, cfg.v_max) -
                                              m.h.lagrangian(x, cfg.v_max - hfd)) / hfd);
        lip_est = std::max(lip_est, std::fabs(m.h.lagrangian(x, -cfg.v_max + hfd) -
                                              m.h.lagrangian(x, -cfg.v_max)) / hfd);
    }
    const double m_pen = 100.0 * (1.0 + lip_est);
    GridFn datum = sample_fn(grid, [&](double x) { return u0 + m_pen * dist_torus(x, x0); });
    // the cone datum legitimately exceeds the divergence guard; scale it up
    SemigroupConfig acfg = cfg;
    acfg.M_div = std::max(cfg.M_div, 2.0 * (std::fabs(u0) + m_pen * kTwoPi));
    EvolveResult r = evolve(m, datum, t, Direction::Backward, acfg);
    if (r.trace.truncated) throw std::runtime_error("action_function: evolution diverged");
    return r.u;
}

LongtimeResult classify_longtime(const ContactModel& m, const GridFn& phi,
                                 const SemigroupConfig& cfg) {
    cfg.validate();
    StepWorkspace ws;
    ws.build(m, phi.grid, cfg);
    GridFn u = phi;
    GridFn next = phi;
    const long steps = std::lround(cfg.t_max / cfg.dt);
    LongtimeResult out;
    for (long k = 1; k <= steps; ++k) {
        step_into(ws, u, cfg.refine_iters, next, nullptr);
        const double res = sup_distance(next, u) / cfg.dt;
        std::swap(u, next);
        out.t_stop = k * cfg.dt;
        out.last_residual = res;
        const double lo = min_value(u), hi = max_value(u);
        if (!std::isfinite(lo) || lo < -cfg.M_div) {
            out.kind = LongtimeClass::DivergedDown;
            return out;
        }
        if (!std::isfinite(hi) || hi > cfg.M_div) {
            out.kind = LongtimeClass::DivergedUp;
            return out;
        }
        if (res < cfg.tol) {
            out.kind = LongtimeClass::Converged;
            out.solution = StationarySolution{u, m.c, Direction::Backward, res, k};
            return out;
        }
    }
    out.kind = LongtimeClass::Undetermined;
    return out;
}

} // namespace hjdisc
