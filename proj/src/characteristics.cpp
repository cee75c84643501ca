#include "hjdisc/characteristics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjdisc {

ContactState characteristic_field(const ContactModel& m, const ContactState& s) {
    const double hp = m.h.dh_dp(s.x, s.p);
    const double hx = m.h.dh_dx(s.x, s.p);
    const double lam = m.lambda(s.x);
    const double lamp = m.lambda.derivative(s.x);
    return ContactState{hp, -lamp * s.u - hx - lam * s.p,
                        s.p * hp - m.h.h(s.x, s.p) - lam * s.u + m.c};
}

namespace {

inline ContactState axpy(const ContactState& a, double t, const ContactState& b) {
    return ContactState{a.x + t * b.x, a.p + t * b.p, a.u + t * b.u};
}

inline double norm3(const ContactState& s) {
    return std::sqrt(s.x * s.x + s.p * s.p + s.u * s.u);
}

inline ContactState rk4_step(const ContactModel& m, const ContactState& s, double dt, double sign) {
    ContactState k1 = characteristic_field(m, s);
    ContactState k2 = characteristic_field(m, axpy(s, sign * 0.5 * dt, k1));
    ContactState k3 = characteristic_field(m, axpy(s, sign * 0.5 * dt, k2));
    ContactState k4 = characteristic_field(m, axpy(s, sign * dt, k3));
    return ContactState{s.x + sign * dt / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                        s.p + sign * dt / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p),
                        s.u + sign * dt / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u)};
}

} // namespace

OrbitRecord integrate(const ContactModel& m, const ContactState& s0, double t_final, double dt,
                      Direction dir, int record_stride) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    const double sign = dir == Direction::Forward ? 1.0 : -1.0;
    const long steps = std::lround(t_final / dt);
    OrbitRecord rec;
    rec.times.reserve(static_cast<std::size_t>(steps / record_stride + 2));
    ContactState s = s0;
    double lam_int = 0.0;
    double lam_prev = m.lambda(s.x);
    rec.times.push_back(0.0);
    rec.states.push_back(ContactState{wrap_angle(s.x), s.p, s.u});
    rec.lambda_avg.push_back(lam_prev);
    for (long k = 1; k <= steps; ++k) {
        s = rk4_step(m, s, dt, sign);
        const double lam_now = m.lambda(s.x);
        lam_int += 0.5 * dt * (lam_prev + lam_now);
        lam_prev = lam_now;
        const double t = k * dt;
        if (k % record_stride == 0 || k == steps) {
            rec.times.push_back(t);
            rec.states.push_back(ContactState{wrap_angle(s.x), s.p, s.u});
            rec.lambda_avg.push_back(lam_int / t);
        }
        if (norm3(s) > 1e6) {
            rec.escaped = true;
            if (rec.times.back() != t) {
                rec.times.push_back(t);
                rec.states.push_back(ContactState{wrap_angle(s.x), s.p, s.u});
                rec.lambda_avg.push_back(lam_int / t);
            }
            break;
        }
    }
    return rec;
}

ContactState find_fixed_point(const ContactModel& m, const ContactState& seed,
                              const FixedPointOptions& opt) {
    Eigen::Vector3d s(seed.x, seed.p, seed.u);
    auto field = [&](const Eigen::Vector3d& v) {
        ContactState f = characteristic_field(m, ContactState{v[0], v[1], v[2]});
        return Eigen::Vector3d(f.x, f.p, f.u);
    };
    double rcond = 1e-3;   // keeps the step off near-null directions
    int stall = 0;
    for (int it = 0; it < opt.max_iters; ++it) {
        const Eigen::Vector3d F = field(s);
        const double nF = F.norm();
        if (nF < opt.tol) return ContactState{wrap_angle(s[0]), s[1], s[2]};
        Eigen::Matrix3d J;
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d sp = s, sm = s;
            sp[j] += opt.fd_step;
            sm[j] -= opt.fd_step;
            J.col(j) = (field(sp) - field(sm)) / (2.0 * opt.fd_step);
        }
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::Vector3d sv = svd.singularValues();
        Eigen::Vector3d inv;
        for (int j = 0; j < 3; ++j) inv[j] = sv[j] > rcond * sv[0] ? 1.0 / sv[j] : 0.0;
        const Eigen::Vector3d delta =
            svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * (-F));
        double step = 1.0;
        double nN = nF;
        for (int ls = 0; ls < 40; ++ls) {
            nN = field(s + step * delta).norm();
            if (nN <= nF * (1.0 - 0.25 * step)) break;
            step *= 0.5;
        }
        s += step * delta;
        if (nN > 0.9 * nF) {
            if (++stall >= 5) rcond = 1e-14;   // full pseudo-inverse finish
        } else {
            stall = 0;
        }
    }
    const double res = field(s).norm();
    if (res < opt.tol) return ContactState{wrap_angle(s[0]), s[1], s[2]};
    throw std::runtime_error("find_fixed_point: no convergence in " +
                             std::to_string(opt.max_iters) +
                             " iterations (residual " + std::to_string(res) + ")");
}

namespace {

struct SeedRun {
    double average = 0.0;
    double max_calibration = 0.0;
    bool escaped = false;
};

// forward orbit with on-the-fly calibration check against the 1-graph
SeedRun run_seed(const ContactModel& m, const ContactState& s0, const GridFn& u_ref,
                 const MatherConfig& cfg) {
    SeedRun out;
    ContactState s = s0;
    const long steps = std::lround(cfg.orbit_T / cfg.orbit_dt);
    double lam_int = 0.0;
    double lam_prev = m.lambda(s.x);
    for (long k = 1; k <= steps; ++k) {
        s = rk4_step(m, s, cfg.orbit_dt, 1.0);
        const double lam_now = m.lambda(s.x);
        lam_int += 0.5 * cfg.orbit_dt * (lam_prev + lam_now);
        lam_prev = lam_now;
        if (norm3(s) > 1e6) {
            out.escaped = true;
            return out;
        }
        if (k % 16 == 0) {
            const double calib = std::fabs(s.u - interpolate(u_ref, s.x));
            out.max_calibration = std::max(out.max_calibration, calib);
            if (calib > cfg.escape_calibration) {
                out.escaped = true;
                return out;
            }
        }
    }
    out.average = lam_int / cfg.orbit_T;
    return out;
}

} // namespace

MatherEstimate estimate_mather_average(const ContactModel& m, const StationarySolution& u_minus,
                                       const MatherConfig& cfg) {
    if (u_minus.direction != Direction::Backward)
        throw std::invalid_argument("estimate_mather_average: expects a backward solution");
    const GridFn& u = u_minus.u;
    const int n = u.grid.n;
    const GridFn du = gradient(u);

    // kink filter on the centered second difference
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        d2[static_cast<std::size_t>(i)] =
            std::fabs(u[(i + 1) % n] - 2.0 * u[i] + u[(i - 1 + n) % n]);
    std::vector<double> sorted = d2;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double median = sorted[static_cast<std::size_t>(n / 2)];

    MatherEstimate est;
    std::vector<ContactState> seeds;
    for (int i = 0; i < n; i += cfg.seed_stride) {
        if (median > 0.0 && d2[static_cast<std::size_t>(i)] > cfg.kink_factor * median) continue;
        seeds.push_back(ContactState{u.grid.node(i), du[i], u[i]});
    }

    std::vector<double> candidates;
    for (const ContactState& seed : seeds) {
        SeedRun run = run_seed(m, seed, u, cfg);
        est.per_seed.push_back(SeedOutcome{seed, run.escaped ? 0.0 : run.average, run.escaped});
        if (!run.escaped) candidates.push_back(run.average);
    }

    // Newton refinement from the seed positions; a fixed point is accepted as
    // a Mather sample only if it lies on the 1-graph of u_- and its lambda is
    // non-negative (measures in M_{u_-} integrate lambda to >= 0).
    for (const ContactState& seed : seeds) {
        ContactState fp;
        try {
            fp = find_fixed_point(m, seed, cfg.newton);
        } catch (const std::runtime_error&) {
            continue;
        }
        const double uerr = std::fabs(fp.u - interpolate(u, fp.x));
        const double lam = m.lambda(fp.x);
        if (uerr > cfg.graph_tol || lam < cfg.lambda_floor) continue;
        bool dup = false;
        for (const FixedPointInfo& known : est.fixed_points)
            if (dist_torus(known.state.x, fp.x) < 1e-5 && std::fabs(known.state.p - fp.p) < 1e-5 &&
                std::fabs(known.state.u - fp.u) < 1e-5) {
                dup = true;
                break;
            }
        if (!dup) est.fixed_points.push_back(FixedPointInfo{fp, lam});
        candidates.push_back(lam);
    }

    if (candidates.empty())
        throw std::runtime_error("estimate_mather_average: no invariant sample found");
    est.a_hat = *std::min_element(candidates.begin(), candidates.end());
    return est;
}

double lyapunov_margin(const ContactModel& m, const GridFn& psi,
                       const std::vector<ContactState>& jets) {
    if (jets.empty()) throw std::invalid_argument("lyapunov_margin: no jets");
    // strict subsolution at some level c' < c <=> max(lambda psi + h(x, psi')) < c
    const double raw = subsolution_residual(m.with_c(0.0), psi);
    if (!(raw < m.c))
        throw std::invalid_argument("lyapunov_margin: psi is not a strict subsolution below c");
    const GridFn dpsi = gradient(psi);
    double margin = 1e300;
    for (const ContactState& jet : jets) {
        const double psix = interpolate(psi, jet.x);
        if (!(jet.u > psix + 1e-9)) throw std::runtime_error("lyapunov_margin: test function undefined");
        const double hp = m.h.dh_dp(jet.x, jet.p);
        const double h = m.h.h(jet.x, jet.p);
        const double lie = (m.c - m.lambda(jet.x) * psix - interpolate(dpsi, jet.x) * hp -
                            (h - jet.p * hp)) /
                           (jet.u - psix);
        margin = std::min(margin, m.lambda(jet.x) + lie);
    }
    return margin;
}

double calibration_error(const StationarySolution& u_minus, const OrbitRecord& orbit) {
    double worst = 0.0;
    for (const ContactState& s : orbit.states)
        worst = std::max(worst, std::fabs(s.u - interpolate(u_minus.u, s.x)));
    return worst;
}

} // namespace hjdisc
