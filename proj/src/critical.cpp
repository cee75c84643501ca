#include "hjdisc/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjdisc {

std::string to_string(CriticalMethod m) {
    switch (m) {
        case CriticalMethod::Bisection: return "bisection";
        case CriticalMethod::NonNegFormula: return "nonneg_formula";
        case CriticalMethod::ManeLimit: return "mane_limit";
    }
    return "?";
}

namespace {

LongtimeClass classify_probe(const ModelFamily& family, double c, const PeriodicGrid& grid,
                             const SemigroupConfig& cfg) {
    const ContactModel m = family(c);
    const ModelConstants mc = model_constants(m);
    if (!(mc.lambda_plus > 0.0))
        throw std::runtime_error("bisect_critical: probes need max lambda > 0");
    const GridFn phi = constant_fn(grid, (c - mc.e0) / mc.lambda_plus + 1.0 + mc.E0);
    return classify_longtime(m, phi, cfg).kind;
}

void check_monotone(const std::vector<std::pair<double, LongtimeClass>>& probes) {
    double top_down = -1e300, bottom_conv = 1e300;
    for (const auto& [c, cls] : probes) {
        if (cls == LongtimeClass::DivergedDown) top_down = std::max(top_down, c);
        if (cls == LongtimeClass::Converged) bottom_conv = std::min(bottom_conv, c);
    }
    if (top_down >= bottom_conv)
        throw std::logic_error("bisect_critical: classification is not monotone in c");
}

} // namespace

CriticalReport bisect_critical(const ModelFamily& family, std::pair<double, double> bracket,
                               const PeriodicGrid& grid, const SemigroupConfig& cfg,
                               const BisectionOptions& opt) {
    double lo = bracket.first, hi = bracket.second;
    if (!(lo < hi)) throw std::invalid_argument("bisect_critical: empty bracket");

    CriticalReport rep;
    rep.method = CriticalMethod::Bisection;

    auto probe = [&](double c) {
        const LongtimeClass cls = classify_probe(family, c, grid, cfg);
        rep.classifications.emplace_back(c, cls);
        if (cls == LongtimeClass::Undetermined) rep.undetermined_probes.push_back(c);
        return cls;
    };

    if (probe(lo) != LongtimeClass::DivergedDown || probe(hi) != LongtimeClass::Converged)
        throw std::runtime_error("bisect_critical: bracket does not straddle c0");

    while (hi - lo > opt.tol_c) {
        double mid = 0.5 * (lo + hi);
        LongtimeClass cls = probe(mid);
        // an undetermined midpoint shifts upward by tol_c/10 until it
        // classifies or runs out of room below the converged endpoint
        int shifts = 0;
        while (cls == LongtimeClass::Undetermined && shifts < opt.max_shifts) {
            mid += opt.tol_c / 10.0;
            if (mid >= hi - opt.tol_c / 20.0) break;
            cls = probe(mid);
            ++shifts;
        }
        if (cls == LongtimeClass::DivergedDown) lo = mid;
        else if (cls == LongtimeClass::Converged) hi = mid;
        else if (cls == LongtimeClass::DivergedUp)
            throw std::runtime_error("bisect_critical: unexpected upward divergence");
        else break;   // stuck on undetermined probes; report the bracket as-is
    }

    check_monotone(rep.classifications);
    rep.bracket = {lo, hi};
    rep.c0 = 0.5 * (lo + hi);
    rep.success = (hi - lo) <= opt.tol_c;
    return rep;
}

ManeResult mane_value(const HamiltonianSpec& h, const PeriodicGrid& grid,
                      const SemigroupConfig& cfg) {
    cfg.validate();
    const ContactModel m(h, DiscountSpec::constant(0.0), 0.0);
    GridFn u = constant_fn(grid, 0.0);
    const long steps = std::lround(cfg.t_max / cfg.dt);
    const long stride = std::max<long>(1, steps / 2000);
    std::vector<double> ts, means;
    GridFn next = u;
    const Evolver stepper(m, grid, cfg);
    for (long k = 1; k <= steps; ++k) {
        stepper.step(u, next);
        std::swap(u, next);
        if (k % stride == 0) {
            double mean = 0.0;
            for (double v : u.values) mean += v;
            ts.push_back(k * cfg.dt);
            means.push_back(mean / u.grid.n);
        }
    }
    // least-squares drift over the last half of the trace
    const std::size_t half = ts.size() / 2;
    double st = 0, sm = 0, stt = 0, stm = 0;
    const std::size_t count = ts.size() - half;
    for (std::size_t i = half; i < ts.size(); ++i) {
        st += ts[i];
        sm += means[i];
        stt += ts[i] * ts[i];
        stm += ts[i] * means[i];
    }
    const double denom = count * stt - st * st;
    const double slope = (count * stm - st * sm) / denom;
    const double intercept = (sm - slope * st) / count;
    double rss = 0.0;
    for (std::size_t i = half; i < ts.size(); ++i) {
        const double r = means[i] - (slope * ts[i] + intercept);
        rss += r * r;
    }
    ManeResult out;
    out.value = -slope;
    out.fit_residual = std::sqrt(rss / count);
    out.tail_warning = out.fit_residual > 0.05;
    return out;
}

CriticalReport nonneg_critical(const ContactModel& m, const PeriodicGrid& grid,
                               const SemigroupConfig& cfg, const NonNegOptions& opt) {
    const ModelConstants mc = model_constants(m);
    if (mc.sign_class != SignClass::Plus)
        throw std::invalid_argument("nonneg_critical: discount factor must satisfy (+)");

    CriticalReport rep;
    rep.method = CriticalMethod::NonNegFormula;

    // zero clusters of lambda on a dense sample
    const int nd = 4096;
    const double zero_tol = m.lambda.kind() == DiscountKind::Tabulated ? opt.zero_tol_tabulated
                                                                       : opt.zero_tol_closed;
    std::vector<bool> is_zero(nd);
    bool any = false;
    for (int i = 0; i < nd; ++i) {
        is_zero[static_cast<std::size_t>(i)] = std::fabs(m.lambda(i * kTwoPi / nd)) < zero_tol;
        any = any || is_zero[static_cast<std::size_t>(i)];
    }
    if (!any) {
        rep.minus_infinity = true;
        rep.c0 = -std::numeric_limits<double>::infinity();
        rep.success = true;
        return rep;
    }

    // group cyclically-contiguous zero nodes, scanning from a non-zero node
    struct Cluster {
        int first, count;
    };
    std::vector<Cluster> clusters;
    int off = -1;
    for (int j = 0; j < nd; ++j)
        if (!is_zero[static_cast<std::size_t>(j)]) {
            off = j;
            break;
        }
    if (off < 0) {
        clusters.push_back(Cluster{0, nd});
    } else {
        int i = off, seen = 0;
        while (seen < nd) {
            if (is_zero[static_cast<std::size_t>(i)]) {
                Cluster cl{i, 0};
                while (seen < nd && is_zero[static_cast<std::size_t>(i)]) {
                    ++cl.count;
                    ++seen;
                    i = (i + 1) % nd;
                }
                clusters.push_back(cl);
            } else {
                ++seen;
                i = (i + 1) % nd;
            }
        }
    }

    bool isolated = true;
    for (const Cluster& cl : clusters)
        if (cl.count > opt.max_cluster_nodes) isolated = false;

    // Mane-limit cross-check: c(h + a lambda) decreases to c0 as a -> -inf;
    // extrapolate the intercept of c_a against 1/a
    double c_scan;
    {
        double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (double a : opt.scan_a) {
            const ManeResult r = mane_value(m.h.shifted_by(m.lambda, a), grid, cfg);
            const double xv = 1.0 / a;
            s1 += 1;
            sx += xv;
            sy += r.value;
            sxx += xv * xv;
            sxy += xv * r.value;
        }
        const double denom = s1 * sxx - sx * sx;
        const double slope = (s1 * sxy - sx * sy) / denom;
        c_scan = (sy - slope * sx) / s1;
    }
    rep.cross_check = c_scan;

    if (!isolated) {
        rep.method = CriticalMethod::ManeLimit;
        rep.c0 = c_scan;
        rep.cross_check_gap = 0.0;
        rep.success = true;
        return rep;
    }

    // finite zero set: c0 = max over clusters of -l(x*, 0) = min_p h(x*, .)
    double c0 = -1e300;
    for (const Cluster& cl : clusters) {
        // circular mean of the cluster's nodes
        const double x_first = cl.first * kTwoPi / nd;
        const double x_center = wrap_angle(x_first + 0.5 * (cl.count - 1) * kTwoPi / nd);
        c0 = std::max(c0, -m.h.lagrangian(x_center, 0.0));
    }
    rep.c0 = c0;
    rep.cross_check_gap = std::fabs(c0 - c_scan);
    rep.success = true;
    return rep;
}

} // namespace hjdisc
