#include "hjdisc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjdisc {

RateFit fit_rate(const EvolutionTrace& trace, double window_fraction) {
    if (trace.dist_to_ref.empty())
        throw std::invalid_argument("fit_rate: trace has no reference distances");
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw std::invalid_argument("fit_rate: window_fraction must lie in (0, 1]");

    const double t_end = trace.times.back();
    const double t_start = t_end - window_fraction * (t_end - trace.times.front());
    double st = 0, sy = 0, stt = 0, sty = 0;
    int count = 0;
    double w_lo = t_end, w_hi = trace.times.front();
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] < t_start) continue;
        const double d = trace.dist_to_ref[i];
        if (!std::isfinite(d)) throw std::runtime_error("fit_rate: non-finite distance in window");
        if (d <= 1e-12) continue;   // floor region carries no rate information
        const double y = std::log(d);
        st += trace.times[i];
        sy += y;
        stt += trace.times[i] * trace.times[i];
        sty += trace.times[i] * y;
        ++count;
        w_lo = std::min(w_lo, trace.times[i]);
        w_hi = std::max(w_hi, trace.times[i]);
    }
    if (count < 10) throw std::runtime_error("fit_rate: window saturated; shorten horizon");

    RateFit fit;
    const double denom = count * stt - st * st;
    fit.slope = (count * sty - st * sy) / denom;
    fit.intercept = (sy - fit.slope * st) / count;
    fit.R_hat = -fit.slope;
    fit.window = {w_lo, w_hi};
    fit.points = count;
    double rss = 0.0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] < t_start || trace.dist_to_ref[i] <= 1e-12) continue;
        const double r = std::log(trace.dist_to_ref[i]) - (fit.slope * trace.times[i] + fit.intercept);
        rss += r * r;
    }
    fit.fit_residual = std::sqrt(rss / count);
    return fit;
}

RateReport rate_report(const ModelFamily& family, const std::vector<double>& c_list,
                       const PeriodicGrid& grid, const SemigroupConfig& cfg,
                       const RateReportConfig& rcfg) {
    RateReport rep;
    for (double c : c_list) {
        RateRow row;
        row.c = c;
        const ContactModel m = family(c);
        row.lambda_plus = m.lambda.lambda_plus();
        try {
            const StationarySolution u_minus = solve_stationary(m, Direction::Backward, grid, cfg);
            const MatherEstimate mather = estimate_mather_average(m, u_minus, rcfg.mather);
            row.a_hat = mather.a_hat;
            if (rcfg.measure_rates) {
                const GridFn phi = u_minus.u + rcfg.delta;
                const EvolveResult r =
                    evolve(m, phi, rcfg.rate_t_max, Direction::Backward, cfg, &u_minus.u);
                const RateFit fit = fit_rate(r.trace, rcfg.window_fraction);
                row.R_hat = fit.R_hat;
                row.gap = std::fabs(row.a_hat - row.R_hat);
            }
            if (rcfg.divergence_check) {
                const StationarySolution v_plus = solve_stationary(m, Direction::Forward, grid, cfg);
                const GridFn below = v_plus.u + (-rcfg.delta);
                const EvolveResult r =
                    evolve(m, below, rcfg.rate_t_max, Direction::Backward, cfg, &u_minus.u);
                // growth rate of the distance must be non-negative
                if (r.trace.dist_to_ref.size() >= 2 &&
                    r.trace.dist_to_ref.back() < r.trace.dist_to_ref.front())
                    rep.divergence_ok = false;
            }
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.note = e.what();
        }
        rep.rows.push_back(row);
    }

    rep.r_hat_nondecreasing = true;
    rep.a_hat_nondecreasing = true;
    const double slack = 1e-9;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (!rep.rows[i].ok || !rep.rows[i - 1].ok) continue;
        if (rep.rows[i].R_hat < rep.rows[i - 1].R_hat - slack) rep.r_hat_nondecreasing = false;
        if (rep.rows[i].a_hat < rep.rows[i - 1].a_hat - slack) rep.a_hat_nondecreasing = false;
    }
    if (!rep.rows.empty() && rep.rows.back().ok)
        rep.approaching_lambda_plus =
            std::fabs(rep.rows.back().lambda_plus - rep.rows.back().a_hat) <= rcfg.asymptote_tol;
    return rep;
}

} // namespace hjdisc
