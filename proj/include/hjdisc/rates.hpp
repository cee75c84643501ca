#pragma once

#include "hjdisc/characteristics.hpp"
#include "hjdisc/critical.hpp"
#include "hjdisc/semigroup.hpp"

#include <string>
#include <vector>

namespace hjdisc {

/// Least-squares line on (t, ln dist) over the tail window of a trace;
/// R_hat = -slope estimates the exponential convergence rate.
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    double fit_residual = 0.0;
    double R_hat = 0.0;
    int points = 0;
};

RateFit fit_rate(const EvolutionTrace& trace, double window_fraction = 0.5);

struct RateRow {
    double c = 0.0;
    double a_hat = 0.0;
    double R_hat = 0.0;
    double gap = 0.0;
    double lambda_plus = 0.0;
    bool ok = false;
    std::string note;
};

struct RateReportConfig {
    double delta = 0.3;            // offset of the probe datum above u_-
    double rate_t_max = 10.0;      // horizon of the rate measurement
    double window_fraction = 0.5;
    double asymptote_tol = 0.01;
    bool measure_rates = true;
    bool divergence_check = false; // optional growth check from v_+ - delta
    MatherConfig mather;
};

struct RateReport {
    std::vector<RateRow> rows;
    bool r_hat_nondecreasing = false;
    bool a_hat_nondecreasing = false;
    bool approaching_lambda_plus = false;
    bool divergence_ok = true;
};

/// Per-c table {c, a_hat, R_hat, |a_hat - R_hat|, lambda_plus}: solves
/// u^c_-, estimates the Mather average, and measures the decay rate of
/// T_t(u^c_- + delta) toward u^c_-.
RateReport rate_report(const ModelFamily& family, const std::vector<double>& c_list,
                       const PeriodicGrid& grid, const SemigroupConfig& cfg,
                       const RateReportConfig& rcfg = {});

} // namespace hjdisc
