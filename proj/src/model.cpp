#include "hjdisc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjdisc {

namespace {
constexpr int kDenseSamples = 4096;
constexpr double kFdStep = 1e-6;

double interp_periodic_cubic(const std::vector<double>& s, double x) {
    const int n = static_cast<int>(s.size());
    const double t = wrap_angle(x) * n / kTwoPi;
    int k = static_cast<int>(std::floor(t));
    double w = t - k;
    if (k >= n) k -= n;
    const double pm1 = s[static_cast<std::size_t>((k - 1 + n) % n)];
    const double p0 = s[static_cast<std::size_t>(k)];
    const double p1 = s[static_cast<std::size_t>((k + 1) % n)];
    const double p2 = s[static_cast<std::size_t>((k + 2) % n)];
    const double w2 = w * w, w3 = w2 * w;
    return 0.5 * (2.0 * p0 + (-pm1 + p1) * w + (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * w2 +
                  (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * w3);
}
} // namespace

std::string to_string(SignClass s) {
    switch (s) {
        case SignClass::Plus: return "plus";
        case SignClass::Minus: return "minus";
        case SignClass::PlusMinus: return "plus_minus";
        case SignClass::IdenticallyZero: return "identically_zero";
    }
    return "?";
}

// ---------------------------------------------------------------- Discount

DiscountSpec DiscountSpec::constant(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("DiscountSpec: non-finite constant");
    DiscountSpec d;
    d.kind_ = DiscountKind::Constant;
    d.value_ = value;
    d.finalize();
    return d;
}

DiscountSpec DiscountSpec::sine() {
    DiscountSpec d;
    d.kind_ = DiscountKind::Sine;
    d.finalize();
    return d;
}

DiscountSpec DiscountSpec::one_minus_cos_squared() {
    DiscountSpec d;
    d.kind_ = DiscountKind::OneMinusCosSquared;
    d.finalize();
    return d;
}

DiscountSpec DiscountSpec::tabulated(std::vector<double> samples) {
    if (samples.size() < 8) throw std::invalid_argument("DiscountSpec: too few samples");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("DiscountSpec: non-finite sample");
    DiscountSpec d;
    d.kind_ = DiscountKind::Tabulated;
    d.samples_ = std::move(samples);
    d.finalize();
    return d;
}

double DiscountSpec::base(double x) const {
    switch (kind_) {
        case DiscountKind::Constant: return value_;
        case DiscountKind::Sine: return std::sin(x);
        case DiscountKind::OneMinusCosSquared: {
            const double s = 1.0 - std::cos(x);
            return s * s;
        }
        case DiscountKind::Tabulated: return interp_periodic_cubic(samples_, x);
    }
    return 0.0;
}

double DiscountSpec::base_derivative(double x) const {
    switch (kind_) {
        case DiscountKind::Constant: return 0.0;
        case DiscountKind::Sine: return std::cos(x);
        case DiscountKind::OneMinusCosSquared: return 2.0 * (1.0 - std::cos(x)) * std::sin(x);
        case DiscountKind::Tabulated:
            return (interp_periodic_cubic(samples_, x + kFdStep) -
                    interp_periodic_cubic(samples_, x - kFdStep)) /
                   (2.0 * kFdStep);
    }
    return 0.0;
}

double DiscountSpec::operator()(double x) const { return negated_ ? -base(x) : base(x); }
double DiscountSpec::derivative(double x) const {
    return negated_ ? -base_derivative(x) : base_derivative(x);
}

DiscountSpec DiscountSpec::negated() const {
    DiscountSpec d = *this;
    d.negated_ = !d.negated_;
    d.finalize();
    return d;
}

void DiscountSpec::finalize() {
    double lo = base(0.0), hi = base(0.0);
    for (int i = 0; i < kDenseSamples; ++i) {
        const double v = base(i * kTwoPi / kDenseSamples);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (negated_) std::swap(lo, hi), lo = -lo, hi = -hi;
    lambda_plus_ = hi;
    lambda_minus_ = lo;
    Lambda_ = std::max(std::fabs(hi), std::fabs(lo));
    if (lambda_minus_ >= 0.0 && lambda_plus_ > 0.0) sign_class_ = SignClass::Plus;
    else if (lambda_plus_ <= 0.0 && lambda_minus_ < 0.0) sign_class_ = SignClass::Minus;
    else if (lambda_minus_ < 0.0 && lambda_plus_ > 0.0) sign_class_ = SignClass::PlusMinus;
    else sign_class_ = SignClass::IdenticallyZero;
}

// --------------------------------------------------------------- Potential

Potential Potential::zero() { return Potential{}; }

Potential Potential::cos_minus_one() {
    Potential v;
    v.kind_ = PotentialKind::CosMinusOne;
    return v;
}

Potential Potential::one_minus_cos() {
    Potential v;
    v.kind_ = PotentialKind::OneMinusCos;
    return v;
}

Potential Potential::tabulated(std::vector<double> samples) {
    if (samples.size() < 8) throw std::invalid_argument("Potential: too few samples");
    Potential v;
    v.kind_ = PotentialKind::Tabulated;
    v.samples_ = std::move(samples);
    return v;
}

double Potential::operator()(double x) const {
    switch (kind_) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::CosMinusOne: return std::cos(x) - 1.0;
        case PotentialKind::OneMinusCos: return 1.0 - std::cos(x);
        case PotentialKind::Tabulated: return interp_periodic_cubic(samples_, x);
    }
    return 0.0;
}

double Potential::derivative(double x) const {
    switch (kind_) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::CosMinusOne: return -std::sin(x);
        case PotentialKind::OneMinusCos: return std::sin(x);
        case PotentialKind::Tabulated:
            return (interp_periodic_cubic(samples_, x + kFdStep) -
                    interp_periodic_cubic(samples_, x - kFdStep)) /
                   (2.0 * kFdStep);
    }
    return 0.0;
}

// -------------------------------------------------------------- Hamiltonian

HamiltonianSpec HamiltonianSpec::quadratic_p2() {
    HamiltonianSpec h;
    h.kind_ = HamiltonianKind::QuadraticP2;
    h.validate_and_finalize();
    return h;
}

HamiltonianSpec HamiltonianSpec::mechanical(Potential V) {
    HamiltonianSpec h;
    h.kind_ = HamiltonianKind::Mechanical;
    h.V_ = std::move(V);
    h.validate_and_finalize();
    return h;
}

HamiltonianSpec HamiltonianSpec::tabulated(std::vector<std::vector<double>> h_samples, double p_max) {
    if (h_samples.size() < 8) throw std::invalid_argument("HamiltonianSpec: too few x samples");
    const std::size_t np = h_samples.front().size();
    if (np < 9) throw std::invalid_argument("HamiltonianSpec: too few p samples");
    for (const auto& row : h_samples) {
        if (row.size() != np) throw std::invalid_argument("HamiltonianSpec: ragged table");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("HamiltonianSpec: non-finite sample");
    }
    HamiltonianSpec h;
    h.kind_ = HamiltonianKind::Tabulated;
    h.table_ = std::move(h_samples);
    h.p_max_ = p_max;
    h.validate_and_finalize();
    return h;
}

double HamiltonianSpec::shift(double x) const {
    return shift_ ? shift_->second * shift_->first(x) : 0.0;
}

double HamiltonianSpec::shift_derivative(double x) const {
    return shift_ ? shift_->second * shift_->first.derivative(x) : 0.0;
}

double HamiltonianSpec::base_h(double x, double p) const {
    if (p_reflected_) p = -p;
    switch (kind_) {
        case HamiltonianKind::QuadraticP2: return p * p;
        case HamiltonianKind::Mechanical: return 0.5 * p * p + V_(x);
        case HamiltonianKind::Tabulated: {
            const int nx = static_cast<int>(table_.size());
            const int np = static_cast<int>(table_.front().size());
            const double tx = wrap_angle(x) * nx / kTwoPi;
            int ix = static_cast<int>(std::floor(tx));
            double wx = tx - ix;
            if (ix >= nx) ix -= nx;
            double tp = (p + p_max_) / (2.0 * p_max_) * (np - 1);
            tp = std::clamp(tp, 0.0, static_cast<double>(np - 1));
            int ip = std::min(static_cast<int>(std::floor(tp)), np - 2);
            const double wp = tp - ip;
            const auto& r0 = table_[static_cast<std::size_t>(ix)];
            const auto& r1 = table_[static_cast<std::size_t>((ix + 1) % nx)];
            const double a = (1 - wp) * r0[static_cast<std::size_t>(ip)] + wp * r0[static_cast<std::size_t>(ip + 1)];
            const double b = (1 - wp) * r1[static_cast<std::size_t>(ip)] + wp * r1[static_cast<std::size_t>(ip + 1)];
            return (1 - wx) * a + wx * b;
        }
    }
    return 0.0;
}

double HamiltonianSpec::h(double x, double p) const { return base_h(x, p) + shift(x); }

double HamiltonianSpec::dh_dp(double x, double p) const {
    switch (kind_) {
        case HamiltonianKind::QuadraticP2: return 2.0 * p;   // even in p
        case HamiltonianKind::Mechanical: return p;
        case HamiltonianKind::Tabulated:
            return (base_h(x, p + kFdStep) - base_h(x, p - kFdStep)) / (2.0 * kFdStep);
    }
    return 0.0;
}

double HamiltonianSpec::dh_dx(double x, double p) const {
    switch (kind_) {
        case HamiltonianKind::QuadraticP2: return shift_derivative(x);
        case HamiltonianKind::Mechanical: return V_.derivative(x) + shift_derivative(x);
        case HamiltonianKind::Tabulated:
            return (base_h(x + kFdStep, p) - base_h(x - kFdStep, p)) / (2.0 * kFdStep) +
                   shift_derivative(x);
    }
    return 0.0;
}

double HamiltonianSpec::lagrangian(double x, double v) const {
    // reflection acts on velocities the same way: l_ref(x, v) = l(x, -v);
    // both closed-form kinds are even, so only Tabulated needs the flip.
    switch (kind_) {
        case HamiltonianKind::QuadraticP2: return 0.25 * v * v - shift(x);
        case HamiltonianKind::Mechanical: return 0.5 * v * v - V_(x) - shift(x);
        case HamiltonianKind::Tabulated: break;
    }
    // numeric Legendre: coarse scan over the p lattice, then golden section.
    const int np = static_cast<int>(table_.front().size());
    double best = -1e300;
    int best_i = 0;
    for (int i = 0; i < np; ++i) {
        const double p = -p_max_ + 2.0 * p_max_ * i / (np - 1);
        const double val = p * v - base_h(x, p);
        if (val > best) { best = val; best_i = i; }
    }
    if (best_i == 0 || best_i == np - 1)
        throw std::runtime_error("eval_lagrangian: momentum range too small");
    const double dp = 2.0 * p_max_ / (np - 1);
    double a = -p_max_ + dp * (best_i - 1), b = -p_max_ + dp * (best_i + 1);
    const double gr = 0.6180339887498949;
    auto f = [&](double p) { return p * v - base_h(x, p); };
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = f(c1), f2 = f(c2);
    while (b - a > 1e-10) {
        if (f1 > f2) { b = c2; c2 = c1; f2 = f1; c1 = b - gr * (b - a); f1 = f(c1); }
        else { a = c1; c1 = c2; f1 = f2; c2 = a + gr * (b - a); f2 = f(c2); }
    }
    return std::max(best, std::max(f1, f2)) - shift(x);
}

HamiltonianSpec HamiltonianSpec::reflected() const {
    HamiltonianSpec h = *this;
    h.p_reflected_ = !h.p_reflected_;
    h.validate_and_finalize();
    return h;
}

HamiltonianSpec HamiltonianSpec::shifted_by(const DiscountSpec& lam, double a) const {
    HamiltonianSpec h = *this;
    if (h.shift_) throw std::invalid_argument("HamiltonianSpec: already shifted");
    h.shift_ = std::make_pair(lam, a);
    h.validate_and_finalize();
    return h;
}

void HamiltonianSpec::validate_and_finalize() {
    const double P = kind_ == HamiltonianKind::Tabulated ? p_max_ : 16.0;

    // convexity in p (H1): second differences on the table's own lattice for
    // Tabulated, on a dense scan otherwise
    if (kind_ == HamiltonianKind::Tabulated) {
        const std::size_t np = table_.front().size();
        for (const auto& row : table_)
            for (std::size_t j = 2; j < np; ++j)
                if (row[j - 2] - 2.0 * row[j - 1] + row[j] <= 0.0)
                    throw std::invalid_argument("HamiltonianSpec: sampled convexity in p fails");
    } else {
        const int np = 129;
        for (int i = 0; i < 64; ++i) {
            const double x = i * kTwoPi / 64;
            double prev2 = 0, prev1 = 0;
            for (int j = 0; j < np; ++j) {
                const double val = base_h(x, -P + 2.0 * P * j / (np - 1));
                if (j >= 2 && prev2 - 2.0 * prev1 + val <= 0.0)
                    throw std::invalid_argument("HamiltonianSpec: sampled convexity in p fails");
                prev2 = prev1;
                prev1 = val;
            }
        }
    }

    // cached extrema by dense sampling; superlinearity witness (H2) alongside
    const int nx = kDenseSamples, np = 257;
    double E0 = -1e300, e0 = 1e300, w1 = -1e300, w2 = -1e300;
    for (int i = 0; i < nx; ++i) {
        const double x = i * kTwoPi / nx;
        E0 = std::max(E0, h(x, 0.0));
        for (int j = 0; j < np; ++j) {
            const double p = -P + 2.0 * P * j / (np - 1);
            const double val = h(x, p);
            e0 = std::min(e0, val);
            w1 = std::max(w1, std::fabs(p) - val);
            w2 = std::max(w2, 2.0 * std::fabs(p) - val);
        }
    }
    if (!std::isfinite(w1) || !std::isfinite(w2))
        throw std::invalid_argument("HamiltonianSpec: superlinearity witness not finite");
    E0_ = E0;
    e0_ = e0;
}

// ------------------------------------------------------------ ContactModel

ContactModel::ContactModel(HamiltonianSpec hs, DiscountSpec ls, double c_value)
    : h(std::move(hs)), lambda(std::move(ls)), c(c_value) {
    if (!std::isfinite(c_value)) throw std::invalid_argument("ContactModel: non-finite c");
}

double eval_hamiltonian(const ContactModel& m, double x, double p, double u) {
    if (!std::isfinite(x) || !std::isfinite(p) || !std::isfinite(u))
        throw std::invalid_argument("eval_hamiltonian: non-finite input");
    return m.lambda(x) * u + m.h.h(x, p) - m.c;
}

double eval_lagrangian(const ContactModel& m, double x, double v) {
    if (!std::isfinite(x) || !std::isfinite(v))
        throw std::invalid_argument("eval_lagrangian: non-finite input");
    return m.h.lagrangian(x, v);
}

ModelConstants model_constants(const ContactModel& m) {
    return ModelConstants{m.h.E0(), m.h.e0(), m.lambda.Lambda(), m.lambda.lambda_plus(),
                          m.lambda.lambda_minus(), m.lambda.sign_class()};
}

ContactModel reflect(const ContactModel& m) {
    return ContactModel(m.h.reflected(), m.lambda.negated(), m.c);
}

} // namespace hjdisc
