#pragma once

#include "hjdisc/torus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hjdisc {

/// Sign classes of the discount factor, cases (+), (-), (+/-) plus the
/// degenerate all-zero case used internally by the ergodic-slope solver.
enum class SignClass { Plus, Minus, PlusMinus, IdenticallyZero };

std::string to_string(SignClass s);

enum class DiscountKind { Constant, Sine, OneMinusCosSquared, Tabulated };

/// The discount factor lambda(x) with cached extrema. A `negated` flag
/// implements the reflected model's -lambda without losing the closed form.
class DiscountSpec {
public:
    static DiscountSpec constant(double value);
    static DiscountSpec sine();
    static DiscountSpec one_minus_cos_squared();
    static DiscountSpec tabulated(std::vector<double> samples);

    double operator()(double x) const;
    double derivative(double x) const;
    DiscountSpec negated() const;

    DiscountKind kind() const { return kind_; }
    bool is_negated() const { return negated_; }
    double lambda_plus() const { return lambda_plus_; }
    double lambda_minus() const { return lambda_minus_; }
    double Lambda() const { return Lambda_; }
    SignClass sign_class() const { return sign_class_; }

private:
    DiscountSpec() = default;
    double base(double x) const;
    double base_derivative(double x) const;
    void finalize();

    DiscountKind kind_ = DiscountKind::Constant;
    double value_ = 0.0;
    bool negated_ = false;
    std::vector<double> samples_;
    double lambda_plus_ = 0.0, lambda_minus_ = 0.0, Lambda_ = 0.0;
    SignClass sign_class_ = SignClass::IdenticallyZero;
};

enum class PotentialKind { Zero, CosMinusOne, OneMinusCos, Tabulated };

/// Potential term of a mechanical Hamiltonian h = p^2/2 + V(x).
class Potential {
public:
    static Potential zero();
    static Potential cos_minus_one();
    static Potential one_minus_cos();
    static Potential tabulated(std::vector<double> samples);

    double operator()(double x) const;
    double derivative(double x) const;
    PotentialKind kind() const { return kind_; }

private:
    PotentialKind kind_ = PotentialKind::Zero;
    std::vector<double> samples_;
};

enum class HamiltonianKind { QuadraticP2, Mechanical, Tabulated };

struct LagrangianSample;

/// Tonelli Hamiltonian h(x, p) with cached E0 = max_x h(x, 0) and
/// e0 = min h. Closed forms for the quadratic and mechanical kinds; a
/// uniform (x, p) lattice with bilinear interpolation otherwise.
///
/// An optional additive x-shift s(x) = a * lambda(x) supports the Mane
/// family h + a*lambda used by the non-negative critical-value scan:
/// it changes h and l by +/- s(x) exactly, so no re-tabulation is needed.
class HamiltonianSpec {
public:
    static HamiltonianSpec quadratic_p2();
    static HamiltonianSpec mechanical(Potential V);
    static HamiltonianSpec tabulated(std::vector<std::vector<double>> h_samples, double p_max);

    double h(double x, double p) const;
    double dh_dp(double x, double p) const;
    double dh_dx(double x, double p) const;

    /// l(x, v) = sup_p {p v - h(x, p)}: closed form where available,
    /// numeric Legendre maximization (tolerance 1e-10) for Tabulated.
    double lagrangian(double x, double v) const;

    HamiltonianSpec reflected() const;      // h(x, -p)
    HamiltonianSpec shifted_by(const DiscountSpec& lam, double a) const;

    HamiltonianKind kind() const { return kind_; }
    const Potential& potential() const { return V_; }
    double E0() const { return E0_; }
    double e0() const { return e0_; }
    double p_max() const { return p_max_; }

private:
    HamiltonianSpec() = default;
    double base_h(double x, double p) const;
    double shift(double x) const;
    double shift_derivative(double x) const;
    void validate_and_finalize();

    HamiltonianKind kind_ = HamiltonianKind::QuadraticP2;
    Potential V_;
    bool p_reflected_ = false;
    std::vector<std::vector<double>> table_;   // table_[ix][ip]
    double p_max_ = 16.0;
    std::optional<std::pair<DiscountSpec, double>> shift_;
    double E0_ = 0.0, e0_ = 0.0;
};

/// The assembled contact model H(x, p, u) = lambda(x) u + h(x, p) - c.
struct ContactModel {
    HamiltonianSpec h;
    DiscountSpec lambda;
    double c = 0.0;

    ContactModel(HamiltonianSpec hs, DiscountSpec ls, double c_value);
    ContactModel with_c(double c_value) const { return ContactModel(h, lambda, c_value); }
};

struct ModelConstants {
    double E0, e0, Lambda, lambda_plus, lambda_minus;
    SignClass sign_class;
};

double eval_hamiltonian(const ContactModel& m, double x, double p, double u);
double eval_lagrangian(const ContactModel& m, double x, double v);
ModelConstants model_constants(const ContactModel& m);

/// Reflected model (lambda, h(x,p)) -> (-lambda, h(x,-p)); an involution.
ContactModel reflect(const ContactModel& m);

} // namespace hjdisc
