#include "hjdisc/scenarios.hpp"

#include <stdexcept>

namespace hjdisc {

const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> registry{
        {"quadratic-sine", "h = |p|^2, lambda = sin x (sign-changing discount)", 1.0},
        {"pendulum-sine", "h = p^2/2 + cos x - 1, lambda = sin x (pendulum)", 1.0},
        {"appendix-c", "h = p^2/2 + 1 - cos x, lambda = (1 - cos x)^2 (non-negative discount)", 0.05},
        {"homogeneous", "h = p^2/2, lambda = 1 (constant discount)", 3.0},
    };
    return registry;
}

ModelFamily scenario_family(const std::string& name) {
    if (name == "quadratic-sine")
        return [](double c) {
            return ContactModel(HamiltonianSpec::quadratic_p2(), DiscountSpec::sine(), c);
        };
    if (name == "pendulum-sine")
        return [](double c) {
            return ContactModel(HamiltonianSpec::mechanical(Potential::cos_minus_one()),
                                DiscountSpec::sine(), c);
        };
    if (name == "appendix-c")
        return [](double c) {
            return ContactModel(HamiltonianSpec::mechanical(Potential::one_minus_cos()),
                                DiscountSpec::one_minus_cos_squared(), c);
        };
    if (name == "homogeneous")
        return [](double c) {
            return ContactModel(HamiltonianSpec::mechanical(Potential::zero()),
                                DiscountSpec::constant(1.0), c);
        };
    throw std::invalid_argument("unknown scenario: " + name);
}

ContactModel make_scenario(const std::string& name, double c) { return scenario_family(name)(c); }

} // namespace hjdisc
