#pragma once

#include "hjdisc/critical.hpp"
#include "hjdisc/model.hpp"

#include <string>
#include <vector>

namespace hjdisc {

struct ScenarioInfo {
    std::string name;
    std::string description;
    double default_c = 1.0;
};

const std::vector<ScenarioInfo>& list_scenarios();

/// Model family for a named scenario (c left as the family parameter).
ModelFamily scenario_family(const std::string& name);

ContactModel make_scenario(const std::string& name, double c);

} // namespace hjdisc
