#pragma once

// Subcommand implementations behind the CLI binary; they return the report
// document (JSON) or CSV text so they can be tested without spawning a
// process.

#include <json.hpp>

#include "cvt/scenario.hpp"

namespace cvt {

using Report = nlohmann::ordered_json;

Report cmd_standard_form(const Scenario& sc);
Report cmd_teleport(const Scenario& sc);
Report cmd_optimize(const Scenario& sc);
/// Self-testing: the report carries "pass" = (max deviation <= 5 standard
/// errors); callers map pass == false to a nonzero exit.
Report cmd_montecarlo(const Scenario& sc);
/// CSV rows (param, n_added, n_min, delta_epr, fidelity).
std::string cmd_sweep(const Scenario& sc);

} // namespace cvt
