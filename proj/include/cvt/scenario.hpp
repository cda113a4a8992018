#pragma once

// Scenario configuration for the command-line front end: one JSON document
// describes the resource state, the input state, the measurement geometry
// and task options. All referenced parameters are validated on load.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "cvt/cf_grid.hpp"
#include "cvt/gaussian.hpp"
#include "cvt/optimizer.hpp"

namespace cvt {

struct ResourceSpec {
    std::string kind; // "tmsv" | "vacuum" | "symmetric" | "standard_form" | "covariance"
    double r = 0.0;             // tmsv
    StandardFormI sf;           // symmetric / standard_form
    TwoModeCovariance raw;      // covariance
};

/// Covariance matrix of the spec; throws ConfigError when not a bona fide
/// quantum state.
TwoModeCovariance resolve_resource(const ResourceSpec& spec);

struct GridSpec {
    double extent = 6.0;
    int n = 257;
};

struct SweepSpec {
    std::string key; // "r" | "theta" | "b" | "c" | "d"
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

struct Scenario {
    ResourceSpec resource;
    StatePreset input = Coherent{0.0};
    double theta = 0.0; // set to pi/4 by parse when absent
    GridSpec grid;
    long samples = 100000;
    std::uint64_t seed = 12345;
    OptimizerConfig optimizer;
    std::optional<SweepSpec> sweep;
};

/// Parses and validates a scenario document; throws ConfigError on any
/// structural or physical problem.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);

/// Rounds through 12 significant digits; all floating-point report output
/// goes through this.
double round12(double x);

} // namespace cvt
