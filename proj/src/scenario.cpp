#include "cvt/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace cvt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

double require_number(const json& node, const char* key) {
    if (!node.contains(key) || !node[key].is_number())
        fail(std::string("missing numeric field '") + key + "'");
    return node[key].get<double>();
}

ResourceSpec parse_resource(const json& node) {
    if (!node.is_object()) fail("'resource' must be an object");
    int forms = 0;
    for (const char* key : {"tmsv", "vacuum", "symmetric", "standard_form", "covariance"})
        forms += node.contains(key) ? 1 : 0;
    if (forms != 1)
        fail("exactly one resource form is required "
             "(tmsv | vacuum | symmetric | standard_form | covariance)");

    ResourceSpec spec;
    if (node.contains("tmsv")) {
        spec.kind = "tmsv";
        spec.r = require_number(node["tmsv"], "r");
    } else if (node.contains("vacuum")) {
        spec.kind = "vacuum";
    } else if (node.contains("symmetric")) {
        spec.kind = "symmetric";
        const json& s = node["symmetric"];
        spec.sf.b1 = spec.sf.b2 = require_number(s, "b");
        spec.sf.c = require_number(s, "c");
        spec.sf.d = require_number(s, "d");
    } else if (node.contains("standard_form")) {
        spec.kind = "standard_form";
        const json& s = node["standard_form"];
        spec.sf = {require_number(s, "b1"), require_number(s, "b2"),
                   require_number(s, "c"), require_number(s, "d")};
    } else {
        spec.kind = "covariance";
        const json& m = node["covariance"];
        if (!m.is_array()) fail("'covariance' must be an array");
        Eigen::Matrix4d mat;
        if (m.size() == 16) {
            for (int k = 0; k < 16; ++k) {
                if (!m[static_cast<std::size_t>(k)].is_number())
                    fail("'covariance' entries must be numbers");
                mat(k / 4, k % 4) = m[static_cast<std::size_t>(k)].get<double>();
            }
        } else if (m.size() == 4) {
            for (int i = 0; i < 4; ++i) {
                const json& row = m[static_cast<std::size_t>(i)];
                if (!row.is_array() || row.size() != 4) fail("'covariance' rows must have 4 entries");
                for (int j = 0; j < 4; ++j)
                    mat(i, j) = row[static_cast<std::size_t>(j)].get<double>();
            }
        } else {
            fail("'covariance' must hold 16 entries (flat or 4 rows of 4)");
        }
        try {
            spec.raw = two_mode_from_matrix(mat, 1e-9);
        } catch (const MalformedInput& e) {
            fail(e.what());
        }
    }
    return spec;
}

StatePreset parse_input(const json& node) {
    if (!node.is_object()) fail("'input' must be an object");
    int forms = 0;
    for (const char* key : {"coherent", "fock", "cat", "squeezed_thermal"})
        forms += node.contains(key) ? 1 : 0;
    if (forms != 1)
        fail("exactly one input form is required (coherent | fock | cat | squeezed_thermal)");

    auto complex_of = [](const json& a) -> std::complex<double> {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
            fail("complex amplitudes are written as [re, im]");
        return {a[0].get<double>(), a[1].get<double>()};
    };

    if (node.contains("coherent")) return Coherent{complex_of(node["coherent"])};
    if (node.contains("fock")) {
        if (!node["fock"].is_number_integer() || node["fock"].get<int>() < 0)
            fail("'fock' takes a nonnegative integer");
        return Fock{node["fock"].get<int>()};
    }
    if (node.contains("cat")) {
        const json& c = node["cat"];
        if (!c.contains("alpha")) fail("'cat' needs an 'alpha' amplitude");
        double phase = c.contains("phase") ? require_number(c, "phase") : 0.0;
        return Cat{complex_of(c["alpha"]), phase};
    }
    const json& st = node["squeezed_thermal"];
    double nbar = require_number(st, "nbar");
    double s = require_number(st, "s");
    if (nbar < 0.0) fail("'squeezed_thermal' needs nbar >= 0");
    return SqueezedThermal{nbar, s};
}

} // namespace

TwoModeCovariance resolve_resource(const ResourceSpec& spec) {
    TwoModeCovariance v;
    if (spec.kind == "tmsv") {
        v = tmsv(spec.r);
    } else if (spec.kind == "vacuum") {
        v = vacuum_two_mode();
    } else if (spec.kind == "symmetric" || spec.kind == "standard_form") {
        v = from_standard_form(spec.sf);
    } else {
        v = spec.raw;
    }
    if (!validate_two_mode(v).bona_fide)
        throw ConfigError("resource is not a quantum state");
    return v;
}

Scenario parse_scenario(const nlohmann::json& doc) {
    if (!doc.is_object()) fail("scenario must be a JSON object");
    if (!doc.contains("resource")) fail("scenario needs a 'resource'");

    Scenario sc;
    sc.resource = parse_resource(doc["resource"]);
    resolve_resource(sc.resource); // bona fide check on load

    if (doc.contains("input")) sc.input = parse_input(doc["input"]);
    sc.theta = doc.contains("theta") ? require_number(doc, "theta") : 0.25 * std::numbers::pi;
    if (!(sc.theta > 0.0) || !(sc.theta < 0.5 * std::numbers::pi))
        fail("invalid geometry: theta must lie strictly inside (0, pi/2)");

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        sc.grid.extent = g.contains("extent") ? require_number(g, "extent") : sc.grid.extent;
        if (g.contains("n")) {
            if (!g["n"].is_number_integer()) fail("grid 'n' must be an integer");
            sc.grid.n = g["n"].get<int>();
        }
        if (!(sc.grid.extent > 0.0)) fail("grid extent must be positive");
        if (sc.grid.n % 2 == 0 || sc.grid.n < 65)
            fail("grid 'n' must be odd and at least 65");
    }
    if (doc.contains("samples")) {
        if (!doc["samples"].is_number_integer() || doc["samples"].get<long>() < 2)
            fail("'samples' must be an integer >= 2");
        sc.samples = doc["samples"].get<long>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) fail("'seed' must be an integer");
        sc.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("optimizer")) {
        const json& o = doc["optimizer"];
        if (o.contains("u_max")) {
            sc.optimizer.u_max = require_number(o, "u_max");
            if (!(sc.optimizer.u_max > 1.0)) fail("optimizer 'u_max' must exceed 1");
        }
        if (o.contains("coarse_points")) {
            if (!o["coarse_points"].is_number_integer()) fail("'coarse_points' must be an integer");
            sc.optimizer.coarse_points = o["coarse_points"].get<int>();
            if (sc.optimizer.coarse_points < 16) fail("'coarse_points' must be at least 16");
        }
        sc.optimizer.seed = sc.seed;
    }
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        SweepSpec sweep;
        if (!s.contains("key") || !s["key"].is_string()) fail("sweep needs a string 'key'");
        sweep.key = s["key"].get<std::string>();
        sweep.from = require_number(s, "from");
        sweep.to = require_number(s, "to");
        sweep.step = require_number(s, "step");
        if (!(sweep.step > 0.0)) fail("sweep 'step' must be positive");
        if (sweep.to < sweep.from) fail("empty sweep range");
        sc.sweep = sweep;
    }
    return sc;
}

Scenario parse_scenario_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) fail("scenario is not valid JSON");
    return parse_scenario(doc);
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

} // namespace cvt
