#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fracmatch/audit.hpp"
#include "fracmatch/cmfp.hpp"
#include "fracmatch/envy.hpp"
#include "fracmatch/fractional.hpp"
#include "fracmatch/instance.hpp"
#include "fracmatch/integral.hpp"
#include "fracmatch/solver.hpp"

namespace fracmatch {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Rationals

/// Entries may be JSON integers, "p/q" strings, or decimal strings.
/// Non-integer JSON numbers are rejected: 0.1 as a double is not 1/10, and
/// silently keeping the difference would corrupt stability decisions.
inline Rational rational_from_json(const Json& v) {
    if (v.is_number_integer()) {
        if (v.is_number_unsigned()) return Rational(Integer(v.get<std::uint64_t>()));
        return Rational(Integer(v.get<std::int64_t>()));
    }
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_float())
        throw ParseError("non-integer JSON number; write it as a decimal or p/q string");
    throw ParseError("expected a number or string, got " + std::string(v.type_name()));
}

/// Canonical form: a JSON integer when the value is an integer that fits
/// int64, otherwise a string ("p/q" for non-integers).
inline Json rational_to_json(const Rational& r) {
    if (denominator(r) == 1) {
        static const Integer lo(std::numeric_limits<std::int64_t>::min());
        static const Integer hi(std::numeric_limits<std::int64_t>::max());
        const Integer num = numerator(r);
        if (num >= lo && num <= hi) return Json(num.convert_to<std::int64_t>());
        return Json(num.str());
    }
    return Json(to_fraction_string(r));
}

// ---------------------------------------------------------------------------
// Instances

inline Json instance_to_json(const MatchingInstance& inst) {
    Json u = Json::array(), v = Json::array();
    for (int i = 0; i < inst.n; ++i) {
        Json ur = Json::array(), vr = Json::array();
        for (int j = 0; j < inst.n; ++j) {
            ur.push_back(rational_to_json(inst.U[i][j]));
            vr.push_back(rational_to_json(inst.V[i][j]));
        }
        u.push_back(std::move(ur));
        v.push_back(std::move(vr));
    }
    return Json{{"n", inst.n}, {"U", std::move(u)}, {"V", std::move(v)}};
}

inline MatchingInstance instance_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    if (!j.contains("n") || !j.contains("U") || !j.contains("V"))
        throw ParseError("instance needs fields n, U, V");
    if (!j["n"].is_number_integer()) throw ParseError("field n must be an integer");
    const std::int64_t n = j["n"].get<std::int64_t>();
    if (n < 1) throw ParseError("field n must be positive");

    auto matrix = [&](const Json& m, const char* name) {
        if (!m.is_array() || static_cast<std::int64_t>(m.size()) != n)
            throw ParseError(std::string(name) + " must be an array of n rows");
        Matrix out;
        for (const auto& row : m) {
            if (!row.is_array() || static_cast<std::int64_t>(row.size()) != n)
                throw ParseError(std::string(name) + " row of wrong length");
            std::vector<Rational> r;
            for (const auto& cell : row) r.push_back(rational_from_json(cell));
            out.push_back(std::move(r));
        }
        return out;
    };

    MatchingInstance inst;
    inst.n = static_cast<int>(n);
    inst.U = matrix(j["U"], "U");
    inst.V = matrix(j["V"], "V");
    return inst;
}

/// Parses and validates the JSON instance format.
inline MatchingInstance parse_instance(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    MatchingInstance inst = instance_from_json(j);
    const ValidationReport report = validate(inst);
    if (!report.ok())
        throw ValidationError("instance violates strict-preference invariants",
                              report.messages());
    return inst;
}

inline std::string serialize_instance(const MatchingInstance& inst) {
    return instance_to_json(inst).dump();
}

// ---------------------------------------------------------------------------
// Matchings

/// Integral matchings serialize as arrays of [man, woman] pairs.
inline Json integral_to_json(const IntegralMatching& mu) {
    Json out = Json::array();
    for (const auto& [m, w] : mu.pairs()) out.push_back(Json::array({m, w}));
    return out;
}

inline IntegralMatching integral_from_json(const Json& j, int n) {
    if (!j.is_array()) throw ParseError("integral matching must be an array of pairs");
    IntegralMatching mu(n);
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number_integer())
            throw ParseError("matching entries must be [man, woman] index pairs");
        const std::int64_t m = pair[0].get<std::int64_t>(), w = pair[1].get<std::int64_t>();
        if (m < 0 || m >= n || w < 0 || w >= n) throw ParseError("matching index out of range");
        if (mu.pairing[m] != IntegralMatching::kUnmatched)
            throw ParseError("man matched twice");
        mu.pairing[m] = static_cast<int>(w);
    }
    return mu;
}

/// Fractional matchings serialize as an n-by-n matrix of "p/q" strings.
inline Json fractional_to_json(const FractionalMatching& mu) {
    Json out = Json::array();
    for (const auto& row : mu.weights) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(to_fraction_string(x));
        out.push_back(std::move(r));
    }
    return out;
}

inline FractionalMatching fractional_from_json(const Json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ParseError("fractional matching must be an n-by-n matrix");
    FractionalMatching mu = FractionalMatching::zero(n);
    for (int m = 0; m < n; ++m) {
        if (!j[m].is_array() || static_cast<int>(j[m].size()) != n)
            throw ParseError("fractional matching row of wrong length");
        for (int w = 0; w < n; ++w) mu.weights[m][w] = rational_from_json(j[m][w]);
    }
    return mu;
}

using AnyMatching = std::variant<IntegralMatching, FractionalMatching>;

/// Accepts pair lists, weight matrices, and {"matching": ...} envelopes.
/// A 2x2 all-integer array is read as a pair list; canonical fractional
/// output always uses "p/q" strings, so it never hits the ambiguity.
inline AnyMatching matching_from_json(const Json& j, int n) {
    const Json* value = &j;
    if (j.is_object()) {
        if (!j.contains("matching")) throw ParseError("envelope object lacks 'matching'");
        value = &j["matching"];
    }
    if (!value->is_array()) throw ParseError("matching must be an array");

    const bool pair_shaped = [&] {
        if (static_cast<int>(value->size()) > n) return false;
        for (const auto& e : *value)
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                !e[1].is_number_integer())
                return false;
        return true;
    }();
    if (pair_shaped) {
        if (n != 2 || static_cast<int>(value->size()) != 2) return integral_from_json(*value, n);
        // n == 2 is the one ambiguous shape: prefer the pair reading when it
        // parses, else fall through to the matrix reading.
        try {
            return integral_from_json(*value, n);
        } catch (const ParseError&) {
        }
    }
    return fractional_from_json(*value, n);
}

inline FractionalMatching as_fractional(const AnyMatching& any) {
    if (std::holds_alternative<IntegralMatching>(any))
        return FractionalMatching::from_integral(std::get<IntegralMatching>(any));
    return std::get<FractionalMatching>(any);
}

// ---------------------------------------------------------------------------
// Reports

inline Json stability_to_json(const StabilityReport& report) {
    Json blocking = Json::array();
    for (const auto& [m, w] : report.blocking) blocking.push_back(Json::array({m, w}));
    return Json{{"stable", report.stable}, {"blocking", std::move(blocking)}};
}

inline Json cmfp_result_to_json(const CmfpResult& result) {
    Json rounds = Json::array();
    for (const auto& r : result.rounds) rounds.push_back(Json::array({r.man, r.woman, r.round}));
    return Json{{"cmfp", result.perfect()},
                {"forced", integral_to_json(result.forced)},
                {"rounds", std::move(rounds)}};
}

inline Json decomposition_to_json(
    const std::vector<std::pair<Rational, IntegralMatching>>& components) {
    Json out = Json::array();
    for (const auto& [weight, matching] : components)
        out.push_back(Json{{"weight", to_fraction_string(weight)},
                           {"matching", integral_to_json(matching)}});
    return out;
}

inline Json envy_graph_to_json(const EnvyGraph& g) {
    Json edges = Json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back(Json::array({a, b}));
    return Json{{"side", side_name(g.side)}, {"n", g.n}, {"edges", std::move(edges)}};
}

inline Json agent_to_json(AgentId a) {
    return Json{{"side", side_name(a.side)}, {"index", a.index}};
}

/// Trace serialization maps residual-local ids back to original indices.
inline Json trace_to_json(const SolveTrace& trace) {
    const auto& men = trace.cmfp.residual_men;
    const auto& women = trace.cmfp.residual_women;
    auto orig_agent = [&](Side side, int local) {
        return side == Side::Men ? men[local] : women[local];
    };
    auto matching_json = [&](const IntegralMatching& mu) {
        Json out = Json::array();
        for (const auto& [m, w] : mu.pairs()) out.push_back(Json::array({men[m], women[w]}));
        return out;
    };

    Json rotations = Json::array();
    for (const auto& rot : trace.rotations) {
        Json nodes = Json::array();
        for (int a : rot.nodes) nodes.push_back(orig_agent(rot.side, a));
        rotations.push_back(Json{{"kind", rot.kind == RotationKind::Cycle ? "cycle" : "path"},
                                 {"side", side_name(rot.side)},
                                 {"nodes", std::move(nodes)},
                                 {"produced", matching_json(rot.produced)}});
    }
    Json family = Json::array();
    for (const auto& mu : trace.family) family.push_back(matching_json(mu));
    Json improved = Json::array();
    for (AgentId a : trace.improved)
        improved.push_back(agent_to_json({a.side, orig_agent(a.side, a.index)}));
    Json weights = Json::array();
    for (const auto& x : trace.weights) weights.push_back(to_fraction_string(x));

    return Json{{"cmfp", cmfp_result_to_json(trace.cmfp)},
                {"base", trace.cmfp.residual_men.empty() ? Json::array() : matching_json(trace.base)},
                {"rotations", std::move(rotations)},
                {"family", std::move(family)},
                {"improved", std::move(improved)},
                {"lp", trace.lp.debug_string()},
                {"weights", std::move(weights)}};
}

inline Json deviation_to_json(const Deviation& dev) {
    Json report = Json::array();
    for (const auto& v : dev.report) report.push_back(rational_to_json(v));
    return Json{{"agent", agent_to_json(dev.agent)},
                {"report", std::move(report)},
                {"truthful_utility", to_fraction_string(dev.truthful_utility)},
                {"deviated_utility", to_fraction_string(dev.deviated_utility)},
                {"gain", to_fraction_string(dev.gain)}};
}

inline Json audit_report_to_json(const AuditReport& report) {
    Json agents = Json::array();
    for (const auto& dev : report.per_agent) agents.push_back(deviation_to_json(dev));
    return Json{{"mechanism", report.mechanism},
                {"verdict", report.verdict == AuditVerdict::ManipulationFound
                                ? "ManipulationFound"
                                : "NoGainFound"},
                {"agents", std::move(agents)}};
}

inline Json coalition_record_to_json(const CoalitionRecord& record) {
    Json coalition = Json::array();
    for (AgentId a : record.coalition) coalition.push_back(agent_to_json(a));
    Json joint = Json::array();
    for (const auto& dev : record.best_joint) joint.push_back(deviation_to_json(dev));
    return Json{{"coalition", std::move(coalition)},
                {"verdict", record.verdict == AuditVerdict::ManipulationFound
                                ? "ManipulationFound"
                                : "NoGainFound"},
                {"best_joint", std::move(joint)}};
}

}  // namespace fracmatch
