// Command-line front end. JSON on stdout (DOT only under envy-graph --dot),
// diagnostics on stderr. Exit codes: 0 success, 1 domain-negative answer
// (unstable matching, manipulation found), 2 input error, 3 internal anomaly.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fracmatch/fracmatch.hpp"

namespace {

using namespace fracmatch;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

/// Instances may arrive bare or wrapped in a solve envelope.
MatchingInstance load_instance(const std::string& path) {
    Json j = parse_json(read_input(path));
    if (j.is_object() && j.contains("instance")) j = j["instance"];
    MatchingInstance inst = instance_from_json(j);
    const ValidationReport report = validate(inst);
    if (!report.ok())
        throw ValidationError("instance violates strict-preference invariants",
                              report.messages());
    return inst;
}

void emit(const Json& j, bool pretty) {
    if (pretty)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << j.dump() << "\n";
}

GenMode parse_mode(const std::string& mode) {
    if (mode == "uniform") return GenMode::Uniform;
    if (mode == "no-mfp") return GenMode::NoMfp;
    if (mode == "cmfp") return GenMode::Cmfp;
    throw ParseError("unknown mode: " + mode);
}

MisreportFamily parse_family(const std::string& family, const std::string& grid_csv) {
    std::vector<Rational> grid;
    if (!grid_csv.empty()) {
        std::stringstream ss(grid_csv);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(parse_rational(item));
    }
    if (family == "perm") {
        if (!grid.empty()) throw ParseError("--grid only applies to grid/combined families");
        return MisreportFamily::row_permutations();
    }
    if (family == "grid") return MisreportFamily::value_grid(std::move(grid));
    if (family == "combined") return MisreportFamily::combined(std::move(grid));
    throw ParseError("unknown family: " + family);
}

std::vector<AgentId> parse_coalition(const std::string& csv, int n) {
    std::vector<AgentId> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.size() < 2 || (item[0] != 'm' && item[0] != 'w'))
            throw ParseError("coalition members look like m0,w2,...: got '" + item + "'");
        int idx;
        try {
            idx = std::stoi(item.substr(1));
        } catch (...) {
            throw ParseError("bad coalition index in '" + item + "'");
        }
        if (idx < 0 || idx >= n) throw ParseError("coalition index out of range: " + item);
        out.push_back(item[0] == 'm' ? man(idx) : woman(idx));
    }
    if (out.empty()) throw ParseError("empty coalition");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"stable fractional matching solver"};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "indent JSON output");

    std::string instance_path, matching_path, mechanism = "envy-frac";
    std::string side_name_arg = "women", family_name = "perm", coalition_csv, grid_csv;
    std::string mode_name = "uniform";
    bool want_trace = false, want_dot = false;
    int gen_n = 0, jobs = 1;
    std::uint64_t gen_seed = 0;

    auto* classify_cmd = app.add_subcommand("classify", "CMFP classification via Algorithm-1 extraction");
    classify_cmd->add_option("instance", instance_path)->required();

    auto* solve_cmd = app.add_subcommand("solve", "compute a stable fractional matching");
    solve_cmd->add_option("instance", instance_path)->required();
    solve_cmd->add_option("--mechanism", mechanism, "gs-men | gs-women | envy-frac");
    solve_cmd->add_flag("--trace", want_trace, "include the full solve trace");

    auto* verify_cmd = app.add_subcommand("verify", "check fractional stability");
    verify_cmd->add_option("instance", instance_path)->required();
    verify_cmd->add_option("matching", matching_path, "omit when the first input is an envelope");

    auto* decompose_cmd = app.add_subcommand("decompose", "Birkhoff-von Neumann decomposition");
    decompose_cmd->add_option("matching", matching_path)->required();

    auto* envy_cmd = app.add_subcommand("envy-graph", "envy graph of one side under a matching");
    envy_cmd->add_option("instance", instance_path)->required();
    envy_cmd->add_option("matching", matching_path, "omit when the first input is an envelope");
    envy_cmd->add_option("--side", side_name_arg, "men | women");
    envy_cmd->add_flag("--dot", want_dot, "emit Graphviz DOT instead of JSON");

    auto* audit_cmd = app.add_subcommand("audit-ic", "incentive-compatibility audit");
    audit_cmd->add_option("instance", instance_path)->required();
    audit_cmd->add_option("--mechanism", mechanism, "gs-men | gs-women | envy-frac");
    audit_cmd->add_option("--family", family_name, "perm | grid | combined");
    audit_cmd->add_option("--coalition", coalition_csv, "audit a coalition, e.g. m0,w2");
    audit_cmd->add_option("--grid", grid_csv, "comma-separated grid values");
    audit_cmd->add_option("--jobs", jobs, "parallel agents");

    auto* gen_cmd = app.add_subcommand("gen", "seeded instance generation");
    gen_cmd->add_option("--n", gen_n)->required();
    gen_cmd->add_option("--seed", gen_seed);
    gen_cmd->add_option("--mode", mode_name, "uniform | no-mfp | cmfp");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (classify_cmd->parsed()) {
        const MatchingInstance inst = load_instance(instance_path);
        emit(cmfp_result_to_json(cmfp_matching(inst)), pretty);
        return 0;
    }

    if (solve_cmd->parsed()) {
        const MatchingInstance inst = load_instance(instance_path);
        Json out;
        if (mechanism == "envy-frac") {
            const SolveTrace trace = solve(inst);
            out = Json{{"instance", instance_to_json(inst)},
                       {"matching", fractional_to_json(trace.composed)}};
            if (want_trace) out["trace"] = trace_to_json(trace);
        } else {
            const FractionalMatching mu = mechanism_by_name(mechanism).rule(inst);
            out = Json{{"instance", instance_to_json(inst)},
                       {"matching", fractional_to_json(mu)}};
            if (want_trace)
                std::cerr << "note: --trace is only meaningful for envy-frac\n";
        }
        emit(out, pretty);
        return 0;
    }

    if (verify_cmd->parsed()) {
        const Json first = parse_json(read_input(instance_path));
        Json instance_json = first, matching_json;
        if (matching_path.empty()) {
            if (!first.is_object() || !first.contains("instance") || !first.contains("matching"))
                throw ParseError("verify with one input needs an {instance, matching} envelope");
            instance_json = first["instance"];
            matching_json = first["matching"];
        } else {
            matching_json = parse_json(read_input(matching_path));
        }
        MatchingInstance inst = instance_from_json(
            instance_json.is_object() && instance_json.contains("instance")
                ? instance_json["instance"]
                : instance_json);
        const ValidationReport vr = validate(inst);
        if (!vr.ok())
            throw ValidationError("instance violates strict-preference invariants", vr.messages());
        const FractionalMatching mu = as_fractional(matching_from_json(matching_json, inst.n));
        const StabilityReport report = is_stable(inst, mu);
        emit(stability_to_json(report), pretty);
        return report.stable ? 0 : 1;
    }

    if (decompose_cmd->parsed()) {
        Json j = parse_json(read_input(matching_path));
        if (j.is_object() && j.contains("matching")) j = j["matching"];
        if (!j.is_array() || j.empty()) throw ParseError("expected a weight matrix");
        const int n = static_cast<int>(j.size());
        const FractionalMatching mu = fractional_from_json(j, n);
        emit(decomposition_to_json(bvn_decompose(mu)), pretty);
        return 0;
    }

    if (envy_cmd->parsed()) {
        const Json first = parse_json(read_input(instance_path));
        Json matching_json;
        if (matching_path.empty()) {
            if (!first.is_object() || !first.contains("matching"))
                throw ParseError("envy-graph with one input needs an {instance, matching} envelope");
            matching_json = first["matching"];
        } else {
            matching_json = parse_json(read_input(matching_path));
        }
        Json instance_json =
            first.is_object() && first.contains("instance") ? first["instance"] : first;
        MatchingInstance inst = instance_from_json(instance_json);
        const ValidationReport vr = validate(inst);
        if (!vr.ok())
            throw ValidationError("instance violates strict-preference invariants", vr.messages());
        Side side;
        if (side_name_arg == "men")
            side = Side::Men;
        else if (side_name_arg == "women")
            side = Side::Women;
        else
            throw ParseError("unknown side: " + side_name_arg);
        const FractionalMatching mu = as_fractional(matching_from_json(matching_json, inst.n));
        const EnvyGraph g = build_envy_graph(inst, mu, side);
        if (want_dot)
            std::cout << to_dot(g);
        else
            emit(envy_graph_to_json(g), pretty);
        return 0;
    }

    if (audit_cmd->parsed()) {
        const MatchingInstance inst = load_instance(instance_path);
        const Mechanism& mech = mechanism_by_name(mechanism);
        const MisreportFamily family = parse_family(family_name, grid_csv);
        AuditOptions opts;
        opts.jobs = jobs;
        if (!coalition_csv.empty()) {
            const CoalitionRecord record =
                audit_coalition(inst, parse_coalition(coalition_csv, inst.n), mech, family, opts);
            emit(coalition_record_to_json(record), pretty);
            return record.verdict == AuditVerdict::ManipulationFound ? 1 : 0;
        }
        const AuditReport report = audit_ic(inst, mech, family, opts);
        emit(audit_report_to_json(report), pretty);
        return report.verdict == AuditVerdict::ManipulationFound ? 1 : 0;
    }

    if (gen_cmd->parsed()) {
        emit(instance_to_json(generate(gen_n, gen_seed, parse_mode(mode_name))), pretty);
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InternalInstabilityBug& e) {
        std::cerr << "internal anomaly: " << e.what() << "\n";
        return 3;
    } catch (const NumericBlowup& e) {
        std::cerr << "internal anomaly: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidMatching& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const WeightInvariantViolated& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const WeightsNotConvex& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NotDoublyStochastic& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const BoundExceeded& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const GenerationExhausted& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const FamilyTooLarge& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "internal anomaly: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal anomaly: " << e.what() << "\n";
        return 3;
    }
}
