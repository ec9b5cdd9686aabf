/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chr/confluence.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "chr/priority.hpp"
#include "chr/refined.hpp"

namespace {

constexpr int kExitFinal = 0;
constexpr int kExitFailed = 1;
constexpr int kExitOutOfFuel = 2;
constexpr int kExitUsage = 3;

struct Options {
    std::string program_path;
    std::string query;
    std::string semantics = "r";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t fuel = -1; // -1: command default / CHR_FUEL
    bool trace = false;
    bool occurs_check = false;
    bool no_ids = false;
    bool default_priorities = false;
};

std::size_t pick_fuel(const Options& opt, std::size_t command_default) {
    if (opt.fuel >= 0) return static_cast<std::size_t>(opt.fuel);
    if (const char* env = std::getenv("CHR_FUEL")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end != env && v >= 0) return static_cast<std::size_t>(v);
    }
    return command_default;
}

chr::Program load_program(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open program file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return chr::parse_program(text.str());
}

void print_run_result(const chr::RunResult& result, const Options& opt) {
    if (opt.trace) std::cout << chr::render_trace(result.trace);
    std::string store = chr::print_store(result.state.store, result.state.bindings, !opt.no_ids);
    std::cout << (store.empty() ? "true" : store) << "\n";
    for (const std::string& line : chr::query_binding_lines(result.state))
        std::cout << line << "\n";
}

int cmd_run(const Options& opt) {
    chr::Program program = load_program(opt.program_path);
    chr::VarTable vars;
    chr::Query query = chr::parse_query(opt.query, vars);
    chr::ExecutionState initial =
        chr::make_initial_state(query.atoms, std::move(vars), query.vars, opt.occurs_check);

    chr::RunResult result;
    if (opt.semantics == "t") {
        chr::Strategy strategy =
            opt.seed_set ? chr::Strategy::random(opt.seed) : chr::Strategy::first();
        result = chr::run(program, std::move(initial), strategy,
                          pick_fuel(opt, chr::kDefaultRunFuel));
    } else if (opt.semantics == "r") {
        if (program.has_priorities())
            std::cerr << "warning: rule priorities are ignored under the refined semantics\n";
        result = chr::run_refined(program, std::move(initial),
                                  pick_fuel(opt, chr::kDefaultEngineFuel));
    } else if (opt.semantics == "p") {
        if (!program.has_priorities() && !opt.default_priorities)
            throw CLI::ValidationError(
                "--semantics p needs a prioritized program (or --default-priorities)");
        result = chr::run_priority(program, std::move(initial),
                                   pick_fuel(opt, chr::kDefaultEngineFuel));
    } else {
        throw CLI::ValidationError("unknown semantics: " + opt.semantics);
    }

    switch (result.outcome) {
        case chr::Outcome::final_state:
            print_run_result(result, opt);
            return kExitFinal;
        case chr::Outcome::failed:
            if (opt.trace) std::cout << chr::render_trace(result.trace);
            std::cout << "fail\n";
            return kExitFailed;
        case chr::Outcome::out_of_fuel:
            if (opt.trace) std::cout << chr::render_trace(result.trace);
            std::cerr << "out of fuel\n";
            return kExitOutOfFuel;
        case chr::Outcome::error:
            std::cerr << "error: " << result.error << "\n";
            return kExitUsage;
    }
    return kExitUsage;
}

int cmd_explore(const Options& opt) {
    chr::Program program = load_program(opt.program_path);
    chr::VarTable vars;
    chr::Query query = chr::parse_query(opt.query, vars);
    chr::ExecutionState initial =
        chr::make_initial_state(query.atoms, std::move(vars), query.vars, opt.occurs_check);

    chr::ExploreResult result =
        chr::explore_all(program, initial, pick_fuel(opt, chr::kDefaultExploreFuel));
    std::vector<std::string> lines;
    for (const chr::NormalForm& nf : result.normal_forms) {
        if (nf.state.failed()) {
            lines.push_back("fail");
            continue;
        }
        std::string store = chr::print_store(nf.state.store, nf.state.bindings, false);
        std::vector<std::string> binds = chr::query_binding_lines(nf.state);
        std::string line = store.empty() ? "true" : store;
        line += " ; ";
        if (binds.empty()) {
            line += "true";
        } else {
            for (std::size_t i = 0; i < binds.size(); ++i) {
                if (i > 0) line += ", ";
                line += binds[i];
            }
        }
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    for (const std::string& line : lines) std::cout << line << "\n";
    if (result.truncated) {
        std::cout << "TRUNCATED\n";
        return kExitOutOfFuel;
    }
    return kExitFinal;
}

int cmd_check(const Options& opt) {
    chr::Program program = load_program(opt.program_path);
    chr::ConfluenceReport report =
        chr::check_confluence(program, pick_fuel(opt, chr::kDefaultExploreFuel));
    std::cout << report.machine_text();
    switch (report.verdict) {
        case chr::ConfluenceReport::Verdict::confluent: return kExitFinal;
        case chr::ConfluenceReport::Verdict::non_joinable: return kExitFailed;
        case chr::ConfluenceReport::Verdict::inconclusive: return kExitOutOfFuel;
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chr - a Constraint Handling Rules engine"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool with_query) {
        cmd->add_option("program", opt.program_path, "CHR program file")->required();
        if (with_query) cmd->add_option("-q,--query", opt.query, "goal, comma-separated atoms");
        cmd->add_option("--fuel", opt.fuel, "step/state budget (env CHR_FUEL)");
        cmd->add_flag("--occurs-check", opt.occurs_check, "enable the occurs check");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run a query under a chosen semantics");
    add_common(run_cmd, true);
    run_cmd->add_option("-s,--semantics", opt.semantics, "t (theoretical), r (refined), p (priority)")
        ->check(CLI::IsMember({"t", "r", "p"}));
    run_cmd->add_option("--seed", opt.seed, "random strategy seed (semantics t)")
        ->each([&](const std::string&) { opt.seed_set = true; });
    run_cmd->add_flag("--trace", opt.trace, "print the transition trace");
    run_cmd->add_flag("--no-ids", opt.no_ids, "omit #id suffixes in the store");
    run_cmd->add_flag("--default-priorities", opt.default_priorities,
                      "give unprioritized rules priority 1 under -s p");

    CLI::App* explore_cmd = app.add_subcommand("explore", "enumerate all normal forms");
    add_common(explore_cmd, true);

    CLI::App* check_cmd = app.add_subcommand("check", "critical-pair confluence check");
    add_common(check_cmd, false);

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return cmd_run(opt);
        if (explore_cmd->parsed()) return cmd_explore(opt);
        if (check_cmd->parsed()) return cmd_check(opt);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitFinal : kExitUsage;
    } catch (const chr::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
