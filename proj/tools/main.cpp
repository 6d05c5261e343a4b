#include "commands.hpp"

#include <regrid/errors.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<regrid::index_t> parse_block_list(const std::string& text) {
    std::vector<regrid::index_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw regrid::parse_error("bad block size '" + item + "'");
        }
    }
    if (out.empty()) throw regrid::parse_error("empty block size list");
    return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    } catch (const std::logic_error&) {
        throw regrid::parse_error("grid must look like PxQ, got '" + text + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    using namespace regrid::cli;

    CLI::App app{"Plan and simulate redistribution of distributed matrices between grid layouts"};
    app.require_subcommand(1);

    plan_options plan;
    auto* plan_cmd = app.add_subcommand("plan", "Find a process relabeling and report its gain");
    plan_cmd->add_option("layout_a", plan.layout_a, "Destination layout (JSON)")->required();
    plan_cmd->add_option("layout_b", plan.layout_b, "Source layout (JSON)")->required();
    plan_cmd->add_option("--model", plan.model, "volume | topo:FILE | transform:C");
    plan_cmd->add_option("--solver", plan.solver, "greedy | exact | brute");
    plan_cmd->add_option("--op", plan.op, "n | t | c");

    run_options run;
    std::uint64_t delivery_seed = 0;
    auto* run_cmd = app.add_subcommand("run", "Execute A = alpha*op(B) + beta*A on simulated processes");
    run_cmd->add_option("layout_a", run.layout_a, "Destination layout (JSON)")->required();
    run_cmd->add_option("layout_b", run.layout_b, "Source layout (JSON)")->required();
    run_cmd->add_option("--b-data", run.b_data, "Source matrix file");
    run_cmd->add_option("--a-data", run.a_data, "Initial destination matrix file");
    run_cmd->add_option("--type", run.type, "i64 | f64 | c128 (ignored with --b-data)");
    run_cmd->add_option("--alpha", run.alpha);
    run_cmd->add_option("--beta", run.beta);
    run_cmd->add_option("--op", run.op, "n | t | c");
    run_cmd->add_flag("--relabel", run.relabel, "Relabel destination processes");
    run_cmd->add_flag("--verify", run.verify, "Compare against the dense reference");
    run_cmd->add_option("--batch", run.batch, "Number of identical jobs in one round");
    run_cmd->add_option("--model", run.model, "volume | topo:FILE | transform:C");
    run_cmd->add_option("--solver", run.solver, "greedy | exact | brute");
    run_cmd->add_option("--csv", run.csv, "Write the exchange report CSV here ('-' for stdout)");
    run_cmd->add_option("--seed", run.seed, "Seed for generated matrices");
    auto* delivery_opt = run_cmd->add_option("--delivery-seed", delivery_seed,
                                             "Deliver messages in a seeded random order");

    sweep_options sweep;
    std::string sweep_grid = "10x10";
    std::string sweep_blocks = "1,2,5,10,20,25,50,100";
    std::string sweep_solver = "greedy";
    auto* sweep_cmd = app.add_subcommand("sweep", "Remote volume before/after relabeling vs. block size");
    sweep_cmd->add_option("--m", sweep.config.m, "Matrix rows");
    sweep_cmd->add_option("--n", sweep.config.n, "Matrix columns");
    sweep_cmd->add_option("--target-block", sweep.config.target_block, "Block size of the target layout");
    sweep_cmd->add_option("--grid", sweep_grid, "Process grid PxQ");
    sweep_cmd->add_option("--blocks", sweep_blocks, "Comma-separated initial block sizes");
    sweep_cmd->add_option("--elem-size", sweep.config.elem_size, "Bytes per element");
    sweep_cmd->add_option("--solver", sweep_solver, "greedy | exact");
    sweep_cmd->add_option("--csv", sweep.csv, "Write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_parse;
    }

    try {
        if (*plan_cmd) return cmd_plan(plan, std::cout);
        if (*run_cmd) {
            if (*delivery_opt) run.delivery_seed = delivery_seed;
            return cmd_run(run, std::cout);
        }
        if (*sweep_cmd) {
            std::tie(sweep.config.p_rows, sweep.config.p_cols) = parse_grid(sweep_grid);
            sweep.config.block_sizes = parse_block_list(sweep_blocks);
            sweep.config.solver = regrid::parse_solver(sweep_solver);
            return cmd_sweep(sweep, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "regrid: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return exit_failure;
}
