#pragma once

#include <regrid/cost.hpp>
#include <regrid/sweep.hpp>

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>

namespace regrid::cli {

enum exit_code : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_parse = 2,
    exit_extent = 3,
    exit_verify = 4,
    exit_resource = 5,
};

/// Maps an exception thrown by a command to its exit code.
int exit_code_for(const std::exception& e);

/// "volume", "topo:FILE" or "transform:C".
cost_model parse_model(const std::string& spec);

struct plan_options {
    std::string layout_a;  // destination
    std::string layout_b;  // source
    std::string model = "volume";
    std::string solver = "greedy";
    std::string op = "n";
};

/// Prints sigma, the gain and the cost before and after relabeling.
int cmd_plan(const plan_options& opts, std::ostream& out);

struct run_options {
    std::string layout_a;
    std::string layout_b;
    std::string b_data;      // source matrix file; random when empty
    std::string a_data;      // initial destination file; random when empty and beta != 0
    std::string type = "i64";
    double alpha = 1.0;
    double beta = 0.0;
    std::string op = "n";
    bool relabel = false;
    bool verify = false;
    int batch = 1;
    std::string model = "volume";
    std::string solver = "greedy";
    std::string csv;         // report path, "-" for stdout
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> delivery_seed;
};

/// Executes the transform on the simulated runtime. Throws verification_error
/// (exit 4) naming the first differing coordinate when --verify fails.
int cmd_run(const run_options& opts, std::ostream& out);

struct sweep_options {
    sweep_config config;
    std::string csv;  // path; stdout when empty
};

int cmd_sweep(const sweep_options& opts, std::ostream& out);

} // namespace regrid::cli
