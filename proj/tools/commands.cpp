#include "commands.hpp"

#include <regrid/engine.hpp>
#include <regrid/errors.hpp>
#include <regrid/io.hpp>
#include <regrid/relabeling.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

namespace regrid::cli {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const parse_error*>(&e)) return exit_parse;
    if (dynamic_cast<const extent_error*>(&e)) return exit_extent;
    if (dynamic_cast<const verification_error*>(&e)) return exit_verify;
    if (dynamic_cast<const resource_error*>(&e)) return exit_resource;
    return exit_failure;
}

cost_model parse_model(const std::string& spec) {
    if (spec == "volume") return cost_model::locally_free_volume();
    if (spec.rfind("topo:", 0) == 0) return load_topology(spec.substr(5));
    if (spec.rfind("transform:", 0) == 0) {
        try {
            std::size_t used = 0;
            const auto c = std::stoll(spec.substr(10), &used);
            if (used != spec.size() - 10) throw std::invalid_argument(spec);
            return cost_model::transform_aware(c);
        } catch (const std::logic_error&) {
            throw parse_error("bad transform coefficient in '" + spec + "'");
        }
    }
    throw parse_error("unknown cost model '" + spec + "'");
}

namespace {

std::string format_sigma(const std::vector<int>& sigma) {
    std::string s = "[";
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (k) s += ' ';
        s += std::to_string(sigma[k]);
    }
    return s + "]";
}

std::string format_pct(double pct) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", pct);
    return buf;
}

} // namespace

int cmd_plan(const plan_options& opts, std::ostream& out) {
    const auto la = load_layout(opts.layout_a);
    const auto lb = load_layout(opts.layout_b);
    const auto op = parse_op(opts.op);
    const auto model = parse_model(opts.model);
    const auto solver = parse_solver(opts.solver);

    const auto packages = job_packages(la, lb, op, false);
    const comm_graph g(packages);
    const auto r = solve_lap(make_gain_matrix(model, g), solver);
    const cost_t before = total_cost(model, g);
    const cost_t after = relabeled_cost(model, g, r.sigma);

    out << "processes: " << packages.n_procs() << '\n'
        << "solver: " << to_string(solver) << '\n'
        << "sigma: " << format_sigma(r.sigma) << '\n'
        << "gain: " << r.total_gain << '\n'
        << "cost_before: " << before << '\n'
        << "cost_after: " << after << '\n'
        << "reduction_pct: " << format_pct(reduction_percent(before, before - r.total_gain)) << '\n';
    return exit_ok;
}

namespace {

template <class T>
T scalar_from(double x) {
    if constexpr (std::is_same_v<T, std::int64_t>) {
        if (x != std::floor(x)) throw parse_error("integer runs need integral alpha and beta");
        return static_cast<T>(x);
    } else {
        return T(x);
    }
}

// Small integer values, exactly representable in every element type.
template <class T>
dense_matrix<T> random_matrix(index_t rows, index_t cols, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(-9, 9);
    dense_matrix<T> m(rows, cols);
    for (auto& x : m.data()) {
        if constexpr (is_complex<T>::value) {
            const double re = dist(rng);
            const double im = dist(rng);
            x = T(re, im);
        } else {
            x = static_cast<T>(dist(rng));
        }
    }
    return m;
}

template <class T>
int run_typed(const run_options& opts, std::ostream& out) {
    // The element type fixes the byte size used for volumes.
    const auto la = load_layout(opts.layout_a).with_elem_size(sizeof(T));
    const auto lb = load_layout(opts.layout_b).with_elem_size(sizeof(T));
    const auto op = parse_op(opts.op);
    const auto model = parse_model(opts.model);
    const auto solver = parse_solver(opts.solver);
    if (opts.batch < 1) throw parse_error("--batch must be at least 1");
    const T alpha = scalar_from<T>(opts.alpha);
    const T beta = scalar_from<T>(opts.beta);

    std::mt19937_64 rng(opts.seed);
    const auto b_dense = opts.b_data.empty() ? random_matrix<T>(lb.rows(), lb.cols(), rng)
                                             : load_matrix<T>(opts.b_data);
    std::optional<dense_matrix<T>> a_dense;
    if (!opts.a_data.empty()) {
        a_dense = load_matrix<T>(opts.a_data);
    } else if (beta != T{}) {
        a_dense = random_matrix<T>(la.rows(), la.cols(), rng);
    }

    // Validates extents before anything is distributed.
    const auto packages = job_packages(la, lb, op, alpha != T(1));
    const relabeling r = opts.relabel ? find_copr(packages, model, solver)
                                      : identity_relabeling(packages.n_procs());

    const auto src = distributed_matrix<T>::scatter(lb, b_dense);
    std::vector<distributed_matrix<T>> dsts;
    dsts.reserve(std::size_t(opts.batch));
    for (int k = 0; k < opts.batch; ++k) {
        dsts.push_back(a_dense ? distributed_matrix<T>::scatter(la, *a_dense) : distributed_matrix<T>(la));
    }
    std::vector<transform_job<T>> jobs;
    for (auto& d : dsts) jobs.push_back({&src, &d, alpha, beta, op});

    execute_options exec;
    exec.delivery_shuffle_seed = opts.delivery_seed;
    const auto report = execute_batched(jobs, {r}, exec);

    out << "jobs: " << opts.batch << '\n'
        << "type: " << to_string(element_type_of<T>()) << '\n'
        << "op: " << to_string(op) << '\n'
        << "solver: " << to_string(r.solver) << '\n'
        << "sigma: " << format_sigma(r.sigma) << '\n'
        << "predicted_remote_bytes: " << report.predicted_cost << '\n'
        << "remote_bytes: " << report.remote_bytes << '\n'
        << "local_bytes: " << report.local_bytes << '\n'
        << "messages: " << report.messages << '\n';

    if (opts.verify) {
        const auto a_old = a_dense ? *a_dense : dense_matrix<T>(la.rows(), la.cols());
        const auto expected = reference_transform(alpha, op, b_dense, beta, a_old);
        for (const auto& d : dsts) {
            if (auto bad = first_mismatch(d.gather(), expected)) {
                throw verification_error("verification failed at (" + std::to_string(bad->first) +
                                         ", " + std::to_string(bad->second) + ")");
            }
        }
        out << "verify: ok\n";
    }

    if (opts.csv == "-") {
        report.write_csv(out);
    } else if (!opts.csv.empty()) {
        std::ofstream f(opts.csv);
        if (!f) throw parse_error("cannot write " + opts.csv);
        report.write_csv(f);
    }
    return exit_ok;
}

} // namespace

int cmd_run(const run_options& opts, std::ostream& out) {
    auto type = parse_element_type(opts.type);
    if (!opts.b_data.empty()) type = read_matrix_header(opts.b_data).type;
    switch (type) {
    case element_type::i64: return run_typed<std::int64_t>(opts, out);
    case element_type::f64: return run_typed<double>(opts, out);
    case element_type::c128: return run_typed<std::complex<double>>(opts, out);
    }
    return exit_failure;
}

int cmd_sweep(const sweep_options& opts, std::ostream& out) {
    const auto rows = volume_sweep(opts.config);
    if (opts.csv.empty()) {
        write_sweep_csv(out, rows);
    } else {
        std::ofstream f(opts.csv);
        if (!f) throw parse_error("cannot write " + opts.csv);
        write_sweep_csv(f, rows);
    }
    return exit_ok;
}

} // namespace regrid::cli
