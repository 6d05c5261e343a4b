#include <regrid/cost.hpp>
#include <regrid/errors.hpp>
#include <regrid/overlay.hpp>
#include <regrid/sweep.hpp>

#include <cstdio>
#include <ostream>

namespace regrid {

double reduction_percent(index_t before, index_t after) {
    if (before <= 0) return 0.0;
    return 100.0 * static_cast<double>(before - after) / static_cast<double>(before);
}

sweep_row sweep_point(const sweep_config& cfg, index_t block) {
    if (block <= 0) throw parse_error("sweep block sizes must be positive");
    const auto initial = cfg.initial(block);
    const auto target = cfg.target();
    if (cfg.m <= 0 || cfg.n <= 0 || cfg.target_block <= 0 || cfg.p_rows <= 0 || cfg.p_cols <= 0)
        throw parse_error("sweep sizes must be positive");

    const int n_procs = initial.n_procs();
    const auto packages = package_set::from_volumes(n_procs, block_cyclic_volumes(target, initial));
    const auto model = cost_model::locally_free_volume();
    const comm_graph g(packages);
    const auto r = solve_lap(make_gain_matrix(model, g), cfg.solver);

    sweep_row row;
    row.block_size = block;
    row.volume_before = total_cost(model, g);
    row.volume_after = relabeled_cost(model, g, r.sigma);
    row.reduction_pct = reduction_percent(row.volume_before, row.volume_after);
    row.sigma = r.sigma;
    return row;
}

std::vector<sweep_row> volume_sweep(const sweep_config& cfg) {
    std::vector<sweep_row> rows;
    rows.reserve(cfg.block_sizes.size());
    for (index_t b : cfg.block_sizes) rows.push_back(sweep_point(cfg, b));
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<sweep_row>& rows) {
    os << "block_size,volume_before,volume_after_relabel,reduction_pct\n";
    char pct[32];
    for (const auto& r : rows) {
        std::snprintf(pct, sizeof pct, "%.6f", r.reduction_pct);
        os << r.block_size << ',' << r.volume_before << ',' << r.volume_after << ',' << pct << '\n';
    }
}

} // namespace regrid
