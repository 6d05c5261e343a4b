#pragma once

#include <regrid/layout.hpp>
#include <regrid/relabeling.hpp>

#include <iosfwd>
#include <vector>

namespace regrid {

/// Redistribution from a block-cyclic layout with varying square block size
/// into a fixed block-cyclic target on the same process grid.
struct sweep_config {
    index_t m = 1000;
    index_t n = 1000;
    index_t target_block = 100;
    int p_rows = 10;
    int p_cols = 10;
    std::vector<index_t> block_sizes{1, 2, 5, 10, 20, 25, 50, 100};
    int elem_size = 8;
    ordering initial_order = ordering::row_major;
    ordering target_order = ordering::col_major;
    lap_solver solver = lap_solver::greedy;

    block_cyclic_spec initial(index_t block) const {
        return {m, n, block, block, p_rows, p_cols, initial_order, elem_size};
    }
    block_cyclic_spec target() const {
        return {m, n, target_block, target_block, p_rows, p_cols, target_order, elem_size};
    }
};

struct sweep_row {
    index_t block_size = 0;
    index_t volume_before = 0;  // remote bytes without relabeling
    index_t volume_after = 0;   // remote bytes after relabeling
    double reduction_pct = 0;
    std::vector<int> sigma;
};

/// Remote volume before and after relabeling for one initial block size,
/// from analytic per-axis volumes (no data and no overlay blocks are materialized).
sweep_row sweep_point(const sweep_config& cfg, index_t block);

std::vector<sweep_row> volume_sweep(const sweep_config& cfg);

/// 100 * (before - after) / before, or 0 when nothing is remote.
double reduction_percent(index_t before, index_t after);

/// Header "block_size,volume_before,volume_after_relabel,reduction_pct".
void write_sweep_csv(std::ostream& os, const std::vector<sweep_row>& rows);

} // namespace regrid
