#pragma once

#include <regrid/layout.hpp>

#include <map>
#include <utility>
#include <vector>

namespace regrid {

/// Merge of two split arrays along one axis. Piece k of the overlay lies
/// inside piece cover_a[k] of the first input and cover_b[k] of the second.
struct axis_overlay {
    std::vector<index_t> splits;
    std::vector<int> cover_a;
    std::vector<int> cover_b;

    int size() const { return static_cast<int>(cover_a.size()); }
    interval piece(int k) const { return {splits[k], splits[k + 1]}; }
};

// Throws extent_error when the axes end at different positions.
axis_overlay overlay_axis(const std::vector<index_t>& a, const std::vector<index_t>& b);

/// Overlay of two grids with covers kept per axis, so the cover of overlay
/// block (i, j) in grid A is block (rows.cover_a[i], cols.cover_a[j]).
struct overlay_grid {
    axis_overlay rows;
    axis_overlay cols;

    index_t n_blocks() const { return index_t(rows.size()) * cols.size(); }
    block_ref block(int i, int j) const { return {rows.piece(i), cols.piece(j)}; }
    std::pair<int, int> cover_a(int i, int j) const { return {rows.cover_a[i], cols.cover_a[j]}; }
    std::pair<int, int> cover_b(int i, int j) const { return {rows.cover_b[i], cols.cover_b[j]}; }
};

overlay_grid overlay_grids(const grid& ga, const grid& gb);

/// One overlay block inside a package, in destination coordinates.
/// `transposed` means the payload is read from the transposed region of the source.
struct package_block {
    block_ref ref;
    bool transposed = false;

    friend bool operator==(const package_block&, const package_block&) = default;
};

struct package {
    std::vector<package_block> blocks;
    index_t volume = 0;              // bytes
    index_t transform_elements = 0;  // elements flagged for transformation

    bool empty() const { return volume == 0 && transform_elements == 0 && blocks.empty(); }
};

/// S[i][j]: what source process i sends to destination process j.
/// Only non-empty packages are stored.
class package_set {
public:
    using key = std::pair<int, int>;

    explicit package_set(int n_procs = 0) : n_procs_(n_procs) {}

    /// Volume-only package set (no block lists), from a dense row-major n x n matrix.
    static package_set from_volumes(int n_procs, const std::vector<index_t>& volumes);

    void add(int src, int dst, const package_block& b, int elem_size, bool transform);
    void add_volume(int src, int dst, index_t bytes, index_t transform_elements = 0);

    int n_procs() const { return n_procs_; }
    const std::map<key, package>& packages() const { return packages_; }
    const package* find(int src, int dst) const;
    index_t volume(int src, int dst) const;
    index_t total_volume() const;
    index_t remote_volume() const;
    std::vector<index_t> volume_matrix() const;

private:
    int n_procs_;
    std::map<key, package> packages_;
};

/// Packages for copying the source layout `lb` into the destination layout `la`:
/// overlay block b goes to S[owner_b(cover_b(b))][owner_a(cover_a(b))].
/// With `transform` every block is flagged as needing transformation on receipt.
package_set build_package_set(const layout& la, const layout& lb, bool transform = false);

/// Packages for A = op(B) with op a transposition: `lb` is overlaid transposed.
/// Every block is flagged transposed and as needing transformation.
package_set transposed_package_set(const layout& la, const layout& lb);

/// Dense n x n volume matrix of build_package_set without storing block lists.
std::vector<index_t> package_volumes(const layout& la, const layout& lb);

/// Dense volume matrix for copying block-cyclic `src` into block-cyclic `dst`,
/// computed from per-axis covers only. Cost is linear in the number of splits.
std::vector<index_t> block_cyclic_volumes(const block_cyclic_spec& dst,
                                          const block_cyclic_spec& src);

} // namespace regrid
