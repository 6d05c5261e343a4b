#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace regrid {

using index_t = std::int64_t;

/// Half-open interval [begin, end) of global indices.
struct interval {
    index_t begin = 0;
    index_t end = 0;

    index_t size() const { return end - begin; }
    bool empty() const { return end <= begin; }
    bool contains(const interval& other) const {
        return begin <= other.begin && other.end <= end;
    }

    friend bool operator==(const interval&, const interval&) = default;
    friend auto operator<=>(const interval&, const interval&) = default;
};

std::ostream& operator<<(std::ostream& os, const interval& iv);

/// Rectangular piece of the global matrix.
struct block_ref {
    interval rows;
    interval cols;

    index_t n_elements() const { return rows.size() * cols.size(); }
    block_ref transposed() const { return {cols, rows}; }

    friend bool operator==(const block_ref&, const block_ref&) = default;
    friend auto operator<=>(const block_ref&, const block_ref&) = default;
};

std::ostream& operator<<(std::ostream& os, const block_ref& b);

/// Volume of a block in bytes.
inline index_t block_volume(const block_ref& b, int elem_size) {
    return b.n_elements() * elem_size;
}

/// Sorted row and column splits. Block (i, j) spans
/// rows [row_splits[i], row_splits[i+1]) and cols [col_splits[j], col_splits[j+1]).
class grid {
public:
    grid() = default;
    // Throws parse_error unless both axes are strictly increasing, start at 0
    // and have at least two entries.
    grid(std::vector<index_t> row_splits, std::vector<index_t> col_splits);

    const std::vector<index_t>& row_splits() const { return row_splits_; }
    const std::vector<index_t>& col_splits() const { return col_splits_; }

    index_t rows() const { return row_splits_.back(); }
    index_t cols() const { return col_splits_.back(); }
    int n_block_rows() const { return static_cast<int>(row_splits_.size()) - 1; }
    int n_block_cols() const { return static_cast<int>(col_splits_.size()) - 1; }
    index_t n_blocks() const { return index_t(n_block_rows()) * n_block_cols(); }

    interval row_interval(int i) const { return {row_splits_[i], row_splits_[i + 1]}; }
    interval col_interval(int j) const { return {col_splits_[j], col_splits_[j + 1]}; }
    block_ref block(int i, int j) const { return {row_interval(i), col_interval(j)}; }

    grid transposed() const { return grid(col_splits_, row_splits_); }

    friend bool operator==(const grid&, const grid&) = default;

private:
    std::vector<index_t> row_splits_{0, 1};
    std::vector<index_t> col_splits_{0, 1};
};

enum class ordering { row_major, col_major };

/// Where a block lives inside its owner's local buffer.
struct storage_desc {
    index_t leading_dimension = 1;
    ordering order = ordering::col_major;
    index_t offset = 0;

    // Position of local element (r, c) of the block, relative to the buffer start.
    index_t position(index_t r, index_t c) const {
        return order == ordering::col_major ? offset + r + c * leading_dimension
                                            : offset + r * leading_dimension + c;
    }

    // One past the last buffer element touched by a block of the given shape.
    index_t footprint_end(index_t n_rows, index_t n_cols) const {
        if (n_rows == 0 || n_cols == 0) return offset;
        return position(n_rows - 1, n_cols - 1) + 1;
    }

    friend bool operator==(const storage_desc&, const storage_desc&) = default;
};

/// Distributed matrix layout: a grid, the owner of every grid block and where
/// each block sits in its owner's local memory. Immutable after construction.
class layout {
public:
    layout() = default;

    // owners and storage are row-major over grid blocks.
    // Throws parse_error on owner indices out of range, leading dimensions
    // shorter than the contiguous extent, or overlapping storage within a process.
    layout(regrid::grid g, int n_procs, std::vector<int> owners,
           std::vector<storage_desc> storage, int elem_size);

    // Same, with storage packed per process (see pack_storage).
    layout(regrid::grid g, int n_procs, std::vector<int> owners, int elem_size);

    const regrid::grid& grid() const { return grid_; }
    int n_procs() const { return n_procs_; }
    int elem_size() const { return elem_size_; }
    index_t rows() const { return grid_.rows(); }
    index_t cols() const { return grid_.cols(); }

    int owner(int i, int j) const { return owners_[flat(i, j)]; }
    const storage_desc& storage(int i, int j) const { return storage_[flat(i, j)]; }
    std::span<const int> owners() const { return owners_; }
    std::span<const storage_desc> storages() const { return storage_; }

    /// Number of elements a process needs in its local buffer.
    index_t local_size(int rank) const { return local_sizes_[rank]; }

    /// Same blocks, owner p replaced by sigma[p].
    layout relabeled(std::span<const int> sigma) const;

    /// Same layout with extra processes that own nothing.
    layout with_n_procs(int n_procs) const;

    layout with_elem_size(int elem_size) const {
        return layout(grid_, n_procs_, owners_, storage_, elem_size);
    }

    friend bool operator==(const layout&, const layout&) = default;

private:
    index_t flat(int i, int j) const { return index_t(i) * grid_.n_block_cols() + j; }
    void validate_and_size();

    regrid::grid grid_;
    int n_procs_ = 1;
    std::vector<int> owners_{0};
    std::vector<storage_desc> storage_{storage_desc{}};
    std::vector<index_t> local_sizes_{1};
    int elem_size_ = 8;
};

/// Packs every process's blocks contiguously in block-column-major order.
/// Within a block elements use `order`; leading dimension is the contiguous
/// extent plus `ld_padding`.
std::vector<storage_desc> pack_storage(const grid& g, int n_procs,
                                       std::span<const int> owners,
                                       ordering order = ordering::col_major,
                                       index_t ld_padding = 0);

/// Parameters of a 2D block-cyclic distribution.
struct block_cyclic_spec {
    index_t m = 0;
    index_t n = 0;
    index_t mb = 0;
    index_t nb = 0;
    int p_rows = 0;
    int p_cols = 0;
    ordering proc_order = ordering::row_major;
    int elem_size = 8;

    int n_procs() const { return p_rows * p_cols; }
    // Process owning grid block (i, j).
    int owner_of_block(index_t i, index_t j) const {
        return proc_rank(int(i % p_rows), int(j % p_cols));
    }
    int proc_rank(int pr, int pc) const {
        return proc_order == ordering::row_major ? pr * p_cols + pc : pc * p_rows + pr;
    }
    // Process owning global element (r, c).
    int owner_of_element(index_t r, index_t c) const {
        return owner_of_block(r / mb, c / nb);
    }
};

/// Splits at multiples of `block` up to `extent`; the last piece may be short.
std::vector<index_t> regular_splits(index_t extent, index_t block);

layout make_block_cyclic(const block_cyclic_spec& spec);

layout make_block_cyclic(index_t m, index_t n, index_t mb, index_t nb, int p_rows,
                         int p_cols, ordering proc_order = ordering::row_major,
                         int elem_size = 8);

/// Restricts a layout to a submatrix; the result is indexed from (0, 0) and
/// its storage descriptors point into the original local buffers.
layout truncate_to_submatrix(const layout& l, interval rows, interval cols);

} // namespace regrid
