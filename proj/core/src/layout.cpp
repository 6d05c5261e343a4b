#include <regrid/errors.hpp>
#include <regrid/layout.hpp>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

namespace regrid {

std::ostream& operator<<(std::ostream& os, const interval& iv) {
    return os << "[" << iv.begin << ", " << iv.end << ")";
}

std::ostream& operator<<(std::ostream& os, const block_ref& b) {
    return os << b.rows << "x" << b.cols;
}

namespace {

void check_splits(const std::vector<index_t>& splits, const char* axis) {
    if (splits.size() < 2)
        throw parse_error(std::string(axis) + " splits need at least two entries");
    if (splits.front() != 0)
        throw parse_error(std::string(axis) + " splits must start at 0");
    for (std::size_t i = 1; i < splits.size(); ++i) {
        if (splits[i] <= splits[i - 1])
            throw parse_error(std::string(axis) + " splits must be strictly increasing");
    }
}

} // namespace

grid::grid(std::vector<index_t> row_splits, std::vector<index_t> col_splits)
    : row_splits_(std::move(row_splits)), col_splits_(std::move(col_splits)) {
    check_splits(row_splits_, "row");
    check_splits(col_splits_, "col");
}

layout::layout(regrid::grid g, int n_procs, std::vector<int> owners,
               std::vector<storage_desc> storage, int elem_size)
    : grid_(std::move(g)), n_procs_(n_procs), owners_(std::move(owners)),
      storage_(std::move(storage)), elem_size_(elem_size) {
    validate_and_size();
}

layout::layout(regrid::grid g, int n_procs, std::vector<int> owners, int elem_size)
    : grid_(std::move(g)), n_procs_(n_procs), owners_(std::move(owners)),
      elem_size_(elem_size) {
    if (n_procs_ <= 0) throw parse_error("layout needs at least one process");
    if (static_cast<index_t>(owners_.size()) != grid_.n_blocks())
        throw parse_error("owners must have one entry per grid block");
    for (int o : owners_) {
        if (o < 0 || o >= n_procs_) throw parse_error("owner index out of range");
    }
    storage_ = pack_storage(grid_, n_procs_, owners_);
    validate_and_size();
}

void layout::validate_and_size() {
    if (n_procs_ <= 0) throw parse_error("layout needs at least one process");
    if (elem_size_ <= 0) throw parse_error("element size must be positive");
    const index_t nb = grid_.n_blocks();
    if (static_cast<index_t>(owners_.size()) != nb)
        throw parse_error("owners must have one entry per grid block");
    if (static_cast<index_t>(storage_.size()) != nb)
        throw parse_error("storage must have one entry per grid block");

    struct span_info {
        index_t begin;
        index_t end;
        index_t block;
    };
    std::vector<std::vector<span_info>> per_proc(n_procs_);
    local_sizes_.assign(n_procs_, 0);

    for (int i = 0; i < grid_.n_block_rows(); ++i) {
        for (int j = 0; j < grid_.n_block_cols(); ++j) {
            const index_t k = flat(i, j);
            const int o = owners_[k];
            if (o < 0 || o >= n_procs_) throw parse_error("owner index out of range");
            const auto& s = storage_[k];
            const index_t nr = grid_.row_interval(i).size();
            const index_t nc = grid_.col_interval(j).size();
            const index_t contiguous = s.order == ordering::col_major ? nr : nc;
            if (s.leading_dimension < contiguous)
                throw parse_error("leading dimension shorter than block extent");
            if (s.offset < 0) throw parse_error("negative storage offset");
            const index_t end = s.footprint_end(nr, nc);
            per_proc[o].push_back({s.offset, end, k});
            local_sizes_[o] = std::max(local_sizes_[o], end);
        }
    }

    // Disjoint footprints are the common case; strided blocks whose footprints
    // interleave are checked element by element.
    for (int p = 0; p < n_procs_; ++p) {
        auto& spans = per_proc[p];
        std::sort(spans.begin(), spans.end(),
                  [](const span_info& a, const span_info& b) { return a.begin < b.begin; });
        bool disjoint = true;
        for (std::size_t k = 1; k < spans.size(); ++k) {
            if (spans[k].begin < spans[k - 1].end) {
                disjoint = false;
                break;
            }
        }
        if (disjoint) continue;

        std::vector<bool> used(static_cast<std::size_t>(local_sizes_[p]), false);
        for (const auto& sp : spans) {
            const int i = static_cast<int>(sp.block / grid_.n_block_cols());
            const int j = static_cast<int>(sp.block % grid_.n_block_cols());
            const auto& s = storage_[sp.block];
            const index_t nr = grid_.row_interval(i).size();
            const index_t nc = grid_.col_interval(j).size();
            for (index_t r = 0; r < nr; ++r) {
                for (index_t c = 0; c < nc; ++c) {
                    auto pos = static_cast<std::size_t>(s.position(r, c));
                    if (used[pos]) throw parse_error("overlapping block storage on one process");
                    used[pos] = true;
                }
            }
        }
    }
}

layout layout::relabeled(std::span<const int> sigma) const {
    if (static_cast<int>(sigma.size()) != n_procs_)
        throw parse_error("relabeling size differs from process count");
    std::vector<bool> seen(sigma.size(), false);
    for (int t : sigma) {
        if (t < 0 || t >= n_procs_ || seen[std::size_t(t)]) throw parse_error("relabeling is not a permutation");
        seen[std::size_t(t)] = true;
    }
    std::vector<int> owners(owners_.size());
    std::transform(owners_.begin(), owners_.end(), owners.begin(),
                   [&](int o) { return sigma[o]; });
    return layout(grid_, n_procs_, std::move(owners), storage_, elem_size_);
}

layout layout::with_n_procs(int n_procs) const {
    if (n_procs < n_procs_) throw parse_error("cannot shrink the process count of a layout");
    return layout(grid_, n_procs, owners_, storage_, elem_size_);
}

std::vector<storage_desc> pack_storage(const grid& g, int n_procs,
                                       std::span<const int> owners, ordering order,
                                       index_t ld_padding) {
    std::vector<storage_desc> storage(owners.size());
    std::vector<index_t> next(n_procs, 0);
    const int nbc = g.n_block_cols();
    for (int j = 0; j < nbc; ++j) {
        for (int i = 0; i < g.n_block_rows(); ++i) {
            const auto k = static_cast<std::size_t>(index_t(i) * nbc + j);
            const int o = owners[k];
            const index_t nr = g.row_interval(i).size();
            const index_t nc = g.col_interval(j).size();
            const index_t ld = (order == ordering::col_major ? nr : nc) + ld_padding;
            storage[k] = {ld, order, next[o]};
            next[o] = storage[k].footprint_end(nr, nc);
        }
    }
    return storage;
}

std::vector<index_t> regular_splits(index_t extent, index_t block) {
    std::vector<index_t> splits;
    splits.reserve(static_cast<std::size_t>((extent + block - 1) / block + 1));
    for (index_t s = 0; s < extent; s += block) splits.push_back(s);
    splits.push_back(extent);
    return splits;
}

layout make_block_cyclic(const block_cyclic_spec& spec) {
    if (spec.m <= 0 || spec.n <= 0 || spec.mb <= 0 || spec.nb <= 0)
        throw parse_error("block-cyclic dimensions must be positive");
    if (spec.p_rows <= 0 || spec.p_cols <= 0)
        throw parse_error("block-cyclic process grid must be non-empty");
    regrid::grid g(regular_splits(spec.m, spec.mb), regular_splits(spec.n, spec.nb));
    std::vector<int> owners(static_cast<std::size_t>(g.n_blocks()));
    for (int i = 0; i < g.n_block_rows(); ++i) {
        for (int j = 0; j < g.n_block_cols(); ++j) {
            owners[std::size_t(index_t(i) * g.n_block_cols() + j)] = spec.owner_of_block(i, j);
        }
    }
    return layout(std::move(g), spec.n_procs(), std::move(owners), spec.elem_size);
}

layout make_block_cyclic(index_t m, index_t n, index_t mb, index_t nb, int p_rows,
                         int p_cols, ordering proc_order, int elem_size) {
    return make_block_cyclic(block_cyclic_spec{m, n, mb, nb, p_rows, p_cols, proc_order, elem_size});
}

namespace {

// Splits of `splits` clipped to `range`, shifted to start at 0, plus the index
// of the original piece each new piece came from.
std::pair<std::vector<index_t>, std::vector<int>> clip_splits(const std::vector<index_t>& splits,
                                                              interval range) {
    std::vector<index_t> out{0};
    std::vector<int> origin;
    for (std::size_t k = 0; k + 1 < splits.size(); ++k) {
        const index_t lo = std::max(splits[k], range.begin);
        const index_t hi = std::min(splits[k + 1], range.end);
        if (lo >= hi) continue;
        out.push_back(hi - range.begin);
        origin.push_back(static_cast<int>(k));
    }
    return {std::move(out), std::move(origin)};
}

} // namespace

layout truncate_to_submatrix(const layout& l, interval rows, interval cols) {
    if (rows.empty() || cols.empty()) throw parse_error("empty submatrix range");
    if (rows.begin < 0 || cols.begin < 0 || rows.end > l.rows() || cols.end > l.cols())
        throw extent_error("submatrix range outside the matrix");

    const auto& g = l.grid();
    auto [rsplits, rorigin] = clip_splits(g.row_splits(), rows);
    auto [csplits, corigin] = clip_splits(g.col_splits(), cols);
    regrid::grid ng(std::move(rsplits), std::move(csplits));

    std::vector<int> owners;
    std::vector<storage_desc> storage;
    owners.reserve(static_cast<std::size_t>(ng.n_blocks()));
    storage.reserve(owners.capacity());
    for (std::size_t i = 0; i < rorigin.size(); ++i) {
        for (std::size_t j = 0; j < corigin.size(); ++j) {
            const int oi = rorigin[i];
            const int oj = corigin[j];
            owners.push_back(l.owner(oi, oj));
            auto s = l.storage(oi, oj);
            // Local coordinates of the clipped piece's first element in the old block.
            const index_t r0 = std::max(rows.begin, g.row_splits()[oi]) - g.row_splits()[oi];
            const index_t c0 = std::max(cols.begin, g.col_splits()[oj]) - g.col_splits()[oj];
            s.offset = s.position(r0, c0);
            storage.push_back(s);
        }
    }
    return layout(std::move(ng), l.n_procs(), std::move(owners), std::move(storage),
                  l.elem_size());
}

} // namespace regrid
