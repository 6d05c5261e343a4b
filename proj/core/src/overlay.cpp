#include <regrid/errors.hpp>
#include <regrid/overlay.hpp>

#include <algorithm>

namespace regrid {

axis_overlay overlay_axis(const std::vector<index_t>& a, const std::vector<index_t>& b) {
    if (a.back() != b.back())
        throw extent_error("grids span different extents (" + std::to_string(a.back()) +
                           " vs " + std::to_string(b.back()) + ")");
    axis_overlay out;
    out.splits.reserve(a.size() + b.size());
    out.splits.push_back(0);
    std::size_t ia = 0;
    std::size_t ib = 0;
    // Both arrays start at 0 and end at the same value; walk them in lockstep.
    while (ia + 1 < a.size() && ib + 1 < b.size()) {
        const index_t next = std::min(a[ia + 1], b[ib + 1]);
        out.splits.push_back(next);
        out.cover_a.push_back(static_cast<int>(ia));
        out.cover_b.push_back(static_cast<int>(ib));
        if (a[ia + 1] == next) ++ia;
        if (b[ib + 1] == next) ++ib;
    }
    return out;
}

overlay_grid overlay_grids(const grid& ga, const grid& gb) {
    return {overlay_axis(ga.row_splits(), gb.row_splits()),
            overlay_axis(ga.col_splits(), gb.col_splits())};
}

package_set package_set::from_volumes(int n_procs, const std::vector<index_t>& volumes) {
    if (volumes.size() != std::size_t(n_procs) * std::size_t(n_procs))
        throw parse_error("volume matrix must be n_procs x n_procs");
    package_set s(n_procs);
    for (int i = 0; i < n_procs; ++i) {
        for (int j = 0; j < n_procs; ++j) {
            const index_t v = volumes[std::size_t(i) * n_procs + j];
            if (v < 0) throw parse_error("negative package volume");
            if (v > 0) s.add_volume(i, j, v);
        }
    }
    return s;
}

void package_set::add(int src, int dst, const package_block& b, int elem_size, bool transform) {
    auto& p = packages_[{src, dst}];
    p.blocks.push_back(b);
    p.volume += block_volume(b.ref, elem_size);
    if (transform) p.transform_elements += b.ref.n_elements();
}

void package_set::add_volume(int src, int dst, index_t bytes, index_t transform_elements) {
    auto& p = packages_[{src, dst}];
    p.volume += bytes;
    p.transform_elements += transform_elements;
}

const package* package_set::find(int src, int dst) const {
    auto it = packages_.find({src, dst});
    return it == packages_.end() ? nullptr : &it->second;
}

index_t package_set::volume(int src, int dst) const {
    const auto* p = find(src, dst);
    return p ? p->volume : 0;
}

index_t package_set::total_volume() const {
    index_t v = 0;
    for (const auto& [k, p] : packages_) v += p.volume;
    return v;
}

index_t package_set::remote_volume() const {
    index_t v = 0;
    for (const auto& [k, p] : packages_) {
        if (k.first != k.second) v += p.volume;
    }
    return v;
}

std::vector<index_t> package_set::volume_matrix() const {
    std::vector<index_t> v(std::size_t(n_procs_) * n_procs_, 0);
    for (const auto& [k, p] : packages_) v[std::size_t(k.first) * n_procs_ + k.second] = p.volume;
    return v;
}

namespace {

int check_elem_size(const layout& la, const layout& lb) {
    if (la.elem_size() != lb.elem_size()) throw parse_error("layouts disagree on element size");
    return la.elem_size();
}

} // namespace

package_set build_package_set(const layout& la, const layout& lb, bool transform) {
    const int elem = check_elem_size(la, lb);
    const auto ov = overlay_grids(la.grid(), lb.grid());
    package_set s(std::max(la.n_procs(), lb.n_procs()));
    for (int i = 0; i < ov.rows.size(); ++i) {
        for (int j = 0; j < ov.cols.size(); ++j) {
            const auto [ai, aj] = ov.cover_a(i, j);
            const auto [bi, bj] = ov.cover_b(i, j);
            s.add(lb.owner(bi, bj), la.owner(ai, aj), {ov.block(i, j), false}, elem, transform);
        }
    }
    return s;
}

package_set transposed_package_set(const layout& la, const layout& lb) {
    const int elem = check_elem_size(la, lb);
    if (la.rows() != lb.cols() || la.cols() != lb.rows())
        throw extent_error("destination extent differs from the transposed source extent");
    const auto ov = overlay_grids(la.grid(), lb.grid().transposed());
    package_set s(std::max(la.n_procs(), lb.n_procs()));
    for (int i = 0; i < ov.rows.size(); ++i) {
        for (int j = 0; j < ov.cols.size(); ++j) {
            const auto [ai, aj] = ov.cover_a(i, j);
            // Block (r, c) of the transposed grid is block (c, r) of the source.
            const auto [tr, tc] = ov.cover_b(i, j);
            s.add(lb.owner(tc, tr), la.owner(ai, aj), {ov.block(i, j), true}, elem, true);
        }
    }
    return s;
}

std::vector<index_t> package_volumes(const layout& la, const layout& lb) {
    const int elem = check_elem_size(la, lb);
    const auto ov = overlay_grids(la.grid(), lb.grid());
    const int n = std::max(la.n_procs(), lb.n_procs());
    std::vector<index_t> v(std::size_t(n) * n, 0);
    for (int i = 0; i < ov.rows.size(); ++i) {
        const index_t h = ov.rows.piece(i).size();
        for (int j = 0; j < ov.cols.size(); ++j) {
            const auto [ai, aj] = ov.cover_a(i, j);
            const auto [bi, bj] = ov.cover_b(i, j);
            v[std::size_t(lb.owner(bi, bj)) * n + la.owner(ai, aj)] +=
                h * ov.cols.piece(j).size() * elem;
        }
    }
    return v;
}

std::vector<index_t> block_cyclic_volumes(const block_cyclic_spec& dst,
                                          const block_cyclic_spec& src) {
    if (dst.m != src.m || dst.n != src.n) throw extent_error("block-cyclic extents differ");
    if (dst.elem_size != src.elem_size) throw parse_error("layouts disagree on element size");
    const auto rows = overlay_axis(regular_splits(dst.m, dst.mb), regular_splits(src.m, src.mb));
    const auto cols = overlay_axis(regular_splits(dst.n, dst.nb), regular_splits(src.n, src.nb));

    // Owners are separable, so volumes factor into per-axis process-coordinate
    // histograms: height[src_prow][dst_prow] and width[src_pcol][dst_pcol].
    std::vector<index_t> height(std::size_t(src.p_rows) * dst.p_rows, 0);
    for (int k = 0; k < rows.size(); ++k) {
        height[std::size_t(rows.cover_b[k] % src.p_rows) * dst.p_rows + rows.cover_a[k] % dst.p_rows] +=
            rows.piece(k).size();
    }
    std::vector<index_t> width(std::size_t(src.p_cols) * dst.p_cols, 0);
    for (int k = 0; k < cols.size(); ++k) {
        width[std::size_t(cols.cover_b[k] % src.p_cols) * dst.p_cols + cols.cover_a[k] % dst.p_cols] +=
            cols.piece(k).size();
    }

    const int n = std::max(dst.n_procs(), src.n_procs());
    std::vector<index_t> v(std::size_t(n) * n, 0);
    for (int sr = 0; sr < src.p_rows; ++sr) {
        for (int dr = 0; dr < dst.p_rows; ++dr) {
            const index_t h = height[std::size_t(sr) * dst.p_rows + dr];
            if (h == 0) continue;
            for (int sc = 0; sc < src.p_cols; ++sc) {
                for (int dc = 0; dc < dst.p_cols; ++dc) {
                    const index_t w = width[std::size_t(sc) * dst.p_cols + dc];
                    if (w == 0) continue;
                    v[std::size_t(src.proc_rank(sr, sc)) * n + dst.proc_rank(dr, dc)] +=
                        h * w * dst.elem_size;
                }
            }
        }
    }
    return v;
}

} // namespace regrid
