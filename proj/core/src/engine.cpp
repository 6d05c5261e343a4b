#include <regrid/engine.hpp>
#include <regrid/errors.hpp>

#include <algorithm>
#include <cstring>
#include <ostream>
#include <random>
#include <span>
#include <tuple>

namespace regrid {

std::string_view to_string(op_kind op) {
    switch (op) {
    case op_kind::identity: return "identity";
    case op_kind::transpose: return "transpose";
    case op_kind::conj_transpose: return "conj-transpose";
    }
    return "?";
}

op_kind parse_op(std::string_view name) {
    if (name == "n" || name == "N" || name == "identity") return op_kind::identity;
    if (name == "t" || name == "T" || name == "transpose") return op_kind::transpose;
    if (name == "c" || name == "C" || name == "conj-transpose" || name == "conjugate-transpose")
        return op_kind::conj_transpose;
    throw parse_error("unknown op '" + std::string(name) + "'");
}

namespace {

int containing_piece(const std::vector<index_t>& splits, index_t x) {
    auto it = std::upper_bound(splits.begin(), splits.end(), x);
    return static_cast<int>(it - splits.begin()) - 1;
}

// Grid block of `l` containing the top-left corner of `b`.
std::pair<int, int> covering_block(const layout& l, const block_ref& b) {
    return {containing_piece(l.grid().row_splits(), b.rows.begin),
            containing_piece(l.grid().col_splits(), b.cols.begin)};
}

} // namespace

template <class T>
distributed_matrix<T>::distributed_matrix(regrid::layout l) : layout_(std::move(l)) {
    local_.resize(std::size_t(layout_.n_procs()));
    for (int p = 0; p < layout_.n_procs(); ++p) local_[p].assign(std::size_t(layout_.local_size(p)), T{});
}

template <class T>
distributed_matrix<T> distributed_matrix<T>::scatter(regrid::layout l, const dense_matrix<T>& m) {
    if (m.rows() != l.rows() || m.cols() != l.cols())
        throw extent_error("matrix data does not match the layout extent");
    distributed_matrix<T> dm(std::move(l));
    const auto& g = dm.layout_.grid();
    for (int i = 0; i < g.n_block_rows(); ++i) {
        for (int j = 0; j < g.n_block_cols(); ++j) {
            const auto b = g.block(i, j);
            const auto& s = dm.layout_.storage(i, j);
            auto& buf = dm.local_[dm.layout_.owner(i, j)];
            for (index_t r = 0; r < b.rows.size(); ++r) {
                for (index_t c = 0; c < b.cols.size(); ++c) {
                    buf[std::size_t(s.position(r, c))] = m(b.rows.begin + r, b.cols.begin + c);
                }
            }
        }
    }
    dm.initialized_ = true;
    return dm;
}

template <class T>
dense_matrix<T> distributed_matrix<T>::gather() const {
    dense_matrix<T> m(layout_.rows(), layout_.cols());
    const auto& g = layout_.grid();
    for (int i = 0; i < g.n_block_rows(); ++i) {
        for (int j = 0; j < g.n_block_cols(); ++j) {
            const auto b = g.block(i, j);
            const auto& s = layout_.storage(i, j);
            const auto& buf = local_[layout_.owner(i, j)];
            for (index_t r = 0; r < b.rows.size(); ++r) {
                for (index_t c = 0; c < b.cols.size(); ++c) {
                    m(b.rows.begin + r, b.cols.begin + c) = buf[std::size_t(s.position(r, c))];
                }
            }
        }
    }
    return m;
}

template <class T>
void distributed_matrix<T>::rehome(std::span<const int> sigma, int n_procs) {
    check_permutation(sigma, n_procs);
    if (n_procs != layout_.n_procs()) layout_ = layout_.with_n_procs(n_procs);
    local_.resize(std::size_t(n_procs));
    layout_ = layout_.relabeled(sigma);
    std::vector<std::vector<T>> moved(static_cast<std::size_t>(n_procs));
    for (int j = 0; j < n_procs; ++j) moved[sigma[j]] = std::move(local_[j]);
    local_ = std::move(moved);
}

template class distributed_matrix<double>;
template class distributed_matrix<std::complex<double>>;
template class distributed_matrix<std::int64_t>;

package_set job_packages(const layout& dst, const layout& src, op_kind op, bool scaled) {
    if (op == op_kind::identity) {
        if (dst.rows() != src.rows() || dst.cols() != src.cols())
            throw extent_error("source and destination extents differ");
        return build_package_set(dst, src, scaled);
    }
    return transposed_package_set(dst, src);
}

cost_t predict_cost(const layout& dst, const layout& src, op_kind op, bool scaled,
                    const cost_model& model, const relabeling& relabel) {
    const auto packages = job_packages(dst, src, op, scaled);
    const comm_graph g(packages);
    return relabeled_cost(model, g, relabel.sigma);
}

void exchange_report::write_csv(std::ostream& os) const {
    os << "sender,receiver,messages,bytes\n";
    for (const auto& [k, t] : pairs) os << k.first << ',' << k.second << ',' << t.messages << ',' << t.bytes << '\n';
}

namespace {

struct record {
    int job;
    package_block block;

    auto key() const {
        return std::tie(job, block.ref.rows.begin, block.ref.rows.end, block.ref.cols.begin,
                        block.ref.cols.end);
    }
};

struct message {
    int sender;
    int receiver;
    std::vector<std::byte> bytes;
};

void put_i64(std::vector<std::byte>& out, std::int64_t v) {
    const auto at = out.size();
    out.resize(at + sizeof v);
    std::memcpy(out.data() + at, &v, sizeof v);
}

std::int64_t get_i64(std::span<const std::byte> in, std::size_t& at) {
    std::int64_t v;
    std::memcpy(&v, in.data() + at, sizeof v);
    at += sizeof v;
    return v;
}

// Accessor for source region `region`: read(r, c) is the element at offset
// (r, c) within the region, taken directly from its owner's buffer.
template <class T>
auto source_reader(const distributed_matrix<T>& src, const block_ref& region) {
    const auto& l = src.layout();
    const auto [bi, bj] = covering_block(l, region);
    const auto gb = l.grid().block(bi, bj);
    const storage_desc s = l.storage(bi, bj);
    const T* buf = src.local(l.owner(bi, bj)).data();
    const index_t r0 = region.rows.begin - gb.rows.begin;
    const index_t c0 = region.cols.begin - gb.cols.begin;
    return [=](index_t r, index_t c) -> const T& { return buf[s.position(r0 + r, c0 + c)]; };
}

// Writes dst(r, c) = alpha * op(x) + beta * dst(r, c) over block `pb`, where
// value(r, c) yields the untransformed source element for destination offset (r, c).
template <class T, class V>
void apply_block(const transform_job<T>& job, const package_block& pb, V&& value) {
    auto& dst = *job.dst;
    const auto& l = dst.layout();
    const auto [ai, aj] = covering_block(l, pb.ref);
    const auto gb = l.grid().block(ai, aj);
    const auto& s = l.storage(ai, aj);
    auto& buf = dst.local(l.owner(ai, aj));
    const index_t r0 = pb.ref.rows.begin - gb.rows.begin;
    const index_t c0 = pb.ref.cols.begin - gb.cols.begin;
    const bool conj = job.op == op_kind::conj_transpose;
    const bool keep_old = job.beta != T{};
    for (index_t r = 0; r < pb.ref.rows.size(); ++r) {
        for (index_t c = 0; c < pb.ref.cols.size(); ++c) {
            T x = value(r, c);
            if (conj) x = conj_if_complex(x);
            T& d = buf[std::size_t(s.position(r0 + r, c0 + c))];
            d = keep_old ? job.alpha * x + job.beta * d : job.alpha * x;
        }
    }
}

// Source region holding the payload of a destination block.
block_ref source_region(const package_block& pb) {
    return pb.transposed ? pb.ref.transposed() : pb.ref;
}

template <class T>
void pack(const transform_job<T>& job, const record& rec, std::vector<std::byte>& out) {
    const auto& ref = rec.block.ref;
    put_i64(out, rec.job);
    put_i64(out, ref.rows.begin);
    put_i64(out, ref.rows.end);
    put_i64(out, ref.cols.begin);
    put_i64(out, ref.cols.end);
    put_i64(out, rec.block.transposed ? 1 : 0);
    const auto region = source_region(rec.block);
    const auto at = out.size();
    out.resize(at + std::size_t(region.n_elements()) * sizeof(T));
    auto* payload = out.data() + at;
    const auto read = source_reader(*job.src, region);
    std::size_t k = 0;
    for (index_t r = 0; r < region.rows.size(); ++r) {
        for (index_t c = 0; c < region.cols.size(); ++c, ++k) {
            std::memcpy(payload + k * sizeof(T), &read(r, c), sizeof(T));
        }
    }
}

template <class T>
void unpack(const std::vector<transform_job<T>>& jobs, std::span<const std::byte> in) {
    std::size_t at = 0;
    while (at < in.size()) {
        const auto job_id = get_i64(in, at);
        package_block pb;
        pb.ref.rows.begin = get_i64(in, at);
        pb.ref.rows.end = get_i64(in, at);
        pb.ref.cols.begin = get_i64(in, at);
        pb.ref.cols.end = get_i64(in, at);
        pb.transposed = get_i64(in, at) != 0;
        const auto* payload = in.data() + at;
        const index_t n_rows = pb.ref.rows.size();
        const index_t n_cols = pb.ref.cols.size();
        apply_block(jobs[std::size_t(job_id)], pb, [&](index_t r, index_t c) {
            // The payload is row-major over the source region.
            const index_t k = pb.transposed ? c * n_rows + r : r * n_cols + c;
            T x;
            std::memcpy(&x, payload + std::size_t(k) * sizeof(T), sizeof(T));
            return x;
        });
        at += std::size_t(pb.ref.n_elements()) * sizeof(T);
    }
}

template <class T>
void check_job(const transform_job<T>& job) {
    if (job.src == nullptr || job.dst == nullptr) throw parse_error("job without source or destination");
    if (static_cast<const void*>(job.src) == static_cast<const void*>(job.dst))
        throw parse_error("source and destination must be distinct matrices");
    const auto& a = job.dst->layout();
    const auto& b = job.src->layout();
    const bool trans = job.op != op_kind::identity;
    if (a.rows() != (trans ? b.cols() : b.rows()) || a.cols() != (trans ? b.rows() : b.cols()))
        throw extent_error("destination extent incompatible with op(source)");
    if (a.elem_size() != b.elem_size()) throw parse_error("layouts disagree on element size");
    if (job.beta != T{} && !job.dst->initialized())
        throw parse_error("beta != 0 requires an initialized destination");
    for (int p = 0; p < b.n_procs(); ++p) {
        if (static_cast<index_t>(job.src->local(p).size()) < b.local_size(p))
            throw parse_error("source buffer smaller than its layout requires");
    }
    for (int p = 0; p < a.n_procs(); ++p) {
        if (static_cast<index_t>(job.dst->local(p).size()) < a.local_size(p))
            throw parse_error("destination buffer smaller than its layout requires");
    }
}

} // namespace

template <class T>
exchange_report execute_batched(const std::vector<transform_job<T>>& jobs,
                                const std::vector<relabeling>& relabels,
                                const execute_options& opts) {
    if (jobs.empty()) return {};
    for (const auto& job : jobs) check_job(job);

    const auto procs_of = [](const transform_job<T>& j) {
        return std::max(j.src->n_procs(), j.dst->n_procs());
    };
    const int n = procs_of(jobs.front());
    for (const auto& job : jobs) {
        if (procs_of(job) != n) throw parse_error("batched jobs disagree on the process count");
    }
    if (!relabels.empty() && relabels.size() != 1 && relabels.size() != jobs.size())
        throw parse_error("need one relabeling per job or one shared relabeling");

    exchange_report report;
    report.n_procs = n;
    const auto model = cost_model::locally_free_volume();

    std::vector<package_set> plans;
    plans.reserve(jobs.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const auto& job = jobs[k];
        relabeling r = relabels.empty() ? identity_relabeling(n)
                                        : relabels[relabels.size() == 1 ? 0 : k];
        if (r.sigma.empty()) r = identity_relabeling(n);
        check_permutation(r.sigma, n);
        const bool scaled = job.alpha != T(1);
        report.predicted_cost += predict_cost(job.dst->layout(), job.src->layout(), job.op,
                                              scaled, model, r);
        if (!r.is_identity() || job.dst->n_procs() != n) job.dst->rehome(r.sigma, n);
        plans.push_back(job_packages(job.dst->layout(), job.src->layout(), job.op, scaled));
        report.relabelings.push_back(r);
    }

    // Per sender: local blocks are applied in place, the rest is staged per receiver.
    std::vector<message> mailbox;
    for (int sender = 0; sender < n; ++sender) {
        std::map<int, std::vector<record>> outgoing;
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            for (const auto& [key, pkg] : plans[k].packages()) {
                if (key.first != sender) continue;
                if (key.second == sender) {
                    for (const auto& pb : pkg.blocks) {
                        const auto read = source_reader(*jobs[k].src, source_region(pb));
                        apply_block(jobs[k], pb, [&](index_t r, index_t c) {
                            return pb.transposed ? read(c, r) : read(r, c);
                        });
                    }
                    report.local_bytes += pkg.volume;
                    continue;
                }
                auto& recs = outgoing[key.second];
                for (const auto& pb : pkg.blocks) recs.push_back({static_cast<int>(k), pb});
            }
        }
        for (auto& [receiver, recs] : outgoing) {
            std::sort(recs.begin(), recs.end(),
                      [](const record& a, const record& b) { return a.key() < b.key(); });
            message msg{sender, receiver, {}};
            auto& traffic = report.pairs[{sender, receiver}];
            traffic.messages = 1;
            for (const auto& rec : recs) {
                pack(jobs[std::size_t(rec.job)], rec, msg.bytes);
                const index_t payload = block_volume(rec.block.ref, jobs[std::size_t(rec.job)].src->layout().elem_size());
                traffic.bytes += payload;
                traffic.blocks += 1;
                report.remote_bytes += payload;
            }
            report.wire_bytes += static_cast<index_t>(msg.bytes.size());
            report.messages += 1;
            mailbox.push_back(std::move(msg));
        }
    }

    if (opts.delivery_shuffle_seed) {
        std::mt19937_64 rng(*opts.delivery_shuffle_seed);
        std::shuffle(mailbox.begin(), mailbox.end(), rng);
    }
    for (const auto& msg : mailbox) unpack(jobs, std::span<const std::byte>(msg.bytes));

    for (const auto& job : jobs) job.dst->mark_initialized();
    return report;
}

template <class T>
exchange_report execute(const transform_job<T>& job, const relabeling& relabel,
                        const execute_options& opts) {
    return execute_batched(std::vector<transform_job<T>>{job}, {relabel}, opts);
}

#define REGRID_INSTANTIATE(T)                                                                     \
    template exchange_report execute_batched<T>(const std::vector<transform_job<T>>&,             \
                                                const std::vector<relabeling>&,                   \
                                                const execute_options&);                          \
    template exchange_report execute<T>(const transform_job<T>&, const relabeling&,               \
                                        const execute_options&);

REGRID_INSTANTIATE(double)
REGRID_INSTANTIATE(std::complex<double>)
REGRID_INSTANTIATE(std::int64_t)

#undef REGRID_INSTANTIATE

} // namespace regrid
