#pragma once

#include <regrid/cost.hpp>
#include <regrid/dense.hpp>
#include <regrid/relabeling.hpp>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace regrid {

/// A matrix spread over simulated processes: one local buffer per rank,
/// addressed through the layout's storage descriptors.
template <class T>
class distributed_matrix {
public:
    /// Zero-filled buffers; the contents count as uninitialized.
    explicit distributed_matrix(regrid::layout l);

    /// Distributes a dense matrix according to the layout.
    static distributed_matrix scatter(regrid::layout l, const dense_matrix<T>& m);

    /// Collects the local blocks back into a dense matrix.
    dense_matrix<T> gather() const;

    const regrid::layout& layout() const { return layout_; }
    int n_procs() const { return layout_.n_procs(); }
    std::vector<T>& local(int rank) { return local_[rank]; }
    const std::vector<T>& local(int rank) const { return local_[rank]; }
    bool initialized() const { return initialized_; }
    void mark_initialized() { initialized_ = true; }

    /// Pads to `n_procs` ranks, then hands the role (and buffer) of rank j to
    /// rank sigma[j].
    void rehome(std::span<const int> sigma, int n_procs);

private:
    regrid::layout layout_;
    std::vector<std::vector<T>> local_;
    bool initialized_ = false;
};

/// A = alpha * op(B) + beta * A with B = *src and A = *dst.
template <class T>
struct transform_job {
    const distributed_matrix<T>* src = nullptr;
    distributed_matrix<T>* dst = nullptr;
    T alpha = T(1);
    T beta = T(0);
    op_kind op = op_kind::identity;
};

/// Packages of a job for the destination layout as given (no relabeling).
package_set job_packages(const layout& dst, const layout& src, op_kind op, bool scaled);

struct pair_traffic {
    int messages = 0;
    index_t bytes = 0;   // payload bytes
    index_t blocks = 0;

    friend bool operator==(const pair_traffic&, const pair_traffic&) = default;
};

struct exchange_report {
    int n_procs = 0;
    // Keyed by (sender, receiver) after relabeling. Only remote pairs.
    std::map<std::pair<int, int>, pair_traffic> pairs;
    int messages = 0;
    index_t remote_bytes = 0;  // payload bytes crossing process boundaries
    index_t wire_bytes = 0;    // remote payload plus block headers
    index_t local_bytes = 0;   // bytes moved in place without staging
    std::vector<relabeling> relabelings;
    // W(G_sigma) under the locally-free-volume model, from planning only.
    cost_t predicted_cost = 0;

    /// CSV with header "sender,receiver,messages,bytes", one row per remote pair.
    void write_csv(std::ostream& os) const;
};

struct execute_options {
    // When set, messages are delivered in a seeded random order instead of
    // sorted (sender, receiver) order.
    std::optional<std::uint64_t> delivery_shuffle_seed;
};

/// Bytes of the header preceding each block in a message.
inline constexpr index_t block_header_bytes = 6 * sizeof(std::int64_t);

/// Runs one job. `relabel` is applied to the destination: dst is rehomed
/// before any data moves. Throws extent_error / parse_error on bad input.
template <class T>
exchange_report execute(const transform_job<T>& job, const relabeling& relabel,
                        const execute_options& opts = {});

/// Runs several jobs in one round: all blocks from one sender to one receiver
/// travel in a single message. `relabels` holds one entry shared by every job,
/// one entry per job, or nothing (identity).
template <class T>
exchange_report execute_batched(const std::vector<transform_job<T>>& jobs,
                                const std::vector<relabeling>& relabels,
                                const execute_options& opts = {});

/// W(G_sigma) of a job before any data is moved.
cost_t predict_cost(const layout& dst, const layout& src, op_kind op, bool scaled,
                    const cost_model& model, const relabeling& relabel);

extern template class distributed_matrix<double>;
extern template class distributed_matrix<std::complex<double>>;
extern template class distributed_matrix<std::int64_t>;

} // namespace regrid
