#pragma once

#include <regrid/overlay.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace regrid {

/// Costs are exact integers so that gain identities hold with equality.
using cost_t = std::int64_t;

enum class cost_kind {
    locally_free_volume,  // remote: package volume, local: free
    latency_bandwidth,    // L(i, j) + B(i, j) * volume for non-empty packages
    transform_aware,      // locally-free volume + c * transformed elements
};

class cost_model {
public:
    static cost_model locally_free_volume();
    // Dense row-major n x n matrices of non-negative integers.
    static cost_model latency_bandwidth(int n_procs, std::vector<cost_t> latency,
                                        std::vector<cost_t> bandwidth);
    static cost_model transform_aware(cost_t coefficient);

    cost_kind kind() const { return kind_; }
    int n_procs() const { return n_procs_; }
    cost_t latency(int i, int j) const { return latency_[std::size_t(i) * n_procs_ + j]; }
    cost_t bandwidth(int i, int j) const { return bandwidth_[std::size_t(i) * n_procs_ + j]; }
    cost_t transform_coefficient() const { return transform_coeff_; }

    /// w(i, j, s). Zero for an empty package under every model.
    cost_t edge_cost(int i, int j, const package& s) const;
    cost_t edge_cost(int i, int j, index_t volume, index_t transform_elements = 0) const;

private:
    cost_kind kind_ = cost_kind::locally_free_volume;
    int n_procs_ = 0;
    std::vector<cost_t> latency_;
    std::vector<cost_t> bandwidth_;
    cost_t transform_coeff_ = 0;
};

/// Reads {"latency": [[...]], "bandwidth": [[...]]}. Throws parse_error.
cost_model load_topology(const std::string& path);
cost_model parse_topology(const std::string& json_text);

/// Bipartite process graph whose edges are the non-empty packages.
class comm_graph {
public:
    explicit comm_graph(const package_set& packages);
    explicit comm_graph(package_set&&) = delete;

    int n_procs() const { return packages_->n_procs(); }
    const package_set& packages() const { return *packages_; }
    const std::vector<package_set::key>& edges() const { return edges_; }
    /// Sources i with a non-empty S[i][x].
    const std::vector<int>& left_neighbors(int x) const { return left_[x]; }

private:
    const package_set* packages_;
    std::vector<package_set::key> edges_;
    std::vector<std::vector<int>> left_;
};

/// Dense n x n matrix of relabeling gains delta(x, y).
class gain_matrix {
public:
    gain_matrix() = default;
    gain_matrix(int n, std::vector<cost_t> values);

    int size() const { return n_; }
    cost_t operator()(int x, int y) const { return values_[std::size_t(x) * n_ + y]; }
    cost_t& operator()(int x, int y) { return values_[std::size_t(x) * n_ + y]; }
    std::span<const cost_t> values() const { return values_; }

private:
    int n_ = 0;
    std::vector<cost_t> values_;
};

// Throws parse_error unless sigma is a bijection on [0, n).
void check_permutation(std::span<const int> sigma, int n);
std::vector<int> identity_permutation(int n);

/// W(G): sum of edge costs.
cost_t total_cost(const cost_model& model, const comm_graph& g);

/// W(G_sigma), where edge (i, j) becomes (i, sigma[j]) carrying S[i][j].
cost_t relabeled_cost(const cost_model& model, const comm_graph& g, std::span<const int> sigma);

/// delta(x, y) = sum over left neighbors i of x of w(i, x, S[i][x]) - w(i, y, S[i][x]).
gain_matrix make_gain_matrix(const cost_model& model, const comm_graph& g);

/// Sum of delta(j, sigma[j]).
cost_t total_gain(const gain_matrix& gm, std::span<const int> sigma);

} // namespace regrid
