#include <regrid/cost.hpp>
#include <regrid/errors.hpp>

#include <json.hpp>

#include <fstream>
#include <numeric>
#include <sstream>

namespace regrid {

cost_model cost_model::locally_free_volume() { return {}; }

cost_model cost_model::latency_bandwidth(int n_procs, std::vector<cost_t> latency,
                                         std::vector<cost_t> bandwidth) {
    const auto n2 = std::size_t(n_procs) * std::size_t(n_procs);
    if (n_procs <= 0 || latency.size() != n2 || bandwidth.size() != n2)
        throw parse_error("latency and bandwidth must be n x n matrices");
    for (std::size_t k = 0; k < n2; ++k) {
        if (latency[k] < 0 || bandwidth[k] < 0) throw parse_error("topology costs must be non-negative");
    }
    cost_model m;
    m.kind_ = cost_kind::latency_bandwidth;
    m.n_procs_ = n_procs;
    m.latency_ = std::move(latency);
    m.bandwidth_ = std::move(bandwidth);
    return m;
}

cost_model cost_model::transform_aware(cost_t coefficient) {
    if (coefficient < 0) throw parse_error("transform coefficient must be non-negative");
    cost_model m;
    m.kind_ = cost_kind::transform_aware;
    m.transform_coeff_ = coefficient;
    return m;
}

cost_t cost_model::edge_cost(int i, int j, const package& s) const {
    return edge_cost(i, j, s.volume, s.transform_elements);
}

cost_t cost_model::edge_cost(int i, int j, index_t volume, index_t transform_elements) const {
    if (volume == 0 && transform_elements == 0) return 0;
    switch (kind_) {
    case cost_kind::locally_free_volume:
        return i == j ? 0 : volume;
    case cost_kind::latency_bandwidth:
        if (i >= n_procs_ || j >= n_procs_)
            throw parse_error("topology smaller than the process count");
        return latency(i, j) + bandwidth(i, j) * volume;
    case cost_kind::transform_aware:
        return (i == j ? 0 : volume) + transform_coeff_ * transform_elements;
    }
    return 0;
}

namespace {

std::vector<cost_t> read_square(const nlohmann::json& j, const char* key, int& n) {
    if (!j.contains(key) || !j[key].is_array()) throw parse_error(std::string("topology lacks ") + key);
    const auto& rows = j[key];
    if (n < 0) n = static_cast<int>(rows.size());
    if (static_cast<int>(rows.size()) != n) throw parse_error("topology matrices differ in size");
    std::vector<cost_t> out;
    out.reserve(std::size_t(n) * n);
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw parse_error(std::string(key) + " must be square");
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw parse_error(std::string(key) + " entries must be integers");
            out.push_back(v.get<cost_t>());
        }
    }
    return out;
}

} // namespace

cost_model parse_topology(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("topology: ") + e.what());
    }
    int n = -1;
    auto lat = read_square(j, "latency", n);
    auto bw = read_square(j, "bandwidth", n);
    return cost_model::latency_bandwidth(n, std::move(lat), std::move(bw));
}

cost_model load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open topology file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_topology(ss.str());
}

comm_graph::comm_graph(const package_set& packages)
    : packages_(&packages), left_(std::size_t(packages.n_procs())) {
    for (const auto& [k, p] : packages.packages()) {
        if (p.empty()) continue;
        edges_.push_back(k);
        left_[k.second].push_back(k.first);
    }
}

gain_matrix::gain_matrix(int n, std::vector<cost_t> values) : n_(n), values_(std::move(values)) {
    if (n < 0 || values_.size() != std::size_t(n) * std::size_t(n))
        throw parse_error("gain matrix must be square");
}

void check_permutation(std::span<const int> sigma, int n) {
    if (static_cast<int>(sigma.size()) != n) throw parse_error("relabeling has the wrong length");
    std::vector<bool> seen(std::size_t(n), false);
    for (int s : sigma) {
        if (s < 0 || s >= n || seen[s]) throw parse_error("relabeling is not a bijection");
        seen[s] = true;
    }
}

std::vector<int> identity_permutation(int n) {
    std::vector<int> id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    return id;
}

cost_t total_cost(const cost_model& model, const comm_graph& g) {
    cost_t w = 0;
    for (const auto& [i, j] : g.edges()) w += model.edge_cost(i, j, *g.packages().find(i, j));
    return w;
}

cost_t relabeled_cost(const cost_model& model, const comm_graph& g, std::span<const int> sigma) {
    check_permutation(sigma, g.n_procs());
    cost_t w = 0;
    for (const auto& [i, j] : g.edges()) w += model.edge_cost(i, sigma[j], *g.packages().find(i, j));
    return w;
}

gain_matrix make_gain_matrix(const cost_model& model, const comm_graph& g) {
    const int n = g.n_procs();
    const auto& s = g.packages();
    gain_matrix gm(n, std::vector<cost_t>(std::size_t(n) * n, 0));
    if (model.kind() == cost_kind::locally_free_volume) {
        // Closed form: relabeling x -> y makes S[y][x] local and S[x][x] remote.
        for (int x = 0; x < n; ++x) {
            const cost_t lost = s.volume(x, x);
            for (int y = 0; y < n; ++y) gm(x, y) = x == y ? 0 : s.volume(y, x) - lost;
        }
        return gm;
    }
    for (int x = 0; x < n; ++x) {
        for (int i : g.left_neighbors(x)) {
            const package& p = *s.find(i, x);
            const cost_t before = model.edge_cost(i, x, p);
            for (int y = 0; y < n; ++y) gm(x, y) += before - model.edge_cost(i, y, p);
        }
    }
    return gm;
}

cost_t total_gain(const gain_matrix& gm, std::span<const int> sigma) {
    check_permutation(sigma, gm.size());
    cost_t d = 0;
    for (int j = 0; j < gm.size(); ++j) d += gm(j, sigma[j]);
    return d;
}

} // namespace regrid
