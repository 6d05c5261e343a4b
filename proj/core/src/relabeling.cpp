#include <regrid/errors.hpp>
#include <regrid/relabeling.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

namespace regrid {

std::string_view to_string(lap_solver s) {
    switch (s) {
    case lap_solver::exact: return "exact";
    case lap_solver::greedy: return "greedy";
    case lap_solver::brute_force: return "brute";
    case lap_solver::identity: return "identity";
    }
    return "?";
}

lap_solver parse_solver(std::string_view name) {
    if (name == "exact" || name == "hungarian") return lap_solver::exact;
    if (name == "greedy") return lap_solver::greedy;
    if (name == "brute" || name == "brute-force") return lap_solver::brute_force;
    if (name == "identity" || name == "none") return lap_solver::identity;
    throw parse_error("unknown solver '" + std::string(name) + "'");
}

bool relabeling::is_identity() const {
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        if (sigma[j] != static_cast<int>(j)) return false;
    }
    return true;
}

relabeling identity_relabeling(int n_procs) {
    return {identity_permutation(n_procs), 0, lap_solver::identity};
}

namespace {

cost_t trace(const gain_matrix& gm) {
    cost_t t = 0;
    for (int j = 0; j < gm.size(); ++j) t += gm(j, j);
    return t;
}

} // namespace

relabeling solve_lap_exact(const gain_matrix& gm) {
    const int n = gm.size();
    if (n == 0) return {{}, 0, lap_solver::exact};

    // Minimise (max - delta), which is non-negative; a uniform shift changes
    // every perfect matching by the same n * shift.
    const cost_t hi = *std::max_element(gm.values().begin(), gm.values().end());
    auto cost = [&](int r, int c) { return hi - gm(r, c); };

    // Shortest augmenting path with potentials; rows and columns are 1-based,
    // column 0 is the virtual source.
    constexpr cost_t inf = std::numeric_limits<cost_t>::max() / 4;
    std::vector<cost_t> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> row_of(n + 1, 0), way(n + 1, 0);
    for (int r = 1; r <= n; ++r) {
        row_of[0] = r;
        int c0 = 0;
        std::vector<cost_t> min_slack(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[c0] = true;
            const int r0 = row_of[c0];
            cost_t delta = inf;
            int c1 = 0;
            for (int c = 1; c <= n; ++c) {
                if (used[c]) continue;
                const cost_t cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
                if (cur < min_slack[c]) {
                    min_slack[c] = cur;
                    way[c] = c0;
                }
                if (min_slack[c] < delta) {
                    delta = min_slack[c];
                    c1 = c;
                }
            }
            for (int c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[row_of[c]] += delta;
                    v[c] -= delta;
                } else {
                    min_slack[c] -= delta;
                }
            }
            c0 = c1;
        } while (row_of[c0] != 0);
        do {
            const int c1 = way[c0];
            row_of[c0] = row_of[c1];
            c0 = c1;
        } while (c0 != 0);
    }

    relabeling out{std::vector<int>(n), 0, lap_solver::exact};
    for (int c = 1; c <= n; ++c) out.sigma[row_of[c] - 1] = c - 1;
    out.total_gain = total_gain(gm, out.sigma);
    return out;
}

relabeling solve_lap_greedy(const gain_matrix& gm) {
    const int n = gm.size();
    std::vector<std::tuple<cost_t, int, int>> candidates;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            // Negative gains are clamped to zero, so they only enter through
            // the completion step below.
            if (gm(x, y) > 0) candidates.emplace_back(gm(x, y), x, y);
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });

    std::vector<int> sigma(n, -1);
    std::vector<bool> col_used(n, false);
    for (const auto& [w, x, y] : candidates) {
        if (sigma[x] != -1 || col_used[y]) continue;
        sigma[x] = y;
        col_used[y] = true;
    }
    int next_col = 0;
    for (int x = 0; x < n; ++x) {
        if (sigma[x] != -1) continue;
        while (col_used[next_col]) ++next_col;
        sigma[x] = next_col;
        col_used[next_col] = true;
    }

    relabeling out{std::move(sigma), 0, lap_solver::greedy};
    out.total_gain = total_gain(gm, out.sigma);
    // For a gain matrix the identity scores 0.
    if (out.total_gain < trace(gm)) {
        out.sigma = identity_permutation(n);
        out.total_gain = trace(gm);
    }
    return out;
}

relabeling solve_lap_bruteforce(const gain_matrix& gm) {
    const int n = gm.size();
    if (n > max_brute_force_size)
        throw resource_error("brute-force relabeling refused for " + std::to_string(n) +
                             " processes (limit " + std::to_string(max_brute_force_size) + ")");
    std::vector<int> perm = identity_permutation(n);
    relabeling best{perm, total_gain(gm, perm), lap_solver::brute_force};
    // next_permutation enumerates in lexicographic order, so strict improvement
    // keeps the smallest sigma among ties.
    while (std::next_permutation(perm.begin(), perm.end())) {
        cost_t g = 0;
        for (int j = 0; j < n; ++j) g += gm(j, perm[j]);
        if (g > best.total_gain) {
            best.total_gain = g;
            best.sigma = perm;
        }
    }
    return best;
}

relabeling solve_lap(const gain_matrix& gm, lap_solver solver) {
    switch (solver) {
    case lap_solver::exact: return solve_lap_exact(gm);
    case lap_solver::greedy: return solve_lap_greedy(gm);
    case lap_solver::brute_force: return solve_lap_bruteforce(gm);
    case lap_solver::identity: {
        auto r = identity_relabeling(gm.size());
        r.total_gain = trace(gm);
        return r;
    }
    }
    return identity_relabeling(gm.size());
}

relabeling find_copr(const package_set& packages, const cost_model& model, lap_solver solver) {
    const comm_graph g(packages);
    return solve_lap(make_gain_matrix(model, g), solver);
}

relabeling find_copr_joint(const std::vector<const package_set*>& packages,
                           const cost_model& model, lap_solver solver) {
    if (packages.empty()) throw parse_error("no package sets to relabel");
    const int n = packages.front()->n_procs();
    std::vector<cost_t> sum(std::size_t(n) * n, 0);
    for (const auto* s : packages) {
        if (s->n_procs() != n) throw parse_error("batched jobs disagree on the process count");
        const comm_graph g(*s);
        const auto gm = make_gain_matrix(model, g);
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += gm.values()[k];
    }
    return solve_lap(gain_matrix(n, std::move(sum)), solver);
}

} // namespace regrid
