#pragma once

#include <regrid/cost.hpp>

#include <string_view>
#include <vector>

namespace regrid {

enum class lap_solver { exact, greedy, brute_force, identity };

std::string_view to_string(lap_solver s);
// Accepts "exact", "greedy", "brute", "brute-force", "identity". Throws parse_error.
lap_solver parse_solver(std::string_view name);

/// Process relabeling: destination process j is replaced by sigma[j].
struct relabeling {
    std::vector<int> sigma;
    cost_t total_gain = 0;
    lap_solver solver = lap_solver::identity;

    bool is_identity() const;
};

relabeling identity_relabeling(int n_procs);

/// Maximum-weight perfect matching by the Hungarian method, O(n^3).
/// Entries may be negative.
relabeling solve_lap_exact(const gain_matrix& gm);

/// Greedy matching: heaviest positive pairs first (ties lexicographic), then
/// leftover rows paired with leftover columns in index order. Falls back to the
/// identity when that is at least as good.
relabeling solve_lap_greedy(const gain_matrix& gm);

/// Exhaustive search; ties go to the lexicographically smallest sigma.
/// Throws resource_error above max_brute_force_size processes.
relabeling solve_lap_bruteforce(const gain_matrix& gm);

inline constexpr int max_brute_force_size = 10;

relabeling solve_lap(const gain_matrix& gm, lap_solver solver);

/// Communication-optimal relabeling of the destination processes of `packages`.
relabeling find_copr(const package_set& packages, const cost_model& model,
                     lap_solver solver = lap_solver::greedy);

/// One relabeling shared by several package sets over the same processes:
/// the gain matrices are summed.
relabeling find_copr_joint(const std::vector<const package_set*>& packages,
                           const cost_model& model, lap_solver solver = lap_solver::greedy);

} // namespace regrid
