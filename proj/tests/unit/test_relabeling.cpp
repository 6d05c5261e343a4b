#include <regrid/errors.hpp>
#include <regrid/relabeling.hpp>

#include "random_layouts.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace regrid;

namespace {

gain_matrix random_gains(fixtures::rng_t& rng, int n, int lo, int hi) {
    std::vector<cost_t> v(std::size_t(n) * n);
    for (auto& x : v) x = fixtures::uniform_int(rng, lo, hi);
    return gain_matrix(n, std::move(v));
}

// Best total over all n! permutations, enumerated independently of the solver.
cost_t exhaustive_best(const gain_matrix& gm) {
    std::vector<int> p = identity_permutation(gm.size());
    cost_t best = total_gain(gm, p);
    while (std::next_permutation(p.begin(), p.end())) best = std::max(best, total_gain(gm, p));
    return best;
}

bool is_permutation_of_n(const std::vector<int>& s, int n) {
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    return sorted == identity_permutation(n);
}

} // namespace

TEST(Solvers, TwoByTwo) {
    const gain_matrix gm(2, {1, 5, 3, 2});
    for (auto solver : {lap_solver::exact, lap_solver::greedy, lap_solver::brute_force}) {
        const auto r = solve_lap(gm, solver);
        EXPECT_EQ(r.sigma, (std::vector<int>{1, 0})) << to_string(solver);
        EXPECT_EQ(r.total_gain, 8) << to_string(solver);
        EXPECT_EQ(r.solver, solver);
    }
}

TEST(Solvers, NoImprovingRelabel) {
    const gain_matrix zero(4, std::vector<cost_t>(16, 0));
    EXPECT_TRUE(solve_lap_greedy(zero).is_identity());
    EXPECT_EQ(solve_lap_greedy(zero).total_gain, 0);

    // Zero diagonal, all off-diagonal gains negative.
    std::vector<cost_t> v(9, -3);
    for (int j = 0; j < 3; ++j) v[std::size_t(j) * 4] = 0;
    const gain_matrix neg(3, v);
    for (auto solver : {lap_solver::exact, lap_solver::greedy, lap_solver::brute_force}) {
        const auto r = solve_lap(neg, solver);
        EXPECT_TRUE(r.is_identity()) << to_string(solver);
        EXPECT_EQ(r.total_gain, 0);
    }
}

TEST(Solvers, SingleProcess) {
    const gain_matrix gm(1, {0});
    EXPECT_EQ(solve_lap_bruteforce(gm).sigma, (std::vector<int>{0}));
    EXPECT_EQ(solve_lap_exact(gm).sigma, (std::vector<int>{0}));
}

TEST(Solvers, ExactMatchesExhaustive) {
    fixtures::rng_t rng(12);
    for (int t = 0; t < 1000; ++t) {
        const int n = fixtures::uniform_int(rng, 1, 7);
        const auto gm = random_gains(rng, n, -50, 50);
        const cost_t best = exhaustive_best(gm);
        const auto exact = solve_lap_exact(gm);
        const auto brute = solve_lap_bruteforce(gm);
        ASSERT_TRUE(is_permutation_of_n(exact.sigma, n));
        ASSERT_EQ(exact.total_gain, best);
        ASSERT_EQ(total_gain(gm, exact.sigma), best);
        ASSERT_EQ(brute.total_gain, best);
    }
}

TEST(Solvers, BruteForceTieBreakIsLexicographic) {
    const gain_matrix gm(3, std::vector<cost_t>(9, 1));
    EXPECT_TRUE(solve_lap_bruteforce(gm).is_identity());
    const gain_matrix two(2, {0, 0, 0, 0});
    EXPECT_EQ(solve_lap_bruteforce(two).sigma, (std::vector<int>{0, 1}));
}

TEST(Solvers, GreedyHalfApproximation) {
    fixtures::rng_t rng(13);
    for (int t = 0; t < 1000; ++t) {
        const int n = fixtures::uniform_int(rng, 1, 7);
        const auto gm = random_gains(rng, n, 0, 50);
        const auto g = solve_lap_greedy(gm);
        ASSERT_TRUE(is_permutation_of_n(g.sigma, n));
        ASSERT_EQ(g.total_gain, total_gain(gm, g.sigma));
        ASSERT_GE(2 * g.total_gain, solve_lap_exact(gm).total_gain);
    }
}

TEST(Solvers, GreedyNeverBelowIdentity) {
    fixtures::rng_t rng(14);
    for (int t = 0; t < 1000; ++t) {
        const int n = fixtures::uniform_int(rng, 1, 9);
        auto gm = random_gains(rng, n, -50, 50);
        for (int j = 0; j < n; ++j) gm(j, j) = 0;
        ASSERT_GE(solve_lap_greedy(gm).total_gain, 0);
    }
}

TEST(Solvers, GreedyOrder) {
    // Ties at 4 resolve to (0, 2) before (1, 2); row 1 then takes column 0.
    const gain_matrix gm(3, {0, 1, 4, 2, 0, 4, 0, 3, 0});
    const auto r = solve_lap_greedy(gm);
    EXPECT_EQ(r.sigma, (std::vector<int>{2, 0, 1}));
    EXPECT_EQ(r.total_gain, 4 + 2 + 3);
}

TEST(Solvers, ShiftInvariance) {
    fixtures::rng_t rng(15);
    for (int t = 0; t < 300; ++t) {
        const int n = fixtures::uniform_int(rng, 1, 7);
        const auto gm = random_gains(rng, n, -50, 50);
        const cost_t shift = fixtures::uniform_int(rng, -100, 100);
        std::vector<cost_t> shifted(gm.values().begin(), gm.values().end());
        for (auto& x : shifted) x += shift;
        const gain_matrix gs(n, shifted);
        const auto base = solve_lap_exact(gm);
        const auto moved = solve_lap_exact(gs);
        ASSERT_EQ(moved.total_gain, base.total_gain + n * shift);
        ASSERT_EQ(total_gain(gs, moved.sigma), moved.total_gain);
        ASSERT_EQ(total_gain(gm, moved.sigma), base.total_gain);
    }
}

TEST(Solvers, BruteForceGuard) {
    const gain_matrix gm(max_brute_force_size + 1,
                         std::vector<cost_t>(std::size_t((max_brute_force_size + 1) * (max_brute_force_size + 1)), 0));
    EXPECT_THROW(solve_lap_bruteforce(gm), resource_error);
    EXPECT_NO_THROW(solve_lap_exact(gm));
}

TEST(Solvers, Names) {
    EXPECT_EQ(parse_solver("exact"), lap_solver::exact);
    EXPECT_EQ(parse_solver("greedy"), lap_solver::greedy);
    EXPECT_EQ(parse_solver("brute"), lap_solver::brute_force);
    EXPECT_THROW(parse_solver("simplex"), parse_error);
}

TEST(FindCopr, AlignedIsIdentity) {
    const auto s = package_set::from_volumes(3, {4, 0, 0, 0, 5, 0, 0, 0, 6});
    const auto r = find_copr(s, cost_model::locally_free_volume(), lap_solver::exact);
    EXPECT_TRUE(r.is_identity());
    EXPECT_EQ(r.total_gain, 0);
}

TEST(FindCopr, PermutationTrafficBecomesLocal) {
    fixtures::rng_t rng(16);
    const auto m = cost_model::locally_free_volume();
    for (int t = 0; t < 100; ++t) {
        const int n = fixtures::uniform_int(rng, 1, 12);
        const auto pi = fixtures::random_permutation(rng, n);
        package_set s(n);
        for (int i = 0; i < n; ++i) s.add_volume(i, pi[std::size_t(i)], fixtures::uniform_int(rng, 1, 100));
        const comm_graph g(s);
        for (auto solver : {lap_solver::exact, lap_solver::greedy}) {
            const auto r = find_copr(s, m, solver);
            ASSERT_EQ(relabeled_cost(m, g, r.sigma), 0);
            // Destination pi(i) is renamed back to i.
            for (int i = 0; i < n; ++i) ASSERT_EQ(r.sigma[std::size_t(pi[std::size_t(i)])], i);
        }
    }
}

TEST(FindCopr, ThreeProcessInstance) {
    const auto s = package_set::from_volumes(3, {0, 5, 0, 2, 0, 0, 0, 0, 7});
    const auto r = find_copr(s, cost_model::locally_free_volume(), lap_solver::exact);
    EXPECT_EQ(r.sigma, (std::vector<int>{1, 0, 2}));
    EXPECT_EQ(r.total_gain, 7);
}

TEST(FindCopr, JointSumsGains) {
    const auto a = package_set::from_volumes(2, {0, 10, 0, 0});
    const auto b = package_set::from_volumes(2, {0, 0, 0, 3});
    const auto m = cost_model::locally_free_volume();
    const auto joint = find_copr_joint({&a, &b}, m, lap_solver::exact);
    // Swapping gains 10 on a and loses 3 on b.
    EXPECT_EQ(joint.sigma, (std::vector<int>{1, 0}));
    EXPECT_EQ(joint.total_gain, 7);
    const auto c = package_set::from_volumes(3, std::vector<index_t>(9, 0));
    EXPECT_THROW(find_copr_joint({&a, &c}, m), parse_error);
}
