#include <regrid/engine.hpp>
#include <regrid/errors.hpp>

#include "random_layouts.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace regrid;

namespace {

using i64 = std::int64_t;

dense_matrix<i64> from_rows(std::vector<std::vector<i64>> rows) {
    dense_matrix<i64> m(index_t(rows.size()), index_t(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(index_t(r), index_t(c)) = rows[r][c];
    return m;
}

// alpha * op(b) + beta * a, element by element.
template <class T>
dense_matrix<T> expected_result(T alpha, op_kind op, const dense_matrix<T>& b, T beta,
                                const dense_matrix<T>& a) {
    dense_matrix<T> out(a.rows(), a.cols());
    for (index_t r = 0; r < a.rows(); ++r) {
        for (index_t c = 0; c < a.cols(); ++c) {
            T x = op == op_kind::identity ? b(r, c) : b(c, r);
            if (op == op_kind::conj_transpose) x = conj_if_complex(x);
            out(r, c) = alpha * x + beta * a(r, c);
        }
    }
    return out;
}

} // namespace

TEST(Engine, CopyBetweenEqualLayouts) {
    const auto l = make_block_cyclic(6, 5, 2, 2, 2, 2);
    fixtures::rng_t rng(1);
    const auto b = fixtures::random_dense<i64>(rng, 6, 5);
    const auto src = distributed_matrix<i64>::scatter(l, b);
    distributed_matrix<i64> dst(l);
    const auto rep = execute(transform_job<i64>{&src, &dst}, identity_relabeling(4));
    EXPECT_EQ(dst.gather(), b);
    EXPECT_EQ(rep.messages, 0);
    EXPECT_EQ(rep.remote_bytes, 0);
    EXPECT_EQ(rep.local_bytes, 6 * 5 * 8);
}

TEST(Engine, ScaledTransposeSingleProcess) {
    const layout l(grid({0, 2}, {0, 2}), 1, {0}, 8);
    const auto src = distributed_matrix<i64>::scatter(l, from_rows({{1, 2}, {3, 4}}));
    distributed_matrix<i64> dst(l);
    execute(transform_job<i64>{&src, &dst, 2, 0, op_kind::transpose}, identity_relabeling(1));
    EXPECT_EQ(dst.gather(), from_rows({{2, 6}, {4, 8}}));
}

TEST(Engine, AccumulateAcrossRowSplit) {
    // Source rows split 0/1, destination rows split 1/0: every row changes owner.
    const layout lb(grid({0, 1, 2}, {0, 2}), 2, {0, 1}, 8);
    const layout la(grid({0, 1, 2}, {0, 2}), 2, {1, 0}, 8);
    const auto b = from_rows({{1, 2}, {3, 4}});
    const auto a_old = from_rows({{1, 1}, {1, 1}});
    const auto src = distributed_matrix<i64>::scatter(lb, b);
    auto dst = distributed_matrix<i64>::scatter(la, a_old);
    const auto rep = execute(transform_job<i64>{&src, &dst, 1, 1}, identity_relabeling(2));
    EXPECT_EQ(dst.gather(), from_rows({{2, 3}, {4, 5}}));
    EXPECT_EQ(dst.gather(), expected_result<i64>(1, op_kind::identity, b, 1, a_old));
    EXPECT_EQ(rep.messages, 2);
    EXPECT_EQ(rep.pairs.at({0, 1}), (pair_traffic{1, 16, 1}));
    EXPECT_EQ(rep.pairs.at({1, 0}), (pair_traffic{1, 16, 1}));
    EXPECT_EQ(rep.wire_bytes, 2 * (16 + block_header_bytes));

    // Same exchange with half the rows staying put: only the moving row is sent.
    const layout lc(grid({0, 1, 2}, {0, 2}), 2, {0, 0}, 8);
    auto dst2 = distributed_matrix<i64>::scatter(lc, a_old);
    const auto rep2 = execute(transform_job<i64>{&src, &dst2, 1, 1}, identity_relabeling(2));
    EXPECT_EQ(dst2.gather(), from_rows({{2, 3}, {4, 5}}));
    EXPECT_EQ(rep2.messages, 1);
    EXPECT_EQ(rep2.pairs.count({1, 0}), 1u);
}

TEST(Engine, RelabelingMovesRolesNotValues) {
    const layout lb(grid({0, 1, 2}, {0, 2}), 2, {0, 1}, 8);
    const layout la(grid({0, 1, 2}, {0, 2}), 2, {1, 0}, 8);
    const auto b = from_rows({{1, 2}, {3, 4}});
    const auto a_old = from_rows({{5, 6}, {7, 8}});
    const auto src = distributed_matrix<i64>::scatter(lb, b);
    auto dst = distributed_matrix<i64>::scatter(la, a_old);
    const auto packages = job_packages(la, lb, op_kind::identity, false);
    const auto r = find_copr(packages, cost_model::locally_free_volume(), lap_solver::exact);
    EXPECT_EQ(r.sigma, (std::vector<int>{1, 0}));
    const auto rep = execute(transform_job<i64>{&src, &dst, 1, -1}, r);
    EXPECT_EQ(rep.remote_bytes, 0);
    EXPECT_EQ(rep.messages, 0);
    EXPECT_EQ(dst.layout(), la.relabeled(r.sigma));
    EXPECT_EQ(dst.gather(), expected_result<i64>(1, op_kind::identity, b, -1, a_old));
}

TEST(Engine, BetaNeedsInitializedDestination) {
    const auto l = make_block_cyclic(4, 4, 2, 2, 2, 1);
    const auto src = distributed_matrix<i64>::scatter(l, dense_matrix<i64>(4, 4, 1));
    distributed_matrix<i64> dst(l);
    EXPECT_THROW(execute(transform_job<i64>{&src, &dst, 1, 1}, identity_relabeling(2)), parse_error);
    EXPECT_NO_THROW(execute(transform_job<i64>{&src, &dst, 1, 0}, identity_relabeling(2)));
    EXPECT_NO_THROW(execute(transform_job<i64>{&src, &dst, 1, 1}, identity_relabeling(2)));
    EXPECT_EQ(dst.gather(), dense_matrix<i64>(4, 4, 2));
}

TEST(Engine, ExtentErrors) {
    const auto lb = make_block_cyclic(4, 6, 2, 2, 2, 1);
    const auto src = distributed_matrix<i64>::scatter(lb, dense_matrix<i64>(4, 6, 1));
    distributed_matrix<i64> same(lb);
    EXPECT_THROW(execute(transform_job<i64>{&src, &same, 1, 0, op_kind::transpose}, identity_relabeling(2)),
                 extent_error);
    distributed_matrix<i64> flipped(make_block_cyclic(6, 4, 2, 2, 2, 1));
    EXPECT_THROW(execute(transform_job<i64>{&src, &flipped}, identity_relabeling(2)), extent_error);
    EXPECT_THROW(distributed_matrix<i64>::scatter(lb, dense_matrix<i64>(6, 4)), extent_error);
    EXPECT_THROW(execute(transform_job<i64>{&src, &flipped, 1, 0, op_kind::transpose}, identity_relabeling(3)),
                 parse_error);
}

TEST(Engine, MixedProcessCountsPadToLargest) {
    const auto lb = make_block_cyclic(6, 6, 3, 3, 1, 1);
    const auto la = make_block_cyclic(6, 6, 3, 3, 2, 2);
    fixtures::rng_t rng(2);
    const auto b = fixtures::random_dense<i64>(rng, 6, 6);
    const auto src = distributed_matrix<i64>::scatter(lb, b);
    distributed_matrix<i64> dst(la);
    const auto rep = execute(transform_job<i64>{&src, &dst}, identity_relabeling(4));
    EXPECT_EQ(dst.gather(), b);
    EXPECT_EQ(rep.messages, 3);
    EXPECT_EQ(rep.remote_bytes, 27 * 8);
}

TEST(Engine, ComplexConjugateTranspose) {
    using c128 = std::complex<double>;
    fixtures::rng_t rng(3);
    const auto lb = make_block_cyclic(5, 7, 2, 3, 2, 2, ordering::row_major, 16);
    const auto la = make_block_cyclic(7, 5, 3, 1, 1, 4, ordering::col_major, 16);
    const auto b = fixtures::random_dense<c128>(rng, 5, 7);
    const auto a_old = fixtures::random_dense<c128>(rng, 7, 5);
    const auto src = distributed_matrix<c128>::scatter(lb, b);
    for (auto op : {op_kind::transpose, op_kind::conj_transpose}) {
        auto dst = distributed_matrix<c128>::scatter(la, a_old);
        const c128 alpha(2, -1), beta(0, 1);
        execute(transform_job<c128>{&src, &dst, alpha, beta, op}, identity_relabeling(4));
        EXPECT_EQ(dst.gather(), expected_result(alpha, op, b, beta, a_old));
    }
}

TEST(Engine, ConjTransposeOnRealsIsTranspose) {
    fixtures::rng_t rng(4);
    const auto lb = make_block_cyclic(4, 3, 1, 2, 2, 1);
    const auto la = make_block_cyclic(3, 4, 2, 1, 1, 2);
    const auto b = fixtures::random_dense<double>(rng, 4, 3);
    const auto src = distributed_matrix<double>::scatter(lb, b);
    distributed_matrix<double> d1(la), d2(la);
    execute(transform_job<double>{&src, &d1, 1, 0, op_kind::transpose}, {});
    execute(transform_job<double>{&src, &d2, 1, 0, op_kind::conj_transpose}, {});
    EXPECT_EQ(d1.gather(), d2.gather());
}

TEST(Engine, DoubleTransposeRoundTrip) {
    fixtures::rng_t rng(5);
    for (int t = 0; t < 50; ++t) {
        const index_t m = fixtures::uniform_int(rng, 1, 20), n = fixtures::uniform_int(rng, 1, 20);
        const int p = fixtures::uniform_int(rng, 1, 6);
        const auto lb = fixtures::random_layout(rng, m, n, p);
        const auto la = fixtures::random_layout(rng, n, m, p);
        const auto lc = fixtures::random_layout(rng, m, n, p);
        const auto b = fixtures::random_dense<i64>(rng, m, n);
        const auto src = distributed_matrix<i64>::scatter(lb, b);
        distributed_matrix<i64> mid(la), out(lc);
        execute(transform_job<i64>{&src, &mid, 1, 0, op_kind::transpose}, identity_relabeling(p));
        execute(transform_job<i64>{&mid, &out, 1, 0, op_kind::transpose}, identity_relabeling(p));
        ASSERT_EQ(out.gather(), b);
    }
}

TEST(Engine, RandomAgainstDenseReference) {
    fixtures::rng_t rng(6);
    const i64 scalars[] = {0, 1, 2, -1};
    for (int t = 0; t < 150; ++t) {
        const int p = fixtures::uniform_int(rng, 1, 8);
        const auto op = static_cast<op_kind>(fixtures::uniform_int(rng, 0, 2));
        const index_t m = fixtures::uniform_int(rng, 1, 40), n = fixtures::uniform_int(rng, 1, 40);
        const auto lb = fixtures::random_layout(rng, m, n, p);
        const auto la = op == op_kind::identity ? fixtures::random_layout(rng, m, n, fixtures::uniform_int(rng, 1, 8))
                                                : fixtures::random_layout(rng, n, m, fixtures::uniform_int(rng, 1, 8));
        const i64 alpha = scalars[fixtures::uniform_int(rng, 0, 3)];
        const i64 beta = scalars[fixtures::uniform_int(rng, 0, 3)];
        const auto b = fixtures::random_dense<i64>(rng, lb.rows(), lb.cols());
        const auto a_old = fixtures::random_dense<i64>(rng, la.rows(), la.cols());
        const auto src = distributed_matrix<i64>::scatter(lb, b);
        auto dst = distributed_matrix<i64>::scatter(la, a_old);
        const auto packages = job_packages(la, lb, op, alpha != 1);
        const auto r = find_copr(packages, cost_model::locally_free_volume(),
                                 fixtures::uniform_int(rng, 0, 1) ? lap_solver::exact : lap_solver::greedy);
        const auto rep = execute(transform_job<i64>{&src, &dst, alpha, beta, op}, r);
        ASSERT_EQ(dst.gather(), expected_result(alpha, op, b, beta, a_old));
        ASSERT_EQ(rep.remote_bytes, rep.predicted_cost);
        ASSERT_EQ(rep.remote_bytes, relabeled_cost(cost_model::locally_free_volume(), comm_graph(packages), r.sigma));
        ASSERT_LE(rep.remote_bytes, packages.remote_volume());
        ASSERT_EQ(rep.remote_bytes + rep.local_bytes, la.rows() * la.cols() * 8);
    }
}

TEST(Engine, PredictCostMatchesExecution) {
    fixtures::rng_t rng(7);
    for (int t = 0; t < 50; ++t) {
        const int p = fixtures::uniform_int(rng, 1, 8);
        const auto la = fixtures::random_layout(rng, 16, 12, p);
        const auto lb = fixtures::random_layout(rng, 16, 12, p);
        const auto m = cost_model::locally_free_volume();
        const auto r = find_copr(job_packages(la, lb, op_kind::identity, false), m);
        const cost_t predicted = predict_cost(la, lb, op_kind::identity, false, m, r);
        ASSERT_EQ(predict_cost(la, lb, op_kind::identity, false, m, identity_relabeling(p)),
                  build_package_set(la, lb).remote_volume());
        const auto src = distributed_matrix<i64>::scatter(lb, dense_matrix<i64>(16, 12, 3));
        distributed_matrix<i64> dst(la);
        ASSERT_EQ(execute(transform_job<i64>{&src, &dst}, r).remote_bytes, predicted);
    }
}

TEST(Batching, IdenticalJobsShareMessages) {
    fixtures::rng_t rng(8);
    const auto lb = make_block_cyclic(12, 10, 2, 3, 2, 2);
    const auto la = make_block_cyclic(12, 10, 3, 2, 2, 2, ordering::col_major);
    const auto b = fixtures::random_dense<i64>(rng, 12, 10);
    const auto src = distributed_matrix<i64>::scatter(lb, b);

    distributed_matrix<i64> single(la);
    const auto one = execute(transform_job<i64>{&src, &single}, identity_relabeling(4));

    std::vector<distributed_matrix<i64>> dsts(3, distributed_matrix<i64>(la));
    std::vector<transform_job<i64>> jobs;
    for (auto& d : dsts) jobs.push_back({&src, &d});
    const auto three = execute_batched(jobs, {});
    EXPECT_GT(one.messages, 0);
    EXPECT_EQ(three.messages, one.messages);
    EXPECT_EQ(three.remote_bytes, 3 * one.remote_bytes);
    for (const auto& [k, t] : one.pairs) {
        EXPECT_EQ(three.pairs.at(k).messages, 1);
        EXPECT_EQ(three.pairs.at(k).bytes, 3 * t.bytes);
    }
    for (const auto& d : dsts) EXPECT_EQ(d.gather(), b);
}

TEST(Batching, SingleJobBatchEqualsExecute) {
    const auto lb = make_block_cyclic(9, 9, 2, 2, 3, 1);
    const auto la = make_block_cyclic(9, 9, 4, 4, 1, 3);
    const auto src = distributed_matrix<i64>::scatter(lb, dense_matrix<i64>(9, 9, 7));
    distributed_matrix<i64> d1(la), d2(la);
    const auto r1 = execute(transform_job<i64>{&src, &d1}, identity_relabeling(3));
    const auto r2 = execute_batched(std::vector<transform_job<i64>>{{&src, &d2}}, {});
    EXPECT_EQ(r1.pairs, r2.pairs);
    EXPECT_EQ(r1.wire_bytes, r2.wire_bytes);
    EXPECT_EQ(d1.gather(), d2.gather());
}

TEST(Batching, DisjointPairsDoNotMerge) {
    // Job 1 moves data 0 -> 1 only, job 2 moves 2 -> 3 only.
    const layout b1(grid({0, 2}, {0, 2}), 4, {0}, 8), a1(grid({0, 2}, {0, 2}), 4, {1}, 8);
    const layout b2(grid({0, 2}, {0, 2}), 4, {2}, 8), a2(grid({0, 2}, {0, 2}), 4, {3}, 8);
    const auto s1 = distributed_matrix<i64>::scatter(b1, dense_matrix<i64>(2, 2, 1));
    const auto s2 = distributed_matrix<i64>::scatter(b2, dense_matrix<i64>(2, 2, 2));
    distributed_matrix<i64> d1(a1), d2(a2), e1(a1), e2(a2);
    const auto m1 = execute(transform_job<i64>{&s1, &d1}, {}).messages;
    const auto m2 = execute(transform_job<i64>{&s2, &d2}, {}).messages;
    const auto both = execute_batched(std::vector<transform_job<i64>>{{&s1, &e1}, {&s2, &e2}}, {});
    EXPECT_EQ(both.messages, m1 + m2);
    EXPECT_EQ(both.messages, 2);
    EXPECT_EQ(e2.gather(), dense_matrix<i64>(2, 2, 2));
}

TEST(Batching, PerJobRelabelings) {
    const layout lb(grid({0, 1, 2}, {0, 2}), 2, {0, 1}, 8);
    const layout la(grid({0, 1, 2}, {0, 2}), 2, {1, 0}, 8);
    const auto src = distributed_matrix<i64>::scatter(lb, from_rows({{1, 2}, {3, 4}}));
    distributed_matrix<i64> d1(la), d2(la);
    const relabeling swap{{1, 0}, 32, lap_solver::exact};
    const auto rep = execute_batched(std::vector<transform_job<i64>>{{&src, &d1}, {&src, &d2}},
                                     {swap, identity_relabeling(2)});
    EXPECT_EQ(rep.remote_bytes, 32);
    EXPECT_EQ(d1.gather(), from_rows({{1, 2}, {3, 4}}));
    EXPECT_EQ(d2.gather(), d1.gather());
    distributed_matrix<i64> d3(la);
    EXPECT_THROW(execute_batched(std::vector<transform_job<i64>>{{&src, &d3}},
                                 {swap, swap}),
                 parse_error);
}

TEST(Delivery, OrderDoesNotChangeResults) {
    fixtures::rng_t rng(9);
    for (int t = 0; t < 30; ++t) {
        const int p = fixtures::uniform_int(rng, 2, 8);
        const auto lb = fixtures::random_layout(rng, 20, 17, p);
        const auto la = fixtures::random_layout(rng, 17, 20, p);
        const auto b = fixtures::random_dense<double>(rng, 20, 17);
        const auto a_old = fixtures::random_dense<double>(rng, 17, 20);
        const auto src = distributed_matrix<double>::scatter(lb, b);
        auto sorted = distributed_matrix<double>::scatter(la, a_old);
        auto shuffled = distributed_matrix<double>::scatter(la, a_old);
        execute(transform_job<double>{&src, &sorted, 2, -1, op_kind::transpose}, {});
        execute_options opts;
        opts.delivery_shuffle_seed = std::uint64_t(t + 1);
        execute(transform_job<double>{&src, &shuffled, 2, -1, op_kind::transpose}, {}, opts);
        for (int r = 0; r < p; ++r) ASSERT_EQ(sorted.local(r), shuffled.local(r));
    }
}

TEST(Report, Csv) {
    const layout lb(grid({0, 1, 2}, {0, 2}), 2, {0, 1}, 8);
    const layout la(grid({0, 1, 2}, {0, 2}), 2, {1, 0}, 8);
    const auto src = distributed_matrix<i64>::scatter(lb, from_rows({{1, 2}, {3, 4}}));
    distributed_matrix<i64> dst(la);
    std::ostringstream os;
    execute(transform_job<i64>{&src, &dst}, {}).write_csv(os);
    EXPECT_EQ(os.str(), "sender,receiver,messages,bytes\n0,1,1,16\n1,0,1,16\n");
}

TEST(Ops, Names) {
    EXPECT_EQ(parse_op("n"), op_kind::identity);
    EXPECT_EQ(parse_op("t"), op_kind::transpose);
    EXPECT_EQ(parse_op("c"), op_kind::conj_transpose);
    EXPECT_THROW(parse_op("x"), parse_error);
}
