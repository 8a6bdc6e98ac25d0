#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tsagg/error.hpp"
#include "tsagg/lp.hpp"

using namespace tsagg;

namespace {

LpStandardForm two_generator_lp(double demand = 8.0) {
    LpStandardForm lp;
    lp.cost = Eigen::Vector2d(1.0, 10.0);
    lp.matrix.resize(3, 2);
    lp.matrix << 1, 0,
                 0, 1,
                 1, 1;
    lp.rhs = Eigen::Vector3d(5.0, 100.0, demand);
    lp.row_kind = {RowKind::less_equal, RowKind::less_equal, RowKind::equal};
    return lp;
}

}  // namespace

TEST_CASE("single binding lower bound") {
    LpStandardForm lp;
    lp.cost = Eigen::VectorXd::Ones(1);
    lp.matrix = Eigen::MatrixXd::Ones(1, 1);
    lp.rhs = Eigen::VectorXd::Constant(1, 5.0);
    lp.row_kind = {RowKind::greater_equal};
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.primal(0) == doctest::Approx(5.0));
    CHECK(s.objective == doctest::Approx(5.0));
    CHECK(s.dual(0) == doctest::Approx(1.0));
}

TEST_CASE("two generators match the vertex oracle") {
    const LpStandardForm lp = two_generator_lp();
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::optimal);
    const auto primal = testing::vertex_primal(lp);
    const auto dual = testing::vertex_dual(lp);
    REQUIRE(primal);
    REQUIRE(dual);
    CHECK(primal->objective == doctest::Approx(35.0));
    CHECK(std::abs(s.objective - primal->objective) < 1e-12);
    CHECK((s.primal - primal->point).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(dual->objective - 35.0) < 1e-12);
    CHECK((s.dual - dual->point).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(s.dual(0) == doctest::Approx(-9.0));
    CHECK(s.dual(2) == doctest::Approx(10.0));
}

TEST_CASE("unbounded objective") {
    LpStandardForm lp;
    lp.cost = -Eigen::VectorXd::Ones(1);
    lp.matrix = Eigen::MatrixXd::Zero(1, 1);
    lp.rhs = Eigen::VectorXd::Zero(1);
    lp.row_kind = {RowKind::less_equal};
    const LpSolution s = solve_lp(lp);
    CHECK(s.status == LpStatus::unbounded);
    REQUIRE(s.ray.size() == 1);
    CHECK(s.ray(0) > 0.0);
}

TEST_CASE("infeasible system carries a certificate row") {
    LpStandardForm lp;
    lp.cost = Eigen::VectorXd::Ones(1);
    lp.matrix = Eigen::MatrixXd::Ones(2, 1);
    lp.rhs = Eigen::Vector2d(1.0, 3.0);
    lp.row_kind = {RowKind::less_equal, RowKind::greater_equal};
    const LpSolution s = solve_lp(lp);
    CHECK(s.status == LpStatus::infeasible);
    CHECK(s.infeasible_row.has_value());
}

TEST_CASE("malformed LP is rejected") {
    LpStandardForm lp = two_generator_lp();
    lp.rhs = Eigen::Vector2d(1.0, 2.0);
    CHECK_THROWS_AS(lp.validate(), ValidationError);
    CHECK_THROWS_AS(solve_lp(lp), ValidationError);
}

TEST_CASE("active set of the two generator optimum") {
    const LpStandardForm lp = two_generator_lp();
    const LpSolution s = solve_lp(lp);
    CHECK(extract_active_set(lp, s).indices == std::vector<std::size_t>{0, 2});
    CHECK(extract_active_set(lp, s).key() == "0;2");
}

TEST_CASE("interior point has an empty active set") {
    LpStandardForm lp;
    lp.cost = Eigen::Vector2d(1.0, 1.0);
    lp.matrix = Eigen::MatrixXd::Identity(2, 2);
    lp.rhs = Eigen::Vector2d(4.0, 4.0);
    lp.row_kind = {RowKind::less_equal, RowKind::less_equal};
    LpSolution s;
    s.status = LpStatus::optimal;
    s.primal = Eigen::Vector2d(1.0, 2.0);
    s.dual = Eigen::Vector2d::Zero();
    CHECK(extract_active_set(lp, s).indices.empty());
}

TEST_CASE("near-binding row within tolerance stays active") {
    LpStandardForm lp = two_generator_lp();
    const LpSolution s = solve_lp(lp);
    lp.rhs(0) += 0.5 * kTolActive * 5.0;
    CHECK(extract_active_set(lp, s).contains(0));
}

TEST_CASE("strong duality checks") {
    const LpStandardForm lp = two_generator_lp();
    LpSolution s;
    s.status = LpStatus::optimal;
    s.primal = testing::vertex_primal(lp)->point;
    s.dual = testing::vertex_dual(lp)->point;
    s.objective = lp.cost.dot(s.primal);
    CHECK(verify_strong_duality(lp, s));

    s.dual.setZero();
    CHECK_FALSE(verify_strong_duality(lp, s));

    LpStandardForm zero;
    zero.cost = Eigen::VectorXd::Zero(1);
    zero.matrix = Eigen::MatrixXd::Ones(1, 1);
    zero.rhs = Eigen::VectorXd::Zero(1);
    zero.row_kind = {RowKind::less_equal};
    const LpSolution z = solve_lp(zero);
    REQUIRE(z.status == LpStatus::optimal);
    CHECK(verify_strong_duality(zero, z));
}

TEST_CASE("solves are bit-identical") {
    const LpStandardForm lp = two_generator_lp(6.75);
    const LpSolution a = solve_lp(lp);
    const LpSolution b = solve_lp(lp);
    CHECK(a.primal == b.primal);
    CHECK(a.dual == b.dual);
    CHECK(a.objective == b.objective);
    CHECK(extract_active_set(lp, a) == extract_active_set(lp, b));
}

TEST_CASE("random small LPs agree with vertex enumeration") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-1.0, 3.0), cost(-4.0, 6.0), rhs(1.0, 10.0);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 3, m = 4;
        LpStandardForm lp;
        lp.cost.resize(n);
        lp.matrix.resize(m, n);
        lp.rhs.resize(m);
        for (Eigen::Index j = 0; j < n; ++j) lp.cost(j) = cost(rng);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) lp.matrix(i, j) = coef(rng);
            lp.rhs(i) = rhs(rng);
            lp.row_kind.push_back(i == 0 ? RowKind::greater_equal : RowKind::less_equal);
        }
        lp.matrix.row(m - 1).setOnes();  // keeps the region bounded
        lp.rhs(0) = 0.5;

        const auto oracle = testing::vertex_primal(lp);
        const LpSolution s = solve_lp(lp);
        if (!oracle) {
            CHECK(s.status == LpStatus::infeasible);
            continue;
        }
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(std::abs(s.objective - oracle->objective) <= 1e-9 * std::max(1.0, std::abs(oracle->objective)));
        CHECK(verify_strong_duality(lp, s));
        CHECK(primal_infeasibility(lp, s.primal) <= kTolFeasibility);
        const auto dual = testing::vertex_dual(lp);
        REQUIRE(dual);
        CHECK(std::abs(dual->objective - oracle->objective) <= 1e-9 * std::max(1.0, std::abs(oracle->objective)));
        ++compared;
    }
    CHECK(compared > 100);
}

TEST_CASE("active set reproduces the primal on a non-degenerate optimum") {
    const LpStandardForm lp = two_generator_lp(6.75);
    const LpSolution s = solve_lp(lp);
    REQUIRE_FALSE(s.degenerate);
    const ActiveSet act = extract_active_set(lp, s);
    Eigen::MatrixXd M(static_cast<Eigen::Index>(act.indices.size()), 2);
    Eigen::VectorXd r(M.rows());
    for (std::size_t k = 0; k < act.indices.size(); ++k) {
        const auto i = act.indices[k];
        const auto row = static_cast<Eigen::Index>(k);
        if (i < lp.rows()) {
            M.row(row) = lp.matrix.row(static_cast<Eigen::Index>(i));
            r(row) = lp.rhs(static_cast<Eigen::Index>(i));
        } else {
            M.row(row).setZero();
            M(row, static_cast<Eigen::Index>(i - lp.rows())) = 1.0;
            r(row) = 0.0;
        }
    }
    const Eigen::VectorXd x = M.fullPivLu().solve(r);
    CHECK((x - s.primal).cwiseAbs().maxCoeff() < 1e-12);
}
