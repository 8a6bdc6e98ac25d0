#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace tsagg::testing {

namespace {

// Optimizes objective'z over {G z <= h, E z = f} by enumerating vertices.
std::optional<VertexOptimum> enumerate(const Eigen::MatrixXd& G, const Eigen::VectorXd& h, const Eigen::MatrixXd& E,
                                       const Eigen::VectorXd& f, const Eigen::VectorXd& objective, bool maximize) {
    const Eigen::Index n = objective.size();
    const Eigen::Index need = n - E.rows();
    if (need < 0 || need > G.rows()) return std::nullopt;

    std::optional<VertexOptimum> best;
    std::vector<Eigen::VectorXd> optimal_points;
    const double tol = 1e-9;

    std::vector<Eigen::Index> pick;
    std::function<void(Eigen::Index)> recurse = [&](Eigen::Index start) {
        if (static_cast<Eigen::Index>(pick.size()) == need) {
            Eigen::MatrixXd M(n, n);
            Eigen::VectorXd r(n);
            for (Eigen::Index i = 0; i < E.rows(); ++i) {
                M.row(i) = E.row(i);
                r(i) = f(i);
            }
            for (std::size_t i = 0; i < pick.size(); ++i) {
                M.row(E.rows() + static_cast<Eigen::Index>(i)) = G.row(pick[i]);
                r(E.rows() + static_cast<Eigen::Index>(i)) = h(pick[i]);
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
            if (lu.rank() < n) return;
            const Eigen::VectorXd z = lu.solve(r);
            for (Eigen::Index i = 0; i < G.rows(); ++i) {
                if (G.row(i).dot(z) > h(i) + tol * std::max(1.0, std::abs(h(i)))) return;
            }
            const double value = objective.dot(z);
            const double scale = tol * std::max(1.0, std::abs(value));
            const bool better = !best || (maximize ? value > best->objective + scale : value < best->objective - scale);
            if (better) {
                best = VertexOptimum{value, z, 1};
                optimal_points = {z};
            } else if (std::abs(value - best->objective) <= scale) {
                const bool seen = std::any_of(optimal_points.begin(), optimal_points.end(),
                                              [&](const Eigen::VectorXd& p) { return (p - z).cwiseAbs().maxCoeff() <= 1e-9; });
                if (!seen) {
                    optimal_points.push_back(z);
                    best->optimal_vertices = optimal_points.size();
                }
            }
            return;
        }
        for (Eigen::Index i = start; i < G.rows(); ++i) {
            pick.push_back(i);
            recurse(i + 1);
            pick.pop_back();
        }
    };
    recurse(0);
    return best;
}

}  // namespace

std::optional<VertexOptimum> vertex_primal(const LpStandardForm& lp) {
    const auto m = static_cast<Eigen::Index>(lp.rows());
    const auto n = static_cast<Eigen::Index>(lp.cols());
    std::vector<Eigen::Index> eq, le, ge;
    for (Eigen::Index i = 0; i < m; ++i) {
        switch (lp.row_kind[static_cast<std::size_t>(i)]) {
            case RowKind::equal: eq.push_back(i); break;
            case RowKind::less_equal: le.push_back(i); break;
            case RowKind::greater_equal: ge.push_back(i); break;
        }
    }
    const auto ineq = static_cast<Eigen::Index>(le.size() + ge.size()) + n;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ineq, n);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(ineq);
    Eigen::Index r = 0;
    for (Eigen::Index i : le) {
        G.row(r) = lp.matrix.row(i);
        h(r++) = lp.rhs(i);
    }
    for (Eigen::Index i : ge) {
        G.row(r) = -lp.matrix.row(i);
        h(r++) = -lp.rhs(i);
    }
    for (Eigen::Index j = 0; j < n; ++j) G(r++, j) = -1.0;
    Eigen::MatrixXd E(static_cast<Eigen::Index>(eq.size()), n);
    Eigen::VectorXd f(static_cast<Eigen::Index>(eq.size()));
    for (std::size_t k = 0; k < eq.size(); ++k) {
        E.row(static_cast<Eigen::Index>(k)) = lp.matrix.row(eq[k]);
        f(static_cast<Eigen::Index>(k)) = lp.rhs(eq[k]);
    }
    return enumerate(G, h, E, f, lp.cost, false);
}

std::optional<VertexOptimum> vertex_dual(const LpStandardForm& lp) {
    const auto m = static_cast<Eigen::Index>(lp.rows());
    const auto n = static_cast<Eigen::Index>(lp.cols());
    Eigen::Index signed_rows = 0;
    for (RowKind k : lp.row_kind) signed_rows += k != RowKind::equal;

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + signed_rows, m);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(n + signed_rows);
    G.topRows(n) = lp.matrix.transpose();
    h.head(n) = lp.cost;
    Eigen::Index r = n;
    for (Eigen::Index i = 0; i < m; ++i) {
        const RowKind k = lp.row_kind[static_cast<std::size_t>(i)];
        if (k == RowKind::less_equal) G(r++, i) = 1.0;        // y_i <= 0
        if (k == RowKind::greater_equal) G(r++, i) = -1.0;    // y_i >= 0
    }
    return enumerate(G, h, Eigen::MatrixXd(0, m), Eigen::VectorXd(0), lp.rhs, true);
}

BigInt stirling2_explicit(std::size_t n, std::size_t k) {
    // Pascal's triangle row k.
    std::vector<BigInt> choose{1};
    for (std::size_t r = 1; r <= k; ++r) {
        std::vector<BigInt> next(r + 1, 1);
        for (std::size_t j = 1; j < r; ++j) next[j] = choose[j - 1] + choose[j];
        choose = std::move(next);
    }
    BigInt sum = 0;
    for (std::size_t j = 0; j <= k; ++j) {
        BigInt term = choose[j] * boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(n));
        if ((k - j) % 2) {
            sum -= term;
        } else {
            sum += term;
        }
    }
    BigInt fact = 1;
    for (std::size_t i = 2; i <= k; ++i) fact *= i;
    return sum / fact;
}

std::vector<std::vector<std::vector<std::size_t>>> all_partitions(std::size_t n) {
    std::vector<std::vector<std::vector<std::size_t>>> out;
    std::vector<std::vector<std::size_t>> current;
    std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (i == n) {
            out.push_back(current);
            return;
        }
        for (std::size_t b = 0; b < current.size(); ++b) {
            current[b].push_back(i);
            place(i + 1);
            current[b].pop_back();
        }
        current.push_back({i});
        place(i + 1);
        current.pop_back();
    };
    if (n > 0) place(0);
    return out;
}

}  // namespace tsagg::testing
