#include "tsagg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tsagg/error.hpp"

namespace tsagg {

void LpStandardForm::validate() const {
    const auto m = matrix.rows();
    const auto n = matrix.cols();
    if (cost.size() != n) {
        throw ValidationError("lp: cost has " + std::to_string(cost.size()) + " entries, matrix has " +
                              std::to_string(n) + " columns");
    }
    if (rhs.size() != m) {
        throw ValidationError("lp: rhs has " + std::to_string(rhs.size()) + " entries, matrix has " +
                              std::to_string(m) + " rows");
    }
    if (static_cast<Eigen::Index>(row_kind.size()) != m) {
        throw ValidationError("lp: row_kind has " + std::to_string(row_kind.size()) + " entries, matrix has " +
                              std::to_string(m) + " rows");
    }
    if (!cost.allFinite() || !matrix.allFinite() || !rhs.allFinite()) {
        throw ValidationError("lp: non-finite coefficient");
    }
}

bool LpStandardForm::operator==(const LpStandardForm& other) const {
    return cost.size() == other.cost.size() && matrix.rows() == other.matrix.rows() &&
           matrix.cols() == other.matrix.cols() && rhs.size() == other.rhs.size() && cost == other.cost &&
           matrix == other.matrix && rhs == other.rhs && row_kind == other.row_kind;
}

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
constexpr double kPivotTol = 1e-9;

// Equality form E z = h, z >= 0, h >= 0. Columns: structural, slack, artificial.
struct EqualityForm {
    Eigen::MatrixXd E;
    Eigen::VectorXd h;
    Eigen::VectorXd sign;  // +1 or -1 per original row
    std::size_t n_struct = 0;
    std::size_t n_slack = 0;
    std::size_t n_art = 0;
    std::vector<std::size_t> slack_col;  // per row, npos for equality rows
    std::vector<std::size_t> art_col;    // per row, npos when the slack starts basic

    std::size_t total() const { return n_struct + n_slack + n_art; }
    bool is_artificial(std::size_t col) const { return col >= n_struct + n_slack; }
};

EqualityForm to_equality_form(const LpStandardForm& lp) {
    EqualityForm f;
    const auto m = static_cast<std::size_t>(lp.matrix.rows());
    f.n_struct = static_cast<std::size_t>(lp.matrix.cols());
    f.sign = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m));
    f.slack_col.assign(m, npos);
    f.art_col.assign(m, npos);

    std::vector<double> slack_coef(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.rhs(static_cast<Eigen::Index>(i)) < 0.0) f.sign(static_cast<Eigen::Index>(i)) = -1.0;
        if (lp.row_kind[i] != RowKind::equal) {
            f.slack_col[i] = f.n_struct + f.n_slack++;
            slack_coef[i] = lp.row_kind[i] == RowKind::less_equal ? 1.0 : -1.0;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const bool slack_usable = f.slack_col[i] != npos && f.sign(static_cast<Eigen::Index>(i)) * slack_coef[i] > 0;
        if (!slack_usable) f.art_col[i] = f.n_struct + f.n_slack + f.n_art++;
    }

    f.E = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(f.total()));
    f.E.leftCols(static_cast<Eigen::Index>(f.n_struct)) = lp.matrix;
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (f.slack_col[i] != npos) f.E(r, static_cast<Eigen::Index>(f.slack_col[i])) = slack_coef[i];
        f.E.row(r) *= f.sign(r);
        if (f.art_col[i] != npos) f.E(r, static_cast<Eigen::Index>(f.art_col[i])) = 1.0;
    }
    f.h = lp.rhs.cwiseProduct(f.sign);
    return f;
}

enum class PhaseOutcome { optimal, unbounded };

class RevisedSimplex {
public:
    RevisedSimplex(const EqualityForm& form, const SimplexOptions& options)
        : f_(form),
          m_(static_cast<std::size_t>(form.E.rows())),
          n_(form.total()),
          opts_(options),
          is_basic_(n_, 0) {
        budget_ = opts_.max_iterations > 0 ? opts_.max_iterations : 50 * static_cast<int>(m_ + n_) + 1000;
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = f_.art_col[i] != npos ? f_.art_col[i] : f_.slack_col[i];
            is_basic_[basis_[i]] = 1;
        }
        refactor();
    }

    PhaseOutcome run(const Eigen::VectorXd& cost, const std::vector<char>& allowed) {
        weights_.assign(n_, 1.0);
        bland_ = false;
        int degenerate_streak = 0;
        int since_refactor = 0;
        const double cost_scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
        const double opt_tol = 1e-11 * cost_scale;
        const double tie_tol = 1e-12;

        for (;;) {
            if (iterations_ >= budget_) {
                throw SolverError("simplex: iteration limit of " + std::to_string(budget_) + " exceeded");
            }
            const Eigen::VectorXd y = duals(cost);
            const Eigen::VectorXd d = cost - f_.E.transpose() * y;

            std::size_t entering = npos;
            double best = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[j] || !allowed[j]) continue;
                const double dj = d(static_cast<Eigen::Index>(j));
                if (dj >= -opt_tol) continue;
                if (bland_) {
                    entering = j;
                    break;
                }
                const double score = dj * dj / weights_[j];
                if (score > best) {
                    best = score;
                    entering = j;
                }
            }
            if (entering == npos) return PhaseOutcome::optimal;

            const Eigen::VectorXd alpha = binv_ * f_.E.col(static_cast<Eigen::Index>(entering));
            std::size_t leave = npos;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = alpha(static_cast<Eigen::Index>(i));
                if (a <= kPivotTol) continue;
                const double ratio = std::max(xb_(static_cast<Eigen::Index>(i)), 0.0) / a;
                if (leave == npos || ratio < best_ratio - tie_tol * (1.0 + best_ratio)) {
                    leave = i;
                    best_ratio = ratio;
                } else if (ratio <= best_ratio + tie_tol * (1.0 + best_ratio)) {
                    const bool take = bland_ ? basis_[i] < basis_[leave]
                                             : a > alpha(static_cast<Eigen::Index>(leave));
                    if (take) {
                        leave = i;
                        best_ratio = std::min(best_ratio, ratio);
                    }
                }
            }
            if (leave == npos) {
                ray_column_ = entering;
                ray_alpha_ = alpha;
                return PhaseOutcome::unbounded;
            }

            if (!bland_) update_devex(entering, leave, alpha);
            pivot(leave, entering, alpha);
            ++iterations_;

            if (best_ratio <= tie_tol) {
                if (++degenerate_streak > opts_.stall_limit) bland_ = true;
            } else {
                degenerate_streak = 0;
            }
            if (++since_refactor >= opts_.refactor_period) {
                refactor();
                since_refactor = 0;
            }
        }
    }

    // Pivot basic artificials out on any usable column; rows where none
    // exists are linearly dependent and keep their artificial at zero.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (!f_.is_artificial(basis_[i])) continue;
            const Eigen::VectorXd row = f_.E.transpose() * binv_.row(static_cast<Eigen::Index>(i)).transpose();
            std::size_t col = npos;
            double best = 1e-9;
            for (std::size_t j = 0; j < f_.n_struct + f_.n_slack; ++j) {
                if (is_basic_[j]) continue;
                const double v = std::abs(row(static_cast<Eigen::Index>(j)));
                if (v > best) {
                    best = v;
                    col = j;
                }
            }
            if (col == npos) continue;
            const Eigen::VectorXd alpha = binv_ * f_.E.col(static_cast<Eigen::Index>(col));
            pivot(i, col, alpha);
        }
        refactor();
    }

    void refactor() {
        if (m_ == 0) {
            binv_.resize(0, 0);
            xb_.resize(0);
            return;
        }
        Eigen::MatrixXd B(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) {
            B.col(static_cast<Eigen::Index>(i)) = f_.E.col(static_cast<Eigen::Index>(basis_[i]));
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        binv_ = lu.inverse();
        xb_ = lu.solve(f_.h);
        xb_ += lu.solve(f_.h - B * xb_);
    }

    Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
        Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) cb(static_cast<Eigen::Index>(i)) = cost(static_cast<Eigen::Index>(basis_[i]));
        return binv_.transpose() * cb;
    }

    // Fresh factorization of the final basis; one refinement step on both
    // the primal and dual systems.
    void final_solve(const Eigen::VectorXd& cost, Eigen::VectorXd& z, Eigen::VectorXd& y) const {
        z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
        y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
        if (m_ == 0) return;
        Eigen::MatrixXd B(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
        Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) {
            B.col(static_cast<Eigen::Index>(i)) = f_.E.col(static_cast<Eigen::Index>(basis_[i]));
            cb(static_cast<Eigen::Index>(i)) = cost(static_cast<Eigen::Index>(basis_[i]));
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        Eigen::VectorXd xb = lu.solve(f_.h);
        xb += lu.solve(f_.h - B * xb);
        y = lu.transpose().solve(cb);
        const Eigen::VectorXd dual_residual = cb - B.transpose() * y;
        const Eigen::VectorXd dual_step = lu.transpose().solve(dual_residual);
        y += dual_step;
        for (std::size_t i = 0; i < m_; ++i) z(static_cast<Eigen::Index>(basis_[i])) = xb(static_cast<Eigen::Index>(i));
    }

    const std::vector<std::size_t>& basis() const { return basis_; }
    const Eigen::VectorXd& xb() const { return xb_; }
    int iterations() const { return iterations_; }
    std::size_t ray_column() const { return ray_column_; }
    const Eigen::VectorXd& ray_alpha() const { return ray_alpha_; }

private:
    void pivot(std::size_t row, std::size_t col, const Eigen::VectorXd& alpha) {
        const auto r = static_cast<Eigen::Index>(row);
        const double piv = alpha(r);
        const Eigen::RowVectorXd pivot_row = binv_.row(r) / piv;
        Eigen::VectorXd a = alpha;
        a(r) -= 1.0;
        binv_.noalias() -= a * pivot_row;

        const double theta = xb_(r) / piv;
        xb_ -= theta * alpha;
        xb_(r) = theta;

        is_basic_[basis_[row]] = 0;
        basis_[row] = col;
        is_basic_[col] = 1;
    }

    void update_devex(std::size_t entering, std::size_t leave, const Eigen::VectorXd& alpha) {
        const auto r = static_cast<Eigen::Index>(leave);
        const double alpha_rq = alpha(r);
        const Eigen::VectorXd pivot_row = f_.E.transpose() * binv_.row(r).transpose();
        const double wq = weights_[entering];
        for (std::size_t j = 0; j < n_; ++j) {
            if (is_basic_[j] || j == entering) continue;
            const double ratio = pivot_row(static_cast<Eigen::Index>(j)) / alpha_rq;
            weights_[j] = std::max(weights_[j], ratio * ratio * wq);
        }
        weights_[basis_[leave]] = std::max(wq / (alpha_rq * alpha_rq), 1.0);
    }

    const EqualityForm& f_;
    std::size_t m_;
    std::size_t n_;
    SimplexOptions opts_;
    int budget_ = 0;
    int iterations_ = 0;
    bool bland_ = false;

    std::vector<std::size_t> basis_;
    std::vector<char> is_basic_;
    std::vector<double> weights_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;

    std::size_t ray_column_ = npos;
    Eigen::VectorXd ray_alpha_;
};

}  // namespace

LpSolution solve_lp(const LpStandardForm& lp, const SimplexOptions& options) {
    lp.validate();
    const EqualityForm form = to_equality_form(lp);
    const auto m = static_cast<Eigen::Index>(lp.rows());
    const auto n = static_cast<Eigen::Index>(lp.cols());
    const double rhs_scale = std::max(1.0, m > 0 ? form.h.cwiseAbs().maxCoeff() : 0.0);

    RevisedSimplex simplex(form, options);
    LpSolution sol;

    if (form.n_art > 0) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(form.total()));
        phase1.tail(static_cast<Eigen::Index>(form.n_art)).setOnes();
        simplex.run(phase1, std::vector<char>(form.total(), 1));

        double infeasibility = 0.0;
        for (std::size_t i = 0; i < lp.rows(); ++i) {
            const std::size_t col = simplex.basis()[i];
            if (form.is_artificial(col)) infeasibility += std::max(simplex.xb()(static_cast<Eigen::Index>(i)), 0.0);
        }
        if (infeasibility > kTolFeasibility * rhs_scale) {
            sol.status = LpStatus::infeasible;
            sol.iterations = simplex.iterations();
            const Eigen::VectorXd y = simplex.duals(phase1);
            sol.farkas = y.cwiseProduct(form.sign);
            for (std::size_t i = 0; i < lp.rows(); ++i) {
                const std::size_t col = simplex.basis()[i];
                if (form.is_artificial(col) && simplex.xb()(static_cast<Eigen::Index>(i)) > kTolFeasibility * rhs_scale) {
                    for (std::size_t row = 0; row < lp.rows(); ++row) {
                        if (form.art_col[row] == col) sol.infeasible_row = row;
                    }
                    break;
                }
            }
            return sol;
        }
        simplex.drive_out_artificials();
    }

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(form.total()));
    phase2.head(n) = lp.cost;
    std::vector<char> allowed(form.total(), 1);
    for (std::size_t j = form.n_struct + form.n_slack; j < form.total(); ++j) allowed[j] = 0;

    const PhaseOutcome outcome = simplex.run(phase2, allowed);
    sol.iterations = simplex.iterations();
    sol.basis = simplex.basis();

    if (outcome == PhaseOutcome::unbounded) {
        sol.status = LpStatus::unbounded;
        sol.ray = Eigen::VectorXd::Zero(n);
        const std::size_t q = simplex.ray_column();
        if (q < form.n_struct) sol.ray(static_cast<Eigen::Index>(q)) = 1.0;
        for (std::size_t i = 0; i < lp.rows(); ++i) {
            const std::size_t col = simplex.basis()[i];
            if (col < form.n_struct) sol.ray(static_cast<Eigen::Index>(col)) = -simplex.ray_alpha()(static_cast<Eigen::Index>(i));
        }
        return sol;
    }

    Eigen::VectorXd z;
    Eigen::VectorXd y;
    simplex.final_solve(phase2, z, y);
    sol.status = LpStatus::optimal;
    sol.primal = z.head(n);
    sol.dual = y.cwiseProduct(form.sign);
    sol.objective = lp.cost.dot(sol.primal);
    for (std::size_t i = 0; i < lp.rows(); ++i) {
        const std::size_t col = simplex.basis()[i];
        if (!form.is_artificial(col) && std::abs(z(static_cast<Eigen::Index>(col))) <= kTolFeasibility * rhs_scale) {
            sol.degenerate = true;
        }
    }
    return sol;
}

bool ActiveSet::contains(std::size_t index) const {
    return std::binary_search(indices.begin(), indices.end(), index);
}

std::string ActiveSet::key() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) out << ';';
        out << indices[i];
    }
    return out.str();
}

std::size_t ActiveSetHash::operator()(const ActiveSet& set) const noexcept {
    // FNV-1a over the index list.
    std::size_t h = 1469598103934665603ULL;
    for (std::size_t v : set.indices) {
        h ^= v + 0x9e3779b97f4a7c15ULL;
        h *= 1099511628211ULL;
    }
    return h;
}

ActiveSet extract_active_set(const LpStandardForm& lp, const LpSolution& solution, double tol_active) {
    if (solution.status != LpStatus::optimal) {
        throw ContractError("extract_active_set: solution is " + to_string(solution.status));
    }
    ActiveSet set;
    const Eigen::VectorXd lhs = lp.matrix * solution.primal;
    for (std::size_t i = 0; i < lp.rows(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double b = lp.rhs(r);
        if (lp.row_kind[i] == RowKind::equal || std::abs(lhs(r) - b) <= tol_active * std::max(1.0, std::abs(b))) {
            set.indices.push_back(i);
        }
    }
    for (std::size_t j = 0; j < lp.cols(); ++j) {
        if (std::abs(solution.primal(static_cast<Eigen::Index>(j))) <= tol_active) set.indices.push_back(lp.rows() + j);
    }
    return set;
}

double primal_infeasibility(const LpStandardForm& lp, const Eigen::VectorXd& x) {
    double worst = 0.0;
    const Eigen::VectorXd lhs = lp.matrix * x;
    for (std::size_t i = 0; i < lp.rows(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double gap = lhs(r) - lp.rhs(r);
        switch (lp.row_kind[i]) {
            case RowKind::less_equal: worst = std::max(worst, gap); break;
            case RowKind::greater_equal: worst = std::max(worst, -gap); break;
            case RowKind::equal: worst = std::max(worst, std::abs(gap)); break;
        }
    }
    if (x.size() > 0) worst = std::max(worst, -x.minCoeff());
    return worst;
}

bool verify_strong_duality(const LpStandardForm& lp, const LpSolution& solution, double tol) {
    if (solution.status != LpStatus::optimal) return false;
    const Eigen::VectorXd& x = solution.primal;
    const Eigen::VectorXd& y = solution.dual;
    if (x.size() != lp.cost.size() || y.size() != lp.rhs.size()) return false;

    const double primal = lp.cost.dot(x);
    const double dual = lp.rhs.dot(y);
    const double scale = std::max(1.0, std::abs(primal));
    if (std::abs(primal - dual) > tol * scale) return false;

    const Eigen::VectorXd slack = lp.matrix * x - lp.rhs;
    for (std::size_t i = 0; i < lp.rows(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double yi = y(r);
        const double row_scale = std::max(1.0, std::abs(yi));
        if (lp.row_kind[i] == RowKind::less_equal && yi > tol * row_scale) return false;
        if (lp.row_kind[i] == RowKind::greater_equal && yi < -tol * row_scale) return false;
        if (std::abs(yi * slack(r)) > tol * scale) return false;
    }
    const Eigen::VectorXd reduced = lp.cost - lp.matrix.transpose() * y;
    for (std::size_t j = 0; j < lp.cols(); ++j) {
        const auto c = static_cast<Eigen::Index>(j);
        if (reduced(c) < -tol * std::max(1.0, std::abs(lp.cost(c)))) return false;
        if (std::abs(reduced(c) * x(c)) > tol * scale) return false;
    }
    return true;
}

}  // namespace tsagg
