// Copyright 2026 The RQSVR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "rqsvr/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rqsvr/error.hpp"
#include "rqsvr/splits.hpp"

namespace rqsvr::svr {

namespace {

constexpr double kTau = 1e-12;

void validate_problem(const Eigen::MatrixXd &X, const Eigen::VectorXd &y,
                      const SvrHyperparams &hp, double tol) {
    if (X.rows() != y.size()) {
        throw ArgumentError("fit_epsilon_svr: X has " + std::to_string(X.rows()) +
                            " rows, y has " + std::to_string(y.size()) + " entries");
    }
    if (X.rows() < 2) {
        throw ArgumentError("fit_epsilon_svr: need at least two samples");
    }
    if (X.cols() < 1) {
        throw ArgumentError("fit_epsilon_svr: need at least one feature");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw ValidationError("fit_epsilon_svr: non-finite input");
    }
    if (!(hp.C > 0.0) || !std::isfinite(hp.C)) {
        throw ValidationError("fit_epsilon_svr: C must be finite and > 0");
    }
    if (!(hp.epsilon >= 0.0) || !std::isfinite(hp.epsilon)) {
        throw ValidationError("fit_epsilon_svr: epsilon must be finite and >= 0");
    }
    if (!(tol > 0.0)) {
        throw ArgumentError("fit_epsilon_svr: tolerance must be > 0");
    }
}

/**
 * SMO on the 2l-variable dual
 *
 *     min 1/2 a^T Q a + p^T a   s.t.  s^T a = 0,  0 <= a <= C
 *
 * with a = [alpha; alpha*], s = [+1; -1], p = [eps - y; eps + y] and
 * Q_tu = s_t s_u K_{t mod l, u mod l}.
 */
class SmoSolver {
  public:
    SmoSolver(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, const SvrHyperparams &hp)
        : l_(X.rows()), C_(hp.C), kernel_(X * X.transpose()),
          alpha_(Eigen::VectorXd::Zero(2 * l_)), kbeta_(Eigen::VectorXd::Zero(l_)),
          p_(2 * l_) {
        for (Eigen::Index i = 0; i < l_; ++i) {
            p_(i) = hp.epsilon - y(i);
            p_(i + l_) = hp.epsilon + y(i);
        }
    }

    void solve(double tol) {
        const std::size_t max_iter =
            std::max<std::size_t>(10'000'000, 100 * static_cast<std::size_t>(2 * l_));
        const std::size_t shrink_every = std::min<std::size_t>(static_cast<std::size_t>(l_), 1000);
        activate_all();
        std::size_t countdown = shrink_every;
        Eigen::Index i = -1;
        Eigen::Index j = -1;
        for (iterations_ = 0; iterations_ < max_iter; ++iterations_) {
            if (--countdown == 0) {
                countdown = shrink_every;
                shrink(tol);
            }
            if (select_working_set(tol, i, j)) {
                // Optimal on the active set; confirm on all variables.
                if (active_.size() == static_cast<std::size_t>(2 * l_)) {
                    return;
                }
                activate_all();
                if (select_working_set(tol, i, j)) {
                    return;
                }
                countdown = 1;
            }
            update_pair(i, j);
        }
        activate_all();
        select_working_set(tol, i, j);
    }

    [[nodiscard]] SvrFit result(const Eigen::MatrixXd &X) const {
        SvrFit fit;
        fit.dual_coef = alpha_.head(l_) - alpha_.tail(l_);
        fit.w = X.transpose() * fit.dual_coef;
        fit.b = bias();
        double objective = 0.0;
        for (Eigen::Index t = 0; t < 2 * l_; ++t) {
            objective += alpha_(t) * (grad(t) + p_(t));
        }
        fit.objective = 0.5 * objective;
        fit.iterations = iterations_;
        fit.kkt_violation = violation_;
        return fit;
    }

  private:
    [[nodiscard]] double sign(Eigen::Index t) const { return t < l_ ? 1.0 : -1.0; }
    [[nodiscard]] Eigen::Index row(Eigen::Index t) const { return t < l_ ? t : t - l_; }
    [[nodiscard]] double q(Eigen::Index t, Eigen::Index u) const {
        return sign(t) * sign(u) * kernel_(row(t), row(u));
    }
    [[nodiscard]] double qd(Eigen::Index t) const { return kernel_(row(t), row(t)); }
    /// Gradient of the dual objective; (Q a)_t = s_t (K beta)_{t mod l}.
    [[nodiscard]] double grad(Eigen::Index t) const { return sign(t) * kbeta_(row(t)) + p_(t); }
    [[nodiscard]] bool at_upper(Eigen::Index t) const { return alpha_(t) >= C_; }
    [[nodiscard]] bool at_lower(Eigen::Index t) const { return alpha_(t) <= 0.0; }

    void activate_all() {
        active_.resize(static_cast<std::size_t>(2 * l_));
        std::iota(active_.begin(), active_.end(), Eigen::Index{0});
    }

    /// Drops bounded variables whose gradient pushes them further out of
    /// the feasible box. The first time the problem looks nearly solved,
    /// everything is reactivated once.
    void shrink(double tol) {
        double gmax1 = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        for (const Eigen::Index t : active_) {
            const double g = grad(t);
            if (sign(t) > 0) {
                if (!at_upper(t)) {
                    gmax1 = std::max(gmax1, -g);
                }
                if (!at_lower(t)) {
                    gmax2 = std::max(gmax2, g);
                }
            } else {
                if (!at_upper(t)) {
                    gmax2 = std::max(gmax2, -g);
                }
                if (!at_lower(t)) {
                    gmax1 = std::max(gmax1, g);
                }
            }
        }
        if (!unshrunk_ && gmax1 + gmax2 <= 10.0 * tol) {
            unshrunk_ = true;
            activate_all();
        }
        std::erase_if(active_, [&](Eigen::Index t) {
            const double g = grad(t);
            if (at_upper(t)) {
                return sign(t) > 0 ? -g > gmax1 : -g > gmax2;
            }
            if (at_lower(t)) {
                return sign(t) > 0 ? g > gmax2 : g > gmax1;
            }
            return false;
        });
    }

    /// Returns true when the maximal violation is below tol.
    bool select_working_set(double tol, Eigen::Index &out_i, Eigen::Index &out_j) {
        double gmax = -std::numeric_limits<double>::infinity();
        Eigen::Index i = -1;
        for (const Eigen::Index t : active_) {
            if (sign(t) > 0) {
                if (!at_upper(t) && -grad(t) >= gmax) {
                    gmax = -grad(t);
                    i = t;
                }
            } else if (!at_lower(t) && grad(t) >= gmax) {
                gmax = grad(t);
                i = t;
            }
        }

        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_gain = std::numeric_limits<double>::infinity();
        Eigen::Index j = -1;
        for (const Eigen::Index t : active_) {
            double grad_diff = 0.0;
            double quad = 0.0;
            if (sign(t) > 0) {
                if (at_lower(t)) {
                    continue;
                }
                gmax2 = std::max(gmax2, grad(t));
                grad_diff = gmax + grad(t);
                if (i >= 0) {
                    quad = qd(i) + qd(t) - 2.0 * sign(i) * q(i, t);
                }
            } else {
                if (at_upper(t)) {
                    continue;
                }
                gmax2 = std::max(gmax2, -grad(t));
                grad_diff = gmax - grad(t);
                if (i >= 0) {
                    quad = qd(i) + qd(t) + 2.0 * sign(i) * q(i, t);
                }
            }
            if (i >= 0 && grad_diff > 0.0) {
                const double gain = -(grad_diff * grad_diff) / std::max(quad, kTau);
                if (gain <= best_gain) {
                    best_gain = gain;
                    j = t;
                }
            }
        }
        violation_ = gmax + gmax2;
        if (i < 0 || j < 0 || violation_ < tol) {
            return true;
        }
        out_i = i;
        out_j = j;
        return false;
    }

    void update_pair(Eigen::Index i, Eigen::Index j) {
        const double old_i = alpha_(i);
        const double old_j = alpha_(j);
        const double qij = q(i, j);
        if (sign(i) != sign(j)) {
            const double quad = std::max(qd(i) + qd(j) + 2.0 * qij, kTau);
            const double delta = (-grad(i) - grad(j)) / quad;
            const double diff = alpha_(i) - alpha_(j);
            alpha_(i) += delta;
            alpha_(j) += delta;
            if (diff > 0.0) {
                if (alpha_(j) < 0.0) {
                    alpha_(j) = 0.0;
                    alpha_(i) = diff;
                }
            } else if (alpha_(i) < 0.0) {
                alpha_(i) = 0.0;
                alpha_(j) = -diff;
            }
            if (diff > 0.0) {
                if (alpha_(i) > C_) {
                    alpha_(i) = C_;
                    alpha_(j) = C_ - diff;
                }
            } else if (alpha_(j) > C_) {
                alpha_(j) = C_;
                alpha_(i) = C_ + diff;
            }
        } else {
            const double quad = std::max(qd(i) + qd(j) - 2.0 * qij, kTau);
            const double delta = (grad(i) - grad(j)) / quad;
            const double sum = alpha_(i) + alpha_(j);
            alpha_(i) -= delta;
            alpha_(j) += delta;
            if (sum > C_) {
                if (alpha_(i) > C_) {
                    alpha_(i) = C_;
                    alpha_(j) = sum - C_;
                }
            } else if (alpha_(j) < 0.0) {
                alpha_(j) = 0.0;
                alpha_(i) = sum;
            }
            if (sum > C_) {
                if (alpha_(j) > C_) {
                    alpha_(j) = C_;
                    alpha_(i) = sum - C_;
                }
            } else if (alpha_(i) < 0.0) {
                alpha_(i) = 0.0;
                alpha_(j) = sum;
            }
        }
        const double di = alpha_(i) - old_i;
        const double dj = alpha_(j) - old_j;
        kbeta_ += kernel_.col(row(i)) * (sign(i) * di) + kernel_.col(row(j)) * (sign(j) * dj);
    }

    /// Average of s_t G_t over free variables, else the midpoint of the
    /// feasible interval; b = -rho.
    [[nodiscard]] double bias() const {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (Eigen::Index t = 0; t < 2 * l_; ++t) {
            const double yg = sign(t) * grad(t);
            if (at_upper(t)) {
                if (sign(t) < 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else if (at_lower(t)) {
                if (sign(t) > 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else {
                ++n_free;
                sum_free += yg;
            }
        }
        const double rho =
            n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
        return -rho;
    }

    Eigen::Index l_;
    double C_;
    Eigen::MatrixXd kernel_;
    Eigen::VectorXd alpha_;
    Eigen::VectorXd kbeta_; ///< K (alpha - alpha*)
    Eigen::VectorXd p_;
    std::vector<Eigen::Index> active_;
    bool unshrunk_ = false;
    std::size_t iterations_ = 0;
    double violation_ = 0.0;
};

} // namespace

FeatureDataset FeatureDataset::subset(const std::vector<std::size_t> &rows) const {
    FeatureDataset out;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = static_cast<Eigen::Index>(rows[r]);
        if (src >= X.rows()) {
            throw ArgumentError("FeatureDataset::subset: row out of range");
        }
        out.X.row(static_cast<Eigen::Index>(r)) = X.row(src);
        out.y(static_cast<Eigen::Index>(r)) = y(src);
    }
    return out;
}

SvrFit fit_epsilon_svr(const Eigen::MatrixXd &X, const Eigen::VectorXd &y,
                       const SvrHyperparams &hp, double tol) {
    validate_problem(X, y, hp, tol);
    SmoSolver solver{X, y, hp};
    solver.solve(tol);
    return solver.result(X);
}

double predict_classical(const SvrFit &fit, const Eigen::VectorXd &phi) {
    if (phi.size() != fit.w.size()) {
        throw ArgumentError("predict_classical: feature vector has length " +
                            std::to_string(phi.size()) + ", model expects " +
                            std::to_string(fit.w.size()));
    }
    return fit.w.dot(phi) + fit.b;
}

double mean_squared_error(const Eigen::VectorXd &predicted, const Eigen::VectorXd &actual) {
    if (predicted.size() != actual.size() || actual.size() == 0) {
        throw ArgumentError("mean_squared_error: sizes differ or are zero");
    }
    return (predicted - actual).squaredNorm() / static_cast<double>(actual.size());
}

double primal_objective(const SvrFit &fit, const Eigen::MatrixXd &X,
                        const Eigen::VectorXd &y, const SvrHyperparams &hp) {
    const Eigen::VectorXd residual = y - X * fit.w -
                                     Eigen::VectorXd::Constant(y.size(), fit.b);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < residual.size(); ++i) {
        loss += std::max(0.0, std::abs(residual(i)) - hp.epsilon);
    }
    return 0.5 * fit.w.squaredNorm() + hp.C * loss;
}

std::vector<double> default_c_grid() { return {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}; }

CvReport grid_search_cv(const FeatureDataset &data, const std::vector<double> &c_grid,
                        std::size_t k, double epsilon, std::uint64_t seed, double tol) {
    if (c_grid.empty()) {
        throw ArgumentError("grid_search_cv: empty C grid");
    }
    if (k > data.size()) {
        throw ArgumentError("grid_search_cv: k = " + std::to_string(k) +
                            " exceeds dataset size " + std::to_string(data.size()));
    }
    CvReport report;
    report.k = k;
    report.epsilon = epsilon;
    report.seed = seed;
    report.folds = data::kfold_splits(data.size(), k, seed);

    std::vector<FeatureDataset> train(k);
    std::vector<FeatureDataset> test(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> in;
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < data.size(); ++i) {
            (report.folds[i] == f ? out : in).push_back(i);
        }
        train[f] = data.subset(in);
        test[f] = data.subset(out);
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < c_grid.size(); ++c) {
        CvEntry entry;
        entry.C = c_grid[c];
        entry.fold_hash = data::fold_assignment_hash(report.folds);
        const SvrHyperparams hp{c_grid[c], epsilon};
        double sum = 0.0;
        for (std::size_t f = 0; f < k; ++f) {
            const SvrFit fit = fit_epsilon_svr(train[f].X, train[f].y, hp, tol);
            const Eigen::VectorXd pred =
                (test[f].X * fit.w).array() + fit.b;
            const double mse = mean_squared_error(pred, test[f].y);
            entry.fold_mse.push_back(mse);
            sum += mse;
        }
        entry.mean_mse = sum / static_cast<double>(k);
        if (entry.mean_mse < best) {
            best = entry.mean_mse;
            report.best_index = c;
        }
        report.entries.push_back(std::move(entry));
    }
    report.best_C = report.entries[report.best_index].C;
    return report;
}

} // namespace rqsvr::svr
