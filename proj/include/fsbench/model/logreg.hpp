#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/matrix.hpp"

namespace fsbench {

enum class Penalty { l2, l1 };

struct LogRegModel {
    std::vector<double> weights;
    double intercept = 0.0;
    Penalty penalty = Penalty::l2;
    double c = 1.0;
    bool converged = false;
    std::size_t n_iter = 0;
    std::vector<double> objective_trace; // objective value after each iteration
};

namespace detail {

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// log(1 + exp(z)) - y*z, computed without overflow.
inline double log_loss_term(double z, int y) {
    const double yz = y ? z : 0.0;
    if (z > 0.0) return z - yz + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z)) - yz;
}

inline double logit(double p) {
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    return std::log(p / (1.0 - p));
}

/// Mean log-loss over rows given the linear predictor.
inline double mean_log_loss(const std::vector<double>& eta, const std::vector<int>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) s += log_loss_term(eta[i], y[i]);
    return s / static_cast<double>(eta.size());
}

/// In-place Cholesky solve of A x = b for symmetric positive definite A
/// (lower triangle used). Returns false when A is not positive definite.
inline bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t d) {
    for (std::size_t j = 0; j < d; ++j) {
        double diag = a[j * d + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
        if (diag <= 0.0) return false;
        const double ljj = std::sqrt(diag);
        a[j * d + j] = ljj;
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * d + k] * a[j * d + k];
            a[i * d + j] = v / ljj;
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= a[i * d + k] * b[k];
        b[i] = v / a[i * d + i];
    }
    for (std::size_t ii = d; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < d; ++k) v -= a[k * d + ii] * b[k];
        b[ii] = v / a[ii * d + ii];
    }
    return true;
}

inline void check_fit_inputs(const Matrix& x, const std::vector<int>& y, double c) {
    if (x.rows() != y.size()) throw DataError("fit_logreg: X/y size mismatch");
    if (x.rows() < 2) throw DataError("fit_logreg: need at least 2 samples");
    if (!(c > 0.0)) throw DataError("fit_logreg: C must be positive");
    if (!x.all_finite()) throw DataError("fit_logreg: non-finite input");
    bool pos = false, neg = false;
    for (const int v : y) (v ? pos : neg) = true;
    if (!pos || !neg) throw DataError("fit_logreg: single-class labels");
}

/// Objective: mean log-loss + 1/(2 C n) ||w||^2, intercept unpenalized.
inline double l2_objective(const Matrix& x, const std::vector<int>& y,
                           const std::vector<double>& w, double b, double c) {
    const auto eta = affine(x, w, b);
    double reg = 0.0;
    for (const double v : w) reg += v * v;
    return mean_log_loss(eta, y) +
           reg / (2.0 * c * static_cast<double>(x.rows()));
}

/// Gradient of the ell-2 objective with respect to (w, b); the intercept
/// derivative sits in the last slot.
inline std::vector<double> l2_gradient(const Matrix& x, const std::vector<int>& y,
                                       const std::vector<double>& w, double b, double c) {
    const std::size_t n = x.rows(), d = x.cols();
    const double lambda = 1.0 / (c * static_cast<double>(n));
    const auto eta = affine(x, w, b);
    std::vector<double> grad(d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = sigmoid(eta[i]) - static_cast<double>(y[i]);
        const auto xi = x.row(i);
        for (std::size_t j = 0; j < d; ++j) grad[j] += r * xi[j];
        grad[d] += r;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + lambda * w[j];
    grad[d] *= inv_n;
    return grad;
}

inline LogRegModel fit_l2_newton(const Matrix& x, const std::vector<int>& y, double c,
                                 double tol, std::size_t max_iter) {
    const std::size_t n = x.rows(), d = x.cols(), dp = d + 1;
    LogRegModel m;
    m.penalty = Penalty::l2;
    m.c = c;
    m.weights.assign(d, 0.0);
    const double lambda = 1.0 / (c * static_cast<double>(n));

    double f = l2_objective(x, y, m.weights, m.intercept, c);
    m.objective_trace.push_back(f);
    std::vector<double> grad(dp), step(dp), hess(dp * dp);
    std::vector<double> p(n), s(n);

    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        m.n_iter = iter;
        const auto eta = affine(x, m.weights, m.intercept);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = sigmoid(eta[i]);
            s[i] = std::max(p[i] * (1.0 - p[i]), 1e-12);
        }
        grad = l2_gradient(x, y, m.weights, m.intercept, c);
        const double inv_n = 1.0 / static_cast<double>(n);

        // lower triangle only; row d holds the intercept cross terms
        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = x.row(i);
            for (std::size_t j = 0; j < d; ++j) {
                const double sx = s[i] * xi[j];
                for (std::size_t k = 0; k <= j; ++k) hess[j * dp + k] += sx * xi[k];
                hess[d * dp + j] += sx;
            }
            hess[d * dp + d] += s[i];
        }
        for (std::size_t j = 0; j < dp; ++j)
            for (std::size_t k = 0; k <= j; ++k) hess[j * dp + k] *= inv_n;
        for (std::size_t j = 0; j < d; ++j) hess[j * dp + j] += lambda;

        for (std::size_t j = 0; j < dp; ++j) step[j] = -grad[j];
        auto h = hess;
        double jitter = 1e-10;
        while (!cholesky_solve(h, step, dp)) {
            h = hess;
            for (std::size_t j = 0; j < dp; ++j) h[j * dp + j] += jitter;
            for (std::size_t j = 0; j < dp; ++j) step[j] = -grad[j];
            jitter *= 10.0;
            if (jitter > 1.0) throw EvalError("fit_logreg: Hessian factorization failed");
        }

        double dir_dot_grad = 0.0;
        for (std::size_t j = 0; j < dp; ++j) dir_dot_grad += step[j] * grad[j];

        // Backtracking keeps the objective non-increasing at every iteration.
        double t = 1.0;
        std::vector<double> w_new(d);
        double b_new = 0.0, f_new = f;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < d; ++j) w_new[j] = m.weights[j] + t * step[j];
            b_new = m.intercept + t * step[d];
            f_new = l2_objective(x, y, w_new, b_new, c);
            if (f_new <= f + 1e-4 * t * dir_dot_grad) break;
            t *= 0.5;
        }
        if (f_new > f) { m.converged = true; break; } // no descent possible
        m.weights = w_new;
        m.intercept = b_new;
        const double decrease = f - f_new;
        f = f_new;
        m.objective_trace.push_back(f);
        if (decrease <= tol) { m.converged = true; break; }
    }
    return m;
}

/// Coordinate descent with soft-thresholding on the IRLS quadratic model.
/// Objective: mean log-loss + lambda ||w||_1, intercept unpenalized.
inline LogRegModel fit_l1_cd(const Matrix& x, const std::vector<int>& y, double lambda,
                             double tol, std::size_t max_iter,
                             const std::vector<double>* warm_w = nullptr,
                             const double* warm_b = nullptr) {
    const std::size_t n = x.rows(), d = x.cols();
    LogRegModel m;
    m.penalty = Penalty::l1;
    m.c = lambda > 0.0 ? 1.0 / (lambda * static_cast<double>(n))
                       : std::numeric_limits<double>::infinity();

    double ybar = 0.0;
    for (const int v : y) ybar += v;
    ybar /= static_cast<double>(n);
    m.weights.assign(d, 0.0);
    m.intercept = logit(ybar);
    if (warm_w && warm_w->size() == d) m.weights = *warm_w;
    if (warm_b) m.intercept = *warm_b;

    // column-major copy for cheap coordinate sweeps
    std::vector<std::vector<double>> cols(d);
    for (std::size_t j = 0; j < d; ++j) cols[j] = x.column(j);

    auto objective = [&](const std::vector<double>& w, double b) {
        const auto eta = affine(x, w, b);
        double l1 = 0.0;
        for (const double v : w) l1 += std::fabs(v);
        return mean_log_loss(eta, y) + lambda * l1;
    };

    std::vector<double> eta = affine(x, m.weights, m.intercept);
    double f = objective(m.weights, m.intercept);
    m.objective_trace.push_back(f);
    std::vector<double> s(n), z(n), r(n);

    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        m.n_iter = iter;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(eta[i]);
            s[i] = std::max(p * (1.0 - p), 1e-5);
            z[i] = eta[i] + (static_cast<double>(y[i]) - p) / s[i];
            r[i] = z[i] - eta[i];
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        std::vector<double> a(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < n; ++i) a[j] += s[i] * cols[j][i] * cols[j][i];
            a[j] *= inv_n;
        }
        double s_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) s_sum += s[i];

        const std::vector<double> w_prev = m.weights;
        const double b_prev = m.intercept;

        for (int sweep = 0; sweep < 200; ++sweep) {
            double max_delta = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                if (a[j] == 0.0) continue;
                double rho = 0.0;
                for (std::size_t i = 0; i < n; ++i) rho += s[i] * cols[j][i] * r[i];
                rho = rho * inv_n + a[j] * m.weights[j];
                // strict comparison keeps coefficients exactly zero on the
                // subgradient boundary |rho| == lambda
                double w_new = 0.0;
                if (rho > lambda) w_new = (rho - lambda) / a[j];
                else if (rho < -lambda) w_new = (rho + lambda) / a[j];
                const double delta = w_new - m.weights[j];
                if (delta != 0.0) {
                    for (std::size_t i = 0; i < n; ++i) r[i] -= delta * cols[j][i];
                    m.weights[j] = w_new;
                    max_delta = std::max(max_delta, std::fabs(delta));
                }
            }
            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) num += s[i] * r[i];
            const double db = num / s_sum;
            if (db != 0.0) {
                for (std::size_t i = 0; i < n; ++i) r[i] -= db;
                m.intercept += db;
                max_delta = std::max(max_delta, std::fabs(db));
            }
            if (max_delta < 1e-10) break;
        }

        eta = affine(x, m.weights, m.intercept);
        double f_new = objective(m.weights, m.intercept);
        // guard against a bad quadratic step: damp toward the previous iterate
        int damp = 0;
        while (f_new > f && damp < 30) {
            for (std::size_t j = 0; j < d; ++j)
                m.weights[j] = 0.5 * (m.weights[j] + w_prev[j]);
            m.intercept = 0.5 * (m.intercept + b_prev);
            eta = affine(x, m.weights, m.intercept);
            f_new = objective(m.weights, m.intercept);
            ++damp;
        }
        if (f_new > f) {
            m.weights = w_prev;
            m.intercept = b_prev;
            m.converged = true;
            break;
        }
        const double decrease = f - f_new;
        f = f_new;
        m.objective_trace.push_back(f);
        if (decrease <= tol) { m.converged = true; break; }
    }
    // coefficients below double-precision noise are exact zeros of the
    // L1 solution; snap them so sparsity is attainable
    for (double& w : m.weights)
        if (std::fabs(w) < 1e-12) w = 0.0;
    return m;
}

} // namespace detail

/// Fit a regularized logistic regression. The ell-2 penalty is minimized by
/// damped Newton iteration, the ell-1 penalty by coordinate descent with
/// soft-thresholding. tol is on the per-iteration objective decrease.
inline LogRegModel fit_logreg(const Matrix& x, const std::vector<int>& y, Penalty penalty,
                              double c, double tol = 1e-6, std::size_t max_iter = 1000) {
    detail::check_fit_inputs(x, y, c);
    if (penalty == Penalty::l2) return detail::fit_l2_newton(x, y, c, tol, max_iter);
    const double lambda = 1.0 / (c * static_cast<double>(x.rows()));
    auto m = detail::fit_l1_cd(x, y, lambda, tol, max_iter);
    m.c = c;
    return m;
}

inline std::vector<double> decision_function(const LogRegModel& m, const Matrix& x) {
    if (x.cols() != m.weights.size()) throw DataError("predict: column count mismatch");
    return affine(x, m.weights, m.intercept);
}

/// Sigmoid of the linear predictor, clamped so outputs stay strictly in (0,1).
inline std::vector<double> predict_proba(const LogRegModel& m, const Matrix& x) {
    auto eta = decision_function(m, x);
    for (double& v : eta) v = detail::sigmoid(std::clamp(v, -36.0, 36.0));
    return eta;
}

} // namespace fsbench
