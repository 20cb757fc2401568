#include "ft/stat_forecast.hpp"
#include "ft/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>

namespace ft {

std::vector<double> difference(const std::vector<double>& series, std::size_t d) {
    if (series.size() <= d) throw SizeError("difference: series shorter than d");
    std::vector<double> out = series;
    for (std::size_t round = 0; round < d; ++round) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

namespace {

// MacKinnon (2010) response-surface critical values, constant-only case:
// cv = b0 + b1/N + b2/N^2 + b3/N^3.
constexpr double kCrit[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433}, // 1%
    {-2.86154, -2.8903, -4.234, -40.040},  // 5%
    {-2.56677, -1.5384, -2.809, 0.0},      // 10%
};

double crit_value(int row, double n) {
    return kCrit[row][0] + kCrit[row][1] / n + kCrit[row][2] / (n * n) +
           kCrit[row][3] / (n * n * n);
}

// MacKinnon (1994) p-value approximation, constant-only case:
// p = Phi(polyval(coef, stat)).
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double mackinnon_pvalue(double stat) {
    constexpr double tau_max = 2.74, tau_min = -18.83, tau_star = -1.61;
    if (stat > tau_max) return 1.0;
    if (stat < tau_min) return 0.0;
    double z;
    if (stat <= tau_star) {
        constexpr double c[] = {2.1659, 1.4412, 0.038269};
        z = c[0] + c[1] * stat + c[2] * stat * stat;
    } else {
        constexpr double c[] = {1.7339, 0.93202, -0.12745, -0.010368};
        z = c[0] + c[1] * stat + c[2] * stat * stat + c[3] * stat * stat * stat;
    }
    return norm_cdf(z);
}

struct Ols {
    Eigen::VectorXd beta;
    double sse = 0.0;
    Eigen::MatrixXd xtx_inv;
    std::size_t n = 0;
    std::size_t k = 0;
};

Ols ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    Ols r;
    r.n = static_cast<std::size_t>(x.rows());
    r.k = static_cast<std::size_t>(x.cols());
    const Eigen::MatrixXd xtx = x.transpose() * x;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (!lu.isInvertible()) throw NumericError("singular regression matrix");
    r.xtx_inv = lu.inverse();
    r.beta = r.xtx_inv * (x.transpose() * y);
    const Eigen::VectorXd resid = y - x * r.beta;
    r.sse = resid.squaredNorm();
    return r;
}

} // namespace

AdfResult adf_test(const std::vector<double>& series, long max_lag) {
    const std::size_t n = series.size();
    std::size_t L_max;
    if (max_lag < 0) {
        L_max = static_cast<std::size_t>(
            std::ceil(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
        // statsmodels additionally caps by the usable sample
        L_max = std::min(L_max, (n - 1) / 2 - 1);
    } else {
        L_max = static_cast<std::size_t>(max_lag);
    }
    if (n <= L_max + 10) throw SizeError("adf_test: series too short for max_lag");

    const std::vector<double> dy = difference(series, 1);

    // Lag selection on a common sample (rows fixed by L_max) so AICs compare.
    const std::size_t rows = dy.size() - L_max;
    auto build = [&](std::size_t L, std::size_t nrows, std::size_t offset) {
        Eigen::MatrixXd x(nrows, 2 + L);
        Eigen::VectorXd y(nrows);
        for (std::size_t r = 0; r < nrows; ++r) {
            const std::size_t t = offset + r; // index into dy
            y(r) = dy[t];
            x(r, 0) = 1.0;
            x(r, 1) = series[t]; // y_{t-1} in level terms
            for (std::size_t j = 1; j <= L; ++j) x(r, 1 + j) = dy[t - j];
        }
        return std::make_pair(x, y);
    };

    std::size_t best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (std::size_t L = 0; L <= L_max; ++L) {
        auto [x, y] = build(L, rows, L_max);
        const Ols fit = ols(x, y);
        const double nn = static_cast<double>(rows);
        const double aic = nn * std::log(fit.sse / nn) + 2.0 * static_cast<double>(fit.k);
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = L;
        }
    }

    // Refit the chosen lag on its maximal sample.
    const std::size_t nrows = dy.size() - best_lag;
    auto [x, y] = build(best_lag, nrows, best_lag);
    const Ols fit = ols(x, y);
    const double sigma2 = fit.sse / static_cast<double>(nrows - fit.k);
    const double se = std::sqrt(sigma2 * fit.xtx_inv(1, 1));

    AdfResult result;
    result.statistic = fit.beta(1) / se;
    result.lags = best_lag;
    result.observations = nrows; // = series length - lags - 1
    const double nd = static_cast<double>(nrows);
    result.crit_1pct = crit_value(0, nd);
    result.crit_5pct = crit_value(1, nd);
    result.crit_10pct = crit_value(2, nd);
    result.p_value = mackinnon_pvalue(result.statistic);
    return result;
}

double arma_css_objective(const std::vector<double>& diffed, std::size_t p, std::size_t q,
                          double intercept, const std::vector<double>& ar,
                          const std::vector<double>& ma) {
    const std::size_t n = diffed.size();
    std::vector<double> resid(n, 0.0);
    double sse = 0.0;
    for (std::size_t t = p; t < n; ++t) {
        double pred = intercept;
        for (std::size_t i = 0; i < p; ++i) pred += ar[i] * diffed[t - 1 - i];
        for (std::size_t j = 0; j < q; ++j) {
            if (t >= 1 + j && t - 1 - j >= p) pred += ma[j] * resid[t - 1 - j];
        }
        resid[t] = diffed[t] - pred;
        sse += resid[t] * resid[t];
    }
    return sse;
}

namespace {

// CSS residuals at the given parameters; shared by fit and forecast.
std::vector<double> css_residuals(const std::vector<double>& w, const ArimaModel& m) {
    std::vector<double> resid(w.size(), 0.0);
    for (std::size_t t = m.p; t < w.size(); ++t) {
        double pred = m.intercept;
        for (std::size_t i = 0; i < m.p; ++i) pred += m.ar[i] * w[t - 1 - i];
        for (std::size_t j = 0; j < m.q; ++j)
            if (t >= 1 + j && t - 1 - j >= m.p) pred += m.ma[j] * resid[t - 1 - j];
        resid[t] = w[t] - pred;
    }
    return resid;
}

// Largest root modulus of 1 - c1 z - ... - ck z^k  (checks > 1 means the
// inverse roots are inside the unit circle).
bool roots_outside_unit_circle(const std::vector<double>& coef) {
    // companion matrix of z^k - c1 z^{k-1} - ... - ck (inverse roots)
    const std::size_t k = coef.size();
    if (k == 0) return true;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < k; ++i) comp(0, i) = coef[i];
    for (std::size_t i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
    const auto eigs = comp.eigenvalues();
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (std::abs(eigs(i)) >= 1.0 - 1e-8) return false;
    return true;
}

// Derivative-free Nelder-Mead minimization.
struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
};

template <typename F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, double step, std::size_t max_evals) {
    const std::size_t dim = x0.size();
    SimplexResult out;
    if (dim == 0) {
        out.x = x0;
        out.value = f(x0);
        out.converged = true;
        return out;
    }

    std::vector<std::vector<double>> pts(dim + 1, x0);
    std::vector<double> vals(dim + 1);
    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    for (std::size_t i = 1; i <= dim; ++i) pts[i][i - 1] += step;
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

    while (evals < max_evals) {
        std::vector<std::size_t> order(dim + 1);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order[0], worst = order[dim], second_worst = order[dim - 1];

        if (std::fabs(vals[worst] - vals[best]) <=
            1e-12 * (1.0 + std::fabs(vals[best]))) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t j = 0; j < dim; ++j)
                x[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
            return x;
        };

        const auto reflected = blend(-1.0);
        const double fr = eval(reflected);
        if (fr < vals[best]) {
            const auto expanded = blend(-2.0);
            const double fe = eval(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
        } else if (fr < vals[second_worst]) {
            pts[worst] = reflected;
            vals[worst] = fr;
        } else {
            const auto contracted = blend(fr < vals[worst] ? -0.5 : 0.5);
            const double fc = eval(contracted);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = contracted;
                vals[worst] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < dim; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    vals[i] = eval(pts[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
        if (vals[i] < vals[best]) best = i;
    out.x = pts[best];
    out.value = vals[best];
    return out;
}

} // namespace

ArimaModel fit_arma_css(const std::vector<double>& diffed, std::size_t p, std::size_t q,
                        std::size_t max_evaluations) {
    const std::size_t n = diffed.size();
    if (n < 10 * (p + q + 1)) throw SizeError("fit_arma_css: series too short for order");

    auto objective = [&](const std::vector<double>& params) {
        const double c = params[0];
        std::vector<double> ar(params.begin() + 1, params.begin() + 1 + p);
        std::vector<double> ma(params.begin() + 1 + p, params.end());
        // constrain the search to the stationary/invertible region; outside
        // it the CSS recursion rewards spurious parameter cancellations
        std::vector<double> neg(ma.size());
        for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -ma[i];
        if (!roots_outside_unit_circle(ar) || !roots_outside_unit_circle(neg))
            return std::numeric_limits<double>::infinity();
        return arma_css_objective(diffed, p, q, c, ar, ma);
    };

    std::vector<double> x0(1 + p + q, 0.0);
    const double f0 = objective(x0);
    auto result = nelder_mead(objective, x0, 0.1, max_evaluations);
    if (!result.converged && result.value >= f0) {
        std::ostringstream msg;
        msg << "fit_arma_css(" << p << "," << q << "): no convergence after " << max_evaluations
            << " evaluations, best SSE " << result.value;
        throw ConvergenceError(msg.str());
    }

    ArimaModel model;
    model.p = p;
    model.q = q;
    model.d = 1;
    model.intercept = result.x[0];
    model.ar.assign(result.x.begin() + 1, result.x.begin() + 1 + p);
    model.ma.assign(result.x.begin() + 1 + p, result.x.end());
    model.train_length = n;

    const double n_eff = static_cast<double>(n - p);
    model.sigma2 = result.value / n_eff;
    model.aic = n_eff * std::log(result.value / n_eff) + 2.0 * static_cast<double>(p + q + 1);
    model.stationary = roots_outside_unit_circle(model.ar);
    // invertibility check uses -theta: 1 + theta_1 z + ... has the same roots
    // as 1 - (-theta_1) z - ...
    std::vector<double> neg_ma(model.ma.size());
    for (std::size_t i = 0; i < neg_ma.size(); ++i) neg_ma[i] = -model.ma[i];
    model.invertible = roots_outside_unit_circle(neg_ma);
    return model;
}

AutoArimaResult auto_arima(const std::vector<double>& levels, std::size_t p_max,
                           std::size_t q_max) {
    const std::vector<double> w = difference(levels, 1);
    AutoArimaResult out;
    double best_aic = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t p = 0; p <= p_max; ++p) {
        for (std::size_t q = 0; q <= q_max; ++q) {
            AicCell cell{p, q, 0.0, false};
            try {
                ArimaModel m = fit_arma_css(w, p, q);
                cell.aic = m.aic;
                cell.ok = true;
                if (m.aic < best_aic) {
                    best_aic = m.aic;
                    out.best = std::move(m);
                    any = true;
                }
            } catch (const Error&) {
                // cell recorded as failed
            }
            out.table.push_back(cell);
        }
    }
    if (!any) throw ConvergenceError("auto_arima: every grid cell failed to fit");
    return out;
}

std::vector<double> arima_forecast(const ArimaModel& model, const std::vector<double>& levels,
                                   std::size_t horizon) {
    if (horizon < 1) throw SizeError("arima_forecast: horizon must be >= 1");
    if (levels.size() <= model.d + model.p)
        throw SizeError("arima_forecast: not enough observations for the model order");

    std::vector<double> w = difference(levels, model.d);
    std::vector<double> resid = css_residuals(w, model);

    std::vector<double> out;
    out.reserve(horizon);
    double level = levels.back();
    for (std::size_t h = 0; h < horizon; ++h) {
        double pred = model.intercept;
        for (std::size_t i = 0; i < model.p; ++i) pred += model.ar[i] * w[w.size() - 1 - i];
        for (std::size_t j = 0; j < model.q; ++j)
            pred += model.ma[j] * resid[resid.size() - 1 - j];
        w.push_back(pred);
        resid.push_back(0.0); // future shocks at their expectation
        level += pred;
        out.push_back(level);
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> acf_pacf(const std::vector<double>& series,
                                                             std::size_t max_lag) {
    const std::size_t n = series.size();
    if (n <= max_lag + 1) throw SizeError("acf_pacf: series shorter than max_lag + 1");

    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : series) denom += (v - mean) * (v - mean);
    if (denom == 0.0) throw NumericError("acf_pacf: constant series, zero variance");

    std::vector<double> acf(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) acc += (series[t] - mean) * (series[t + k] - mean);
        acf[k] = acc / denom;
    }

    // Durbin-Levinson: pacf[k] = phi_kk.
    std::vector<double> pacf(max_lag + 1, 0.0);
    pacf[0] = 1.0;
    std::vector<double> phi_prev(max_lag + 1, 0.0), phi(max_lag + 1, 0.0);
    double v = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = acf[k];
        for (std::size_t j = 1; j < k; ++j) num -= phi_prev[j] * acf[k - j];
        const double phi_kk = v == 0.0 ? 0.0 : num / v;
        phi[k] = phi_kk;
        for (std::size_t j = 1; j < k; ++j) phi[j] = phi_prev[j] - phi_kk * phi_prev[k - j];
        v *= (1.0 - phi_kk * phi_kk);
        pacf[k] = phi_kk;
        phi_prev = phi;
    }
    return {std::move(acf), std::move(pacf)};
}

} // namespace ft
