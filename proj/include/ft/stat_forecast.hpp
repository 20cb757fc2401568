#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ft {

struct AdfResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags = 0;         // chosen lag count, AIC-minimizing
    std::size_t observations = 0; // regression rows used at the chosen lag
    double crit_1pct = 0.0;
    double crit_5pct = 0.0;
    double crit_10pct = 0.0;

    bool stationary_at_5pct() const { return statistic < crit_5pct; }
};

// Augmented Dickey-Fuller unit root test with constant, lag length chosen by
// AIC over 0..max_lag (max_lag <= 0 picks the Schwert 12*(n/100)^0.25 rule).
// Critical values and p-value follow the standard response-surface
// approximations for the constant-only case.
AdfResult adf_test(const std::vector<double>& series, long max_lag = -1);

// Applies the first difference d times; length shrinks by d.
std::vector<double> difference(const std::vector<double>& series, std::size_t d = 1);

struct ArimaModel {
    std::size_t p = 0, d = 1, q = 0;
    std::vector<double> ar;       // phi_1..phi_p
    std::vector<double> ma;       // theta_1..theta_q
    double intercept = 0.0;
    double sigma2 = 0.0;          // residual variance
    double aic = 0.0;             // N*ln(SSE/N) + 2*(p+q+1), constants omitted
    std::size_t train_length = 0; // points of the differenced series
    bool stationary = true;       // AR polynomial roots outside the unit circle
    bool invertible = true;       // MA polynomial roots outside the unit circle
};

// Conditional-sum-of-squares ARMA fit on an already-differenced series,
// optimized by Nelder-Mead from zero-initialized coefficients. Throws
// ConvergenceError (carrying best-so-far in the message) when the simplex
// fails to shrink within the evaluation budget.
ArimaModel fit_arma_css(const std::vector<double>& diffed, std::size_t p, std::size_t q,
                        std::size_t max_evaluations = 20000);

// One-step CSS residual sum of squares at the given parameters; exposed so
// tests can check the optimizer never worsens the zero start.
double arma_css_objective(const std::vector<double>& diffed, std::size_t p, std::size_t q,
                          double intercept, const std::vector<double>& ar,
                          const std::vector<double>& ma);

struct AicCell {
    std::size_t p = 0, q = 0;
    double aic = 0.0;
    bool ok = false;
};

struct AutoArimaResult {
    ArimaModel best;
    std::vector<AicCell> table;
};

// Exhaustive grid over p in [0,p_max], q in [0,q_max] with d=1 on the level
// series, minimum AIC wins.
AutoArimaResult auto_arima(const std::vector<double>& levels, std::size_t p_max = 5,
                           std::size_t q_max = 2);

// Standard ARIMA recursion: forecasts the next `horizon` levels given the
// training levels the model was fitted on (residuals are rebuilt from them).
std::vector<double> arima_forecast(const ArimaModel& model, const std::vector<double>& levels,
                                   std::size_t horizon = 30);

// Sample ACF (acf[0] = 1) and PACF via Durbin-Levinson.
std::pair<std::vector<double>, std::vector<double>> acf_pacf(const std::vector<double>& series,
                                                             std::size_t max_lag);

} // namespace ft
