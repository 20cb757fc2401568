#pragma once

#include <optional>
#include <vector>

namespace ft {

struct TradeRecord;
struct BacktestReport;

struct ForecastErrors {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double mape = 0.0;
    double evs = 0.0;
};

// Standard mean-based error metrics; EVS = 1 - Var(pred - actual)/Var(actual)
// with biased variances. Throws NumericError when an actual value is zero
// (MAPE undefined) or Var(actual) is zero.
ForecastErrors forecast_errors(const std::vector<double>& actual,
                               const std::vector<double>& predicted);

struct RiskMetrics {
    double total_return = 0.0; // final - initial equity, currency units
    double mdd = 0.0;          // max drawdown, fraction of the peak
    // Ratios are absent where undefined (zero volatility, no losing trades...).
    std::optional<double> expectancy;
    std::optional<double> sharpe;
    std::optional<double> sortino;
    std::optional<double> calmar;
};

// Daily-return-based risk metrics over a backtest's equity curve, annualized
// by sqrt(periods_per_year) (Sharpe/Sortino) and periods_per_year (Calmar).
RiskMetrics risk_metrics(const BacktestReport& report, double periods_per_year = 252.0);

// Largest peak-to-trough relative decline; 0 on a non-decreasing curve.
double max_drawdown(const std::vector<double>& equity);

} // namespace ft
