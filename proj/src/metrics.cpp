#include "ft/metrics.hpp"
#include "ft/backtest.hpp"
#include "ft/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ft {

ForecastErrors forecast_errors(const std::vector<double>& actual,
                               const std::vector<double>& predicted) {
    if (actual.size() != predicted.size()) throw SizeError("forecast_errors: length mismatch");
    const std::size_t n = actual.size();
    if (n < 2) throw SizeError("forecast_errors: need at least 2 points");

    ForecastErrors e;
    double se = 0.0, ae = 0.0, ape = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = actual[i] - predicted[i];
        se += d * d;
        ae += std::fabs(d);
        if (actual[i] == 0.0) throw NumericError("forecast_errors: zero actual, MAPE undefined");
        ape += std::fabs(d / actual[i]);
    }
    e.mse = se / static_cast<double>(n);
    e.rmse = std::sqrt(e.mse);
    e.mae = ae / static_cast<double>(n);
    e.mape = ape / static_cast<double>(n);

    // EVS = 1 - Var(pred - actual) / Var(actual), biased variances.
    const double n_d = static_cast<double>(n);
    double mean_a = std::accumulate(actual.begin(), actual.end(), 0.0) / n_d;
    double mean_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_r += predicted[i] - actual[i];
    mean_r /= n_d;
    double var_a = 0.0, var_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        var_a += (actual[i] - mean_a) * (actual[i] - mean_a);
        const double r = predicted[i] - actual[i];
        var_r += (r - mean_r) * (r - mean_r);
    }
    if (var_a == 0.0) throw NumericError("forecast_errors: constant actual, EVS undefined");
    e.evs = 1.0 - var_r / var_a;
    return e;
}

double max_drawdown(const std::vector<double>& equity) {
    if (equity.size() < 2) throw SizeError("max_drawdown: need at least 2 points");
    double peak = equity[0];
    double mdd = 0.0;
    for (double v : equity) {
        peak = std::max(peak, v);
        if (peak > 0.0) mdd = std::max(mdd, (peak - v) / peak);
    }
    return mdd;
}

RiskMetrics risk_metrics(const BacktestReport& report, double periods_per_year) {
    const auto& equity = report.equity;
    if (equity.size() < 2) throw SizeError("risk_metrics: equity curve too short");

    RiskMetrics m;
    m.total_return = equity.back() - report.initial_budget;
    m.mdd = max_drawdown(equity);

    std::vector<double> rets;
    rets.reserve(equity.size() - 1);
    for (std::size_t i = 1; i < equity.size(); ++i) {
        if (equity[i - 1] <= 0.0) throw NumericError("risk_metrics: non-positive equity");
        rets.push_back(equity[i] / equity[i - 1] - 1.0);
    }
    const double n = static_cast<double>(rets.size());
    const double mean = std::accumulate(rets.begin(), rets.end(), 0.0) / n;
    double var = 0.0, downside = 0.0;
    std::size_t n_down = 0;
    for (double r : rets) {
        var += (r - mean) * (r - mean);
        if (r < 0.0) {
            downside += r * r;
            ++n_down;
        }
    }
    var /= n;
    const double sd = std::sqrt(var);
    const double ann = std::sqrt(periods_per_year);

    if (sd > 0.0) m.sharpe = mean / sd * ann;
    if (n_down > 0) {
        const double dd = std::sqrt(downside / n);
        if (dd > 0.0) m.sortino = mean / dd * ann;
    }
    if (m.mdd > 0.0) m.calmar = mean * periods_per_year / m.mdd;

    // Expectancy in R-multiple form over closed trades:
    // (win_rate * avg_win - loss_rate * avg_loss) / avg_loss.
    double win_sum = 0.0, loss_sum = 0.0;
    std::size_t wins = 0, losses = 0;
    for (const auto& t : report.trades) {
        if (t.profit >= 0.0) {
            win_sum += t.profit;
            ++wins;
        } else {
            loss_sum += -t.profit;
            ++losses;
        }
    }
    if (!report.trades.empty() && losses > 0 && loss_sum > 0.0) {
        const double total = static_cast<double>(report.trades.size());
        const double win_rate = static_cast<double>(wins) / total;
        const double loss_rate = static_cast<double>(losses) / total;
        const double avg_win = wins > 0 ? win_sum / static_cast<double>(wins) : 0.0;
        const double avg_loss = loss_sum / static_cast<double>(losses);
        m.expectancy = (win_rate * avg_win - loss_rate * avg_loss) / avg_loss;
    }
    return m;
}

} // namespace ft
