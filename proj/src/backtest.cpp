#include "ft/backtest.hpp"
#include "ft/errors.hpp"

namespace ft {

BacktestReport run_backtest(const PriceSeries& series, const SignalSeries& signals,
                            double budget, double fee_rate) {
    const std::size_t n = series.size();
    if (signals.actions.size() != n) throw SizeError("run_backtest: signals not aligned to series");
    if (budget <= 0.0) throw ConfigError("run_backtest: budget must be positive");
    if (fee_rate < 0.0) throw ConfigError("run_backtest: negative fee rate");

    BacktestReport report;
    report.initial_budget = budget;
    report.fee_rate = fee_rate;
    report.equity.reserve(n);
    report.dates = series.dates();

    double cash = budget;
    double qty = 0.0;
    bool long_position = false;
    TradeRecord open_trade;

    enum class Pending { NONE, BUY, SELL };
    Pending pending = Pending::NONE;

    for (std::size_t i = 0; i < n; ++i) {
        const auto& bar = series.bars[i];

        // Fill the order queued on the previous bar's signal at this open.
        if (pending == Pending::BUY && !long_position) {
            // Quantity such that notional plus fee consumes the whole equity.
            qty = cash / (bar.open * (1.0 + fee_rate));
            const double fee = qty * bar.open * fee_rate;
            open_trade = TradeRecord{};
            open_trade.entry_date = bar.date;
            open_trade.entry_price = bar.open;
            open_trade.quantity = qty;
            open_trade.fee_paid = fee;
            cash = 0.0;
            long_position = true;
        } else if (pending == Pending::SELL && long_position) {
            const double gross = qty * bar.open;
            const double fee = gross * fee_rate;
            cash = gross - fee;
            open_trade.exit_date = bar.date;
            open_trade.exit_price = bar.open;
            open_trade.fee_paid += fee;
            open_trade.profit = qty * (bar.open - open_trade.entry_price) - open_trade.fee_paid;
            open_trade.return_fraction =
                open_trade.profit / (open_trade.quantity * open_trade.entry_price);
            report.trades.push_back(open_trade);
            qty = 0.0;
            long_position = false;
        }
        pending = Pending::NONE;

        // Signals on this bar's close queue an order for the next open.
        // Repeat ENTER while long / EXIT while flat are ignored.
        if (signals.actions[i] == Action::ENTER && !long_position) pending = Pending::BUY;
        else if (signals.actions[i] == Action::EXIT && long_position) pending = Pending::SELL;

        // Mark to market at the close; force-close at the final bar.
        if (i + 1 == n && long_position) {
            const double gross = qty * bar.close;
            const double fee = gross * fee_rate;
            cash = gross - fee;
            open_trade.exit_date = bar.date;
            open_trade.exit_price = bar.close;
            open_trade.fee_paid += fee;
            open_trade.profit = qty * (bar.close - open_trade.entry_price) - open_trade.fee_paid;
            open_trade.return_fraction =
                open_trade.profit / (open_trade.quantity * open_trade.entry_price);
            report.trades.push_back(open_trade);
            qty = 0.0;
            long_position = false;
        }
        report.equity.push_back(long_position ? qty * bar.close : cash);
    }
    return report;
}

} // namespace ft
