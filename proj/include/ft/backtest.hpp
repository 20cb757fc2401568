#pragma once

#include "ft/indicators.hpp"
#include "ft/ohlc.hpp"

#include <vector>

namespace ft {

struct TradeRecord {
    Date entry_date;
    double entry_price = 0.0;
    Date exit_date;
    double exit_price = 0.0;
    double quantity = 0.0; // fractional shares
    double fee_paid = 0.0; // both legs, currency
    double profit = 0.0;   // quantity * (exit - entry) - fees
    double return_fraction = 0.0;
};

struct BacktestReport {
    std::vector<TradeRecord> trades;
    std::vector<double> equity; // one value per bar, marked to market at close
    std::vector<Date> dates;
    double initial_budget = 100.0;
    double fee_rate = 0.0;
};

// Long-only state machine: ENTER fills at the next bar's open with the entire
// current equity, EXIT sells at the next bar's open; a residual position is
// closed at the final bar's close. Fees are proportional to notional on both
// legs. ENTER while long and EXIT while flat are ignored.
BacktestReport run_backtest(const PriceSeries& series, const SignalSeries& signals,
                            double budget = 100.0, double fee_rate = 0.0);

} // namespace ft
