#pragma once

#include "ft/backtest.hpp"
#include "ft/indicators.hpp"
#include "ft/metrics.hpp"
#include "ft/ohlc.hpp"

#include <string>
#include <vector>

namespace ft {

enum class SelectionMode { BACKTEST, FORWARDTEST };

std::string to_string(SelectionMode mode);

struct CandidateResult {
    IndicatorSpec spec;
    BacktestReport report;
    RiskMetrics metrics;
};

struct SelectionResult {
    SelectionMode mode = SelectionMode::BACKTEST;
    Date window_start;
    Date window_end;
    std::vector<CandidateResult> ranked; // total return descending
    IndicatorSpec chosen;                // = ranked.front().spec
    std::string tie_break_note;
};

struct SelectionOptions {
    double budget = 100.0;
    double fee_rate = 0.0;
    std::size_t evaluation_bars = 30; // trailing window scored for ranking
};

// Runs indicators -> signals -> backtest -> risk metrics for every candidate
// on `evaluation`, whose leading bars serve only as indicator warm-up: trades
// are simulated over the full series but ranking uses the last
// `evaluation_bars`. Ranks by total return, ties by Sharpe then fewer trades.
// In FORWARDTEST mode `evaluation` is real warm-up history followed by a
// predicted path; no real bar after the selection date is ever an input.
SelectionResult select_strategy(const std::vector<IndicatorSpec>& candidates,
                                const PriceSeries& evaluation, SelectionMode mode,
                                const SelectionOptions& opts = {});

struct ModeComparison {
    SelectionResult backtest_selection;    // selected on the known past
    SelectionResult forwardtest_selection; // selected on the predicted future
    CandidateResult backtest_pick_on_future;
    CandidateResult forwardtest_pick_on_future;
    std::size_t total_backtest_runs = 0; // bookkeeping: 2*|candidates| + 2
};

// The two-mode experiment: select with each mode, then apply both chosen
// strategies to the real future and report both metric sets.
// `history` must end where `real_future` begins; `predicted_future` is the
// model's path over the same dates as `real_future`.
ModeComparison compare_modes(const std::vector<IndicatorSpec>& candidates,
                             const PriceSeries& history, const PriceSeries& predicted_future,
                             const PriceSeries& real_future, const SelectionOptions& opts = {});

// history tail + evaluation window, as fed to select_strategy.
PriceSeries with_warmup(const PriceSeries& history, const PriceSeries& window,
                        std::size_t warmup_bars = 60);

} // namespace ft
