#include "ft/select.hpp"
#include "ft/errors.hpp"

#include <algorithm>

namespace ft {

std::string to_string(SelectionMode mode) {
    return mode == SelectionMode::BACKTEST ? "BACKTEST" : "FORWARDTEST";
}

PriceSeries with_warmup(const PriceSeries& history, const PriceSeries& window,
                        std::size_t warmup_bars) {
    if (history.empty()) throw SizeError("with_warmup: empty history");
    if (window.empty()) throw SizeError("with_warmup: empty window");
    if (!(history.bars.back().date < window.bars.front().date))
        throw InvariantError("with_warmup: history must end before the window starts");
    PriceSeries out;
    out.ticker = window.ticker.empty() ? history.ticker : window.ticker;
    const std::size_t take = std::min(warmup_bars, history.size());
    out.bars.assign(history.bars.end() - take, history.bars.end());
    out.bars.insert(out.bars.end(), window.bars.begin(), window.bars.end());
    return out;
}

namespace {

CandidateResult evaluate_candidate(const IndicatorSpec& spec, const PriceSeries& evaluation,
                                   const SelectionOptions& opts) {
    CandidateResult result;
    result.spec = spec;

    const SignalSeries signals = signals_for(spec, evaluation);
    const std::size_t n = evaluation.size();
    const std::size_t window = std::min(opts.evaluation_bars, n);

    // Indicators saw the whole series; profit is scored on the trailing
    // window only.
    PriceSeries slice;
    slice.ticker = evaluation.ticker;
    slice.bars.assign(evaluation.bars.end() - window, evaluation.bars.end());
    SignalSeries sliced;
    sliced.actions.assign(signals.actions.end() - window, signals.actions.end());

    result.report = run_backtest(slice, sliced, opts.budget, opts.fee_rate);
    result.metrics = risk_metrics(result.report);
    return result;
}

} // namespace

SelectionResult select_strategy(const std::vector<IndicatorSpec>& candidates,
                                const PriceSeries& evaluation, SelectionMode mode,
                                const SelectionOptions& opts) {
    if (candidates.empty()) throw ConfigError("select_strategy: empty candidate list");
    if (evaluation.size() < opts.evaluation_bars)
        throw SizeError("select_strategy: evaluation series shorter than the scoring window");

    SelectionResult result;
    result.mode = mode;
    result.window_end = evaluation.bars.back().date;
    result.window_start =
        evaluation.bars[evaluation.size() - std::min(opts.evaluation_bars, evaluation.size())].date;

    for (const auto& spec : candidates)
        result.ranked.push_back(evaluate_candidate(spec, evaluation, opts));

    std::stable_sort(result.ranked.begin(), result.ranked.end(),
                     [](const CandidateResult& a, const CandidateResult& b) {
                         if (a.metrics.total_return != b.metrics.total_return)
                             return a.metrics.total_return > b.metrics.total_return;
                         const double sa = a.metrics.sharpe.value_or(0.0);
                         const double sb = b.metrics.sharpe.value_or(0.0);
                         if (sa != sb) return sa > sb;
                         return a.report.trades.size() < b.report.trades.size();
                     });
    result.chosen = result.ranked.front().spec;
    if (result.ranked.size() > 1 &&
        result.ranked[0].metrics.total_return == result.ranked[1].metrics.total_return)
        result.tie_break_note = "total return tied; broke by Sharpe, then fewer trades";
    return result;
}

ModeComparison compare_modes(const std::vector<IndicatorSpec>& candidates,
                             const PriceSeries& history, const PriceSeries& predicted_future,
                             const PriceSeries& real_future, const SelectionOptions& opts) {
    if (candidates.empty()) throw ConfigError("compare_modes: empty candidate list");
    if (history.size() < 2 * opts.evaluation_bars)
        throw SizeError("compare_modes: history too short for the backtest window");

    ModeComparison out;

    // Backtest mode scores the last `evaluation_bars` of the known past.
    PriceSeries past_window;
    past_window.ticker = history.ticker;
    past_window.bars.assign(history.bars.end() - opts.evaluation_bars, history.bars.end());
    PriceSeries past_history;
    past_history.ticker = history.ticker;
    past_history.bars.assign(history.bars.begin(), history.bars.end() - opts.evaluation_bars);
    out.backtest_selection = select_strategy(candidates, with_warmup(past_history, past_window),
                                             SelectionMode::BACKTEST, opts);

    // Forwardtest mode sees real history only up to the selection date; the
    // predicted path is the sole post-date input.
    out.forwardtest_selection = select_strategy(
        candidates, with_warmup(history, predicted_future), SelectionMode::FORWARDTEST, opts);

    // Both picks applied to the real future.
    const PriceSeries future_eval = with_warmup(history, real_future);
    out.backtest_pick_on_future =
        evaluate_candidate(out.backtest_selection.chosen, future_eval, opts);
    out.forwardtest_pick_on_future =
        evaluate_candidate(out.forwardtest_selection.chosen, future_eval, opts);

    out.total_backtest_runs = 2 * candidates.size() + 2;
    return out;
}

} // namespace ft
