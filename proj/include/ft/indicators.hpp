#pragma once

#include "ft/ohlc.hpp"

#include <map>
#include <string>
#include <vector>

namespace ft {

enum class IndicatorKind {
    SMA,
    EMA,
    MACD,
    BB,
    STOCH,
    WILLR,
    MOM,
    RSI,
    ATR,
    PO,
    TEMA,
    ADX,
    ST_MO_MACD, // combos
    PO_WILLR,
    PO_RSI,
};

std::string to_string(IndicatorKind kind);
IndicatorKind indicator_kind_from_string(const std::string& name);

// Named indicator with a parameter map. Unset parameters fall back to the
// pinned defaults (EMA alpha 2/(n+1), Wilder smoothing for RSI/ATR/ADX,
// MACD 12/26/9, BB 20 +-2 sigma, Stoch 14/3, W%R 14, MOM 10, TEMA 9,
// ADX 14 with threshold 25, RSI 5 with 70/30 bands).
struct IndicatorSpec {
    IndicatorKind kind = IndicatorKind::SMA;
    std::map<std::string, double> params;

    static IndicatorSpec make(IndicatorKind kind);

    double param(const std::string& name, double fallback) const {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }

    // e.g. "RSI(5,70,30)" or "ADX(14,25)"
    std::string name() const;
};

// The paper's candidate set: twelve single indicators plus three combos.
std::vector<IndicatorSpec> default_catalog();

// Named per-bar columns, aligned to the series; warm-up positions are NaN.
struct IndicatorValues {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const;
};

// Throws SizeError when the series is shorter than the indicator warm-up.
IndicatorValues compute_indicator(const IndicatorSpec& spec, const PriceSeries& series);

enum class Action { HOLD, ENTER, EXIT };

struct SignalSeries {
    std::vector<Action> actions; // one per bar
};

// Per-bar ENTER/EXIT/HOLD by the spec's trading rule. Bars where any needed
// indicator value is undefined yield HOLD.
SignalSeries generate_signals(const IndicatorSpec& spec, const PriceSeries& series,
                              const IndicatorValues& values);

SignalSeries signals_for(const IndicatorSpec& spec, const PriceSeries& series);

// Building blocks, exposed for direct use and oracle tests. All outputs are
// aligned to the input with NaN in warm-up positions.
std::vector<double> sma(const std::vector<double>& values, std::size_t period);
std::vector<double> ema(const std::vector<double>& values, std::size_t period);
std::vector<double> tema(const std::vector<double>& values, std::size_t period);
std::vector<double> momentum(const std::vector<double>& values, std::size_t period);
std::vector<double> rsi(const std::vector<double>& closes, std::size_t period);
std::vector<double> atr(const PriceSeries& series, std::size_t period);

struct MacdResult {
    std::vector<double> macd;
    std::vector<double> signal;
};
MacdResult macd(const std::vector<double>& closes, std::size_t fast = 12, std::size_t slow = 26,
                std::size_t signal_period = 9);

struct BollingerResult {
    std::vector<double> middle;
    std::vector<double> upper;
    std::vector<double> lower;
};
BollingerResult bollinger(const std::vector<double>& closes, std::size_t period = 20,
                          double width = 2.0);

struct StochasticResult {
    std::vector<double> k;
    std::vector<double> d;
};
StochasticResult stochastic(const PriceSeries& series, std::size_t k_period = 14,
                            std::size_t d_period = 3);

std::vector<double> williams_r(const PriceSeries& series, std::size_t period = 14);
std::vector<double> price_oscillator(const std::vector<double>& closes, std::size_t fast = 12,
                                     std::size_t slow = 26);

struct AdxResult {
    std::vector<double> adx;
    std::vector<double> plus_di;
    std::vector<double> minus_di;
};
AdxResult adx(const PriceSeries& series, std::size_t period = 14);

} // namespace ft
