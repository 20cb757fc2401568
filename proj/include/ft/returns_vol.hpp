#pragma once

#include "ft/ohlc.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ft {

struct TradeLeg {
    double buy_price = 0.0;
    double sell_price = 0.0;
    double fee_rate = 0.0; // per-trade fraction of the sell notional
};

enum class VolKind { STDDEV, PK, GK, RS, YZ };

std::string to_string(VolKind kind);
VolKind vol_kind_from_string(const std::string& name);

struct VolatilitySummary {
    VolKind kind = VolKind::STDDEV;
    std::size_t window = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

// ln(c[i+1]/c[i]); output is one shorter than the input.
std::vector<double> log_returns(const std::vector<double>& closes);

struct CumulativeReturn {
    double cr = 1.0;
    double ln_cr = 0.0;
};

// CR = prod(1 + (sell - buy - fee)/buy), fee = sell * fee_rate.
// Throws NumericError if any factor is <= 0 (log undefined).
CumulativeReturn cumulative_return(const std::vector<TradeLeg>& trades);

struct TotalReturns {
    std::vector<double> total; // R_t = (Z(t+dt) - Z(t)) / Z(t)
    // (R - mean) / std; absent when R is constant (zero variance).
    std::optional<std::vector<double>> standardized;
};

TotalReturns total_and_standardized_returns(const std::vector<double>& closes, std::size_t dt);

struct RollingVolatility {
    std::vector<double> values; // annualized, one per window position
    std::vector<Date> dates;    // date of the last bar in each window
    VolatilitySummary summary;
};

// Rolling historical volatility, annualized by sqrt(252).
// PK/GK/RS windows cover `window` bars; STDDEV/YZ additionally consume the bar
// before each window (returns / overnight gaps), so their vectors are one
// element shorter.
RollingVolatility volatility(const PriceSeries& series, VolKind kind, std::size_t window);

// Yang-Zhang drift weight k = 0.34 / (1.34 + (N+1)/(N-1)).
double yang_zhang_weight(std::size_t window);

} // namespace ft
