#include "ft/returns_vol.hpp"
#include "ft/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ft {

namespace {

constexpr double kAnnualization = 252.0;

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v) {
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

VolatilitySummary summarize(VolKind kind, std::size_t window, const std::vector<double>& values) {
    VolatilitySummary s;
    s.kind = kind;
    s.window = window;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    s.mean = mean_of(values);
    s.stddev = pop_std(values);
    return s;
}

} // namespace

std::string to_string(VolKind kind) {
    switch (kind) {
        case VolKind::STDDEV: return "STDDEV";
        case VolKind::PK: return "PK";
        case VolKind::GK: return "GK";
        case VolKind::RS: return "RS";
        case VolKind::YZ: return "YZ";
    }
    return "?";
}

VolKind vol_kind_from_string(const std::string& name) {
    if (name == "STDDEV" || name == "stddev") return VolKind::STDDEV;
    if (name == "PK" || name == "pk") return VolKind::PK;
    if (name == "GK" || name == "gk") return VolKind::GK;
    if (name == "RS" || name == "rs") return VolKind::RS;
    if (name == "YZ" || name == "yz") return VolKind::YZ;
    throw ConfigError("unknown volatility estimator '" + name + "'");
}

std::vector<double> log_returns(const std::vector<double>& closes) {
    if (closes.size() < 2) throw SizeError("log_returns needs at least 2 prices");
    std::vector<double> out;
    out.reserve(closes.size() - 1);
    for (std::size_t i = 0; i + 1 < closes.size(); ++i) {
        if (closes[i] <= 0.0 || closes[i + 1] <= 0.0)
            throw NumericError("log_returns: non-positive price at index " + std::to_string(i));
        out.push_back(std::log(closes[i + 1] / closes[i]));
    }
    return out;
}

CumulativeReturn cumulative_return(const std::vector<TradeLeg>& trades) {
    if (trades.empty()) throw SizeError("cumulative_return: empty trade list");
    CumulativeReturn result;
    for (const auto& t : trades) {
        if (t.buy_price <= 0.0) throw NumericError("cumulative_return: non-positive buy price");
        if (t.fee_rate < 0.0) throw NumericError("cumulative_return: negative fee rate");
        const double fee = t.sell_price * t.fee_rate;
        const double factor = 1.0 + (t.sell_price - t.buy_price - fee) / t.buy_price;
        if (factor <= 0.0)
            throw NumericError("cumulative_return: trade loses >= 100%, log return undefined");
        result.cr *= factor;
        result.ln_cr += std::log(factor);
    }
    return result;
}

TotalReturns total_and_standardized_returns(const std::vector<double>& closes, std::size_t dt) {
    if (dt == 0) throw SizeError("total returns: dt must be >= 1");
    if (closes.size() <= dt) throw SizeError("total returns: series shorter than dt");
    TotalReturns out;
    out.total.reserve(closes.size() - dt);
    for (std::size_t t = 0; t + dt < closes.size(); ++t) {
        if (closes[t] == 0.0) throw NumericError("total returns: zero price at index " + std::to_string(t));
        out.total.push_back((closes[t + dt] - closes[t]) / closes[t]);
    }
    const double m = mean_of(out.total);
    const double s = pop_std(out.total);
    if (s > 0.0) {
        std::vector<double> z;
        z.reserve(out.total.size());
        for (double r : out.total) z.push_back((r - m) / s);
        out.standardized = std::move(z);
    }
    return out;
}

double yang_zhang_weight(std::size_t window) {
    const double n = static_cast<double>(window);
    return 0.34 / (1.34 + (n + 1.0) / (n - 1.0));
}

RollingVolatility volatility(const PriceSeries& series, VolKind kind, std::size_t window) {
    const std::size_t n = series.size();
    if (window < 2) throw SizeError("volatility: window must be >= 2");
    // STDDEV and YZ consume one extra bar (previous close) per window.
    const bool needs_prev = kind == VolKind::STDDEV || kind == VolKind::YZ;
    const std::size_t bars_needed = window + (needs_prev ? 1 : 0);
    if (n < bars_needed)
        throw SizeError("volatility: series of " + std::to_string(n) + " bars shorter than window");

    const auto& bars = series.bars;
    RollingVolatility out;
    const std::size_t positions = n - bars_needed + 1;
    out.values.reserve(positions);
    out.dates.reserve(positions);

    for (std::size_t start = 0; start < positions; ++start) {
        // Window covers bars [first, first + window), with bars[first - 1]
        // available when needs_prev.
        const std::size_t first = start + (needs_prev ? 1 : 0);
        double var = 0.0;
        const double N = static_cast<double>(window);
        switch (kind) {
            case VolKind::STDDEV: {
                std::vector<double> rets(window);
                for (std::size_t i = 0; i < window; ++i)
                    rets[i] = std::log(bars[first + i].close / bars[first + i - 1].close);
                const double s = pop_std(rets);
                var = s * s;
                break;
            }
            case VolKind::PK: {
                double acc = 0.0;
                for (std::size_t i = 0; i < window; ++i) {
                    const double hl = std::log(bars[first + i].high / bars[first + i].low);
                    acc += hl * hl;
                }
                var = acc / (4.0 * N * std::log(2.0));
                break;
            }
            case VolKind::GK: {
                double acc = 0.0;
                for (std::size_t i = 0; i < window; ++i) {
                    const auto& b = bars[first + i];
                    const double hl = std::log(b.high / b.low);
                    const double co = std::log(b.close / b.open);
                    acc += 0.5 * hl * hl - (2.0 * std::log(2.0) - 1.0) * co * co;
                }
                var = acc / N;
                break;
            }
            case VolKind::RS: {
                double acc = 0.0;
                for (std::size_t i = 0; i < window; ++i) {
                    const auto& b = bars[first + i];
                    acc += std::log(b.high / b.close) * std::log(b.high / b.open) +
                           std::log(b.low / b.close) * std::log(b.low / b.open);
                }
                var = acc / N;
                break;
            }
            case VolKind::YZ: {
                std::vector<double> overnight(window), open_close(window);
                double rs_acc = 0.0;
                for (std::size_t i = 0; i < window; ++i) {
                    const auto& b = bars[first + i];
                    overnight[i] = std::log(b.open / bars[first + i - 1].close);
                    open_close[i] = std::log(b.close / b.open);
                    rs_acc += std::log(b.high / b.close) * std::log(b.high / b.open) +
                              std::log(b.low / b.close) * std::log(b.low / b.open);
                }
                const double mo = mean_of(overnight);
                const double mc = mean_of(open_close);
                double vo = 0.0, vc = 0.0;
                for (std::size_t i = 0; i < window; ++i) {
                    vo += (overnight[i] - mo) * (overnight[i] - mo);
                    vc += (open_close[i] - mc) * (open_close[i] - mc);
                }
                vo /= (N - 1.0);
                vc /= (N - 1.0);
                const double rs_var = rs_acc / N;
                const double k = yang_zhang_weight(window);
                var = vo + k * vc + (1.0 - k) * rs_var;
                break;
            }
        }
        // GK can go fractionally negative on pathological bars; clamp.
        var = std::max(var, 0.0);
        out.values.push_back(std::sqrt(var * kAnnualization));
        out.dates.push_back(bars[first + window - 1].date);
    }

    out.summary = summarize(kind, window, out.values);
    return out;
}

} // namespace ft
