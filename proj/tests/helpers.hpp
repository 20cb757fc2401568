#pragma once

#include "ft/ohlc.hpp"
#include "ft/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ft::test {

// Random-walk OHLC series with coherent bars, deterministic given the seed.
inline PriceSeries synthetic_series(std::size_t n, std::uint64_t seed,
                                    double start_price = 100.0, double daily_vol = 0.02,
                                    double drift = 0.0) {
    Rng rng(seed);
    PriceSeries s;
    s.ticker = "SYN";
    Date d{2020, 1, 2};
    double close = start_price;
    for (std::size_t i = 0; i < n; ++i) {
        OhlcBar bar;
        bar.date = d;
        const double open = close * std::exp(drift + daily_vol * 0.3 * rng.normal());
        const double c = open * std::exp(drift + daily_vol * rng.normal());
        const double wick_up = std::fabs(daily_vol * 0.5 * rng.normal());
        const double wick_dn = std::fabs(daily_vol * 0.5 * rng.normal());
        bar.open = open;
        bar.close = c;
        bar.high = std::max(open, c) * std::exp(wick_up);
        bar.low = std::min(open, c) * std::exp(-wick_dn);
        bar.volume = 1000 + static_cast<std::int64_t>(rng.index(9000));
        s.bars.push_back(bar);
        close = c;
        d = d.next_weekday();
    }
    return s;
}

inline PriceSeries constant_series(std::size_t n, double price = 50.0) {
    PriceSeries s;
    s.ticker = "FLAT";
    Date d{2020, 1, 2};
    for (std::size_t i = 0; i < n; ++i) {
        s.bars.push_back(OhlcBar{d, price, price, price, price, 100, {}});
        d = d.next_weekday();
    }
    return s;
}

inline std::vector<double> random_positive(std::size_t n, std::uint64_t seed, double lo = 1.0,
                                           double hi = 100.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

} // namespace ft::test
