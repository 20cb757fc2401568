#pragma once

#include "ft/date.hpp"
#include "ft/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ft {

struct OhlcBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    std::int64_t volume = 0;
    std::optional<double> adj_close; // kept as metadata, never used downstream

    // low > 0; low <= high; open, close within [low, high]; volume >= 0
    bool valid() const {
        return low > 0.0 && low <= high && open >= low && open <= high &&
               close >= low && close <= high && volume >= 0;
    }
};

struct PriceSeries {
    std::string ticker;
    std::vector<OhlcBar> bars;

    std::size_t size() const { return bars.size(); }
    bool empty() const { return bars.empty(); }

    std::vector<double> closes() const;
    std::vector<double> opens() const;
    std::vector<double> highs() const;
    std::vector<double> lows() const;
    std::vector<Date> dates() const;

    // Throws InvariantError unless dates strictly increase and bars are valid.
    void validate() const;
};

struct MinMaxScaler {
    double min = 0.0;
    double max = 1.0;

    double transform(double x) const { return (x - min) / (max - min); }
    double inverse(double y) const { return min + y * (max - min); }
};

} // namespace ft
