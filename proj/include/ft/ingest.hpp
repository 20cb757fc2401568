#pragma once

#include "ft/ohlc.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ft {

struct RowIssue {
    std::size_t line = 0; // 1-based line number in the source text
    std::string message;
};

struct ParseOptions {
    std::string ticker;
    // strict: any invalid row aborts ingestion. permissive: skip and report.
    bool strict = true;
};

struct ParseResult {
    PriceSeries series;
    std::vector<RowIssue> skipped; // populated only in permissive mode
};

// Yahoo-Finance-style CSV: header Date,Open,High,Low,Close[,Adj Close],Volume.
// Bars come back sorted by date. Throws ParseError on a malformed header,
// InvariantError (strict mode) on a row violating OHLC invariants.
ParseResult parse_ohlc_csv(std::istream& in, const ParseOptions& opts = {});
ParseResult parse_ohlc_csv(const std::string& text, const ParseOptions& opts = {});

ParseResult load_ohlc_csv(const std::string& path, const ParseOptions& opts = {});

// Inverse of parse: emits the full header and one row per bar.
std::string serialize_ohlc_csv(const PriceSeries& series);

// train = bars dated <= train_end, test = the rest. Throws SizeError if either
// side would be empty.
std::pair<PriceSeries, PriceSeries> split_train_test(const PriceSeries& series,
                                                     const Date& train_end);

// Maps values into [0,1]. Throws NumericError on a constant vector.
std::pair<std::vector<double>, MinMaxScaler> minmax_normalize(const std::vector<double>& values);

std::vector<double> minmax_inverse(const std::vector<double>& normalized,
                                   const MinMaxScaler& scaler);

// GET the given http(s) URL and return the body verbatim.
// Throws TransportError on any non-2xx status or connection failure.
std::string fetch_remote_csv(const std::string& url);

} // namespace ft
