#include "ft/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ft {

std::vector<double> PriceSeries::closes() const {
    std::vector<double> v;
    v.reserve(bars.size());
    for (const auto& b : bars) v.push_back(b.close);
    return v;
}

std::vector<double> PriceSeries::opens() const {
    std::vector<double> v;
    v.reserve(bars.size());
    for (const auto& b : bars) v.push_back(b.open);
    return v;
}

std::vector<double> PriceSeries::highs() const {
    std::vector<double> v;
    v.reserve(bars.size());
    for (const auto& b : bars) v.push_back(b.high);
    return v;
}

std::vector<double> PriceSeries::lows() const {
    std::vector<double> v;
    v.reserve(bars.size());
    for (const auto& b : bars) v.push_back(b.low);
    return v;
}

std::vector<Date> PriceSeries::dates() const {
    std::vector<Date> v;
    v.reserve(bars.size());
    for (const auto& b : bars) v.push_back(b.date);
    return v;
}

void PriceSeries::validate() const {
    for (std::size_t i = 0; i < bars.size(); ++i) {
        if (!bars[i].valid())
            throw InvariantError("bar " + bars[i].date.to_string() + " violates OHLC invariants");
        if (i > 0 && !(bars[i - 1].date < bars[i].date))
            throw InvariantError("dates not strictly increasing at " + bars[i].date.to_string());
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v))
        throw ParseError(std::string("bad ") + what + " '" + s + "'");
    return v;
}

double parse_price(const std::string& s) { return parse_number(s, "price"); }

std::int64_t parse_volume(const std::string& s) {
    // Yahoo occasionally exports volume as a decimal literal.
    double v = parse_number(s, "volume");
    if (v < 0) throw ParseError("bad volume '" + s + "'");
    return static_cast<std::int64_t>(std::llround(v));
}

} // namespace

ParseResult parse_ohlc_csv(std::istream& in, const ParseOptions& opts) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input: missing CSV header");

    auto header = split_csv_line(line);
    for (auto& h : header) h = trim(h);

    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int c_date = col("Date"), c_open = col("Open"), c_high = col("High"),
              c_low = col("Low"), c_close = col("Close"), c_adj = col("Adj Close"),
              c_vol = col("Volume");
    if (c_date < 0 || c_open < 0 || c_high < 0 || c_low < 0 || c_close < 0 || c_vol < 0)
        throw ParseError("malformed header: need Date,Open,High,Low,Close,Volume, got '" + line + "'");

    ParseResult result;
    result.series.ticker = opts.ticker;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        OhlcBar bar;
        try {
            if (static_cast<int>(fields.size()) <= std::max({c_date, c_open, c_high, c_low, c_close, c_vol}))
                throw ParseError("too few fields");
            bar.date = Date::parse(trim(fields[c_date]));
            bar.open = parse_price(trim(fields[c_open]));
            bar.high = parse_price(trim(fields[c_high]));
            bar.low = parse_price(trim(fields[c_low]));
            bar.close = parse_price(trim(fields[c_close]));
            bar.volume = parse_volume(trim(fields[c_vol]));
            if (c_adj >= 0 && static_cast<int>(fields.size()) > c_adj && !trim(fields[c_adj]).empty())
                bar.adj_close = parse_price(trim(fields[c_adj]));
            if (!bar.valid()) throw InvariantError("row violates OHLC invariants");
        } catch (const Error& e) {
            if (opts.strict)
                throw InvariantError("line " + std::to_string(lineno) + ": " + e.what());
            result.skipped.push_back({lineno, e.what()});
            continue;
        }
        result.series.bars.push_back(bar);
    }

    std::stable_sort(result.series.bars.begin(), result.series.bars.end(),
                     [](const OhlcBar& a, const OhlcBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < result.series.bars.size(); ++i)
        if (result.series.bars[i - 1].date == result.series.bars[i].date)
            throw InvariantError("duplicate date " + result.series.bars[i].date.to_string());
    return result;
}

ParseResult parse_ohlc_csv(const std::string& text, const ParseOptions& opts) {
    std::istringstream in(text);
    return parse_ohlc_csv(in, opts);
}

ParseResult load_ohlc_csv(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_ohlc_csv(in, opts);
}

namespace {

std::string format_price(double v) {
    // Shortest representation that round-trips a double.
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = std::stod(buf);
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        if (std::stod(probe) == back) return probe;
    }
    return buf;
}

} // namespace

std::string serialize_ohlc_csv(const PriceSeries& series) {
    std::ostringstream out;
    out << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    for (const auto& b : series.bars) {
        out << b.date.to_string() << ',' << format_price(b.open) << ',' << format_price(b.high)
            << ',' << format_price(b.low) << ',' << format_price(b.close) << ',';
        if (b.adj_close) out << format_price(*b.adj_close);
        out << ',' << b.volume << '\n';
    }
    return out.str();
}

std::pair<PriceSeries, PriceSeries> split_train_test(const PriceSeries& series,
                                                     const Date& train_end) {
    PriceSeries train{series.ticker, {}}, test{series.ticker, {}};
    for (const auto& b : series.bars) {
        (b.date <= train_end ? train : test).bars.push_back(b);
    }
    if (train.empty() || test.empty())
        throw SizeError("split at " + train_end.to_string() + " leaves an empty partition (" +
                        std::to_string(train.size()) + "/" + std::to_string(test.size()) + ")");
    return {std::move(train), std::move(test)};
}

std::pair<std::vector<double>, MinMaxScaler> minmax_normalize(const std::vector<double>& values) {
    if (values.size() < 2) throw SizeError("minmax_normalize needs at least 2 values");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw NumericError("minmax_normalize: constant vector, degenerate scale");
    MinMaxScaler scaler{*lo, *hi};
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(scaler.transform(v));
    return {std::move(out), scaler};
}

std::vector<double> minmax_inverse(const std::vector<double>& normalized,
                                   const MinMaxScaler& scaler) {
    std::vector<double> out;
    out.reserve(normalized.size());
    for (double v : normalized) out.push_back(scaler.inverse(v));
    return out;
}

} // namespace ft
