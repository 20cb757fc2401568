#include "ft/returns_vol.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace ft;

namespace {
constexpr double kAnnual = 252.0;

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v) {
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}
} // namespace

TEST_CASE("log returns of exact exponentials") {
    const double e = std::exp(1.0);
    auto r = log_returns({1.0, e, e * e});
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(1.0));
    CHECK(r[1] == doctest::Approx(1.0));
}

TEST_CASE("log returns of a constant series are zero") {
    auto r = log_returns({5.0, 5.0, 5.0, 5.0});
    for (double x : r) CHECK(x == 0.0);
}

TEST_CASE("log returns telescope to ln(last/first)") {
    const auto v = test::random_positive(50, 31);
    const auto r = log_returns(v);
    const double sum = std::accumulate(r.begin(), r.end(), 0.0);
    CHECK(sum == doctest::Approx(std::log(v.back() / v.front())).epsilon(1e-12));
}

TEST_CASE("log returns reject bad input") {
    CHECK_THROWS_AS(log_returns({1.0}), SizeError);
    CHECK_THROWS_AS(log_returns({1.0, -2.0}), NumericError);
    CHECK_THROWS_AS(log_returns({0.0, 2.0}), NumericError);
}

TEST_CASE("cumulative return, fee-free") {
    auto one = cumulative_return({{100.0, 110.0, 0.0}});
    CHECK(one.cr == doctest::Approx(1.10));

    auto two = cumulative_return({{100.0, 110.0, 0.0}, {100.0, 110.0, 0.0}});
    CHECK(two.cr == doctest::Approx(1.21));
    CHECK(std::exp(two.ln_cr) == doctest::Approx(two.cr).epsilon(1e-10));
}

TEST_CASE("cumulative return with a 1% fee on the sell notional") {
    // fee = 110 * 0.01 = 1.10; factor = 1 + (110 - 100 - 1.10) / 100 = 1.089
    auto r = cumulative_return({{100.0, 110.0, 0.01}});
    CHECK(r.cr == doctest::Approx(1.089).epsilon(1e-12));
}

TEST_CASE("exp(lnCR) equals CR on random fee-free trade lists") {
    Rng rng(77);
    std::vector<TradeLeg> trades;
    for (int i = 0; i < 40; ++i) {
        const double buy = rng.uniform(10.0, 200.0);
        const double sell = buy * rng.uniform(0.6, 1.6);
        trades.push_back({buy, sell, 0.0});
    }
    auto r = cumulative_return(trades);
    CHECK(std::exp(r.ln_cr) == doctest::Approx(r.cr).epsilon(1e-10));
}

TEST_CASE("total loss makes lnCR undefined") {
    CHECK_THROWS_AS(cumulative_return({{100.0, 0.0, 0.0}}), NumericError);
    CHECK_THROWS_AS(cumulative_return({}), SizeError);
}

TEST_CASE("total returns with equal steps") {
    auto r = total_and_standardized_returns({100.0, 110.0, 121.0}, 1);
    REQUIRE(r.total.size() == 2);
    CHECK(r.total[0] == doctest::Approx(0.10));
    CHECK(r.total[1] == doctest::Approx(0.10));
}

TEST_CASE("standardized returns of a constant R vector are undefined") {
    auto r = total_and_standardized_returns({100.0, 110.0, 121.0}, 1);
    CHECK_FALSE(r.standardized.has_value());
}

TEST_CASE("standardized returns have mean 0 and std 1") {
    const auto v = test::random_positive(100, 5);
    auto r = total_and_standardized_returns(v, 1);
    REQUIRE(r.standardized.has_value());
    REQUIRE(r.standardized->size() == v.size() - 1);
    CHECK(mean_of(*r.standardized) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pop_std(*r.standardized) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("total returns respect the horizon") {
    auto r = total_and_standardized_returns({100.0, 50.0, 200.0, 100.0}, 2);
    REQUIRE(r.total.size() == 2);
    CHECK(r.total[0] == doctest::Approx(1.0));  // 100 -> 200
    CHECK(r.total[1] == doctest::Approx(1.0));  // 50 -> 100
    CHECK_THROWS_AS(total_and_standardized_returns({100.0, 110.0}, 2), SizeError);
}

TEST_CASE("volatility on a constant OHLC series") {
    const auto series = test::constant_series(40);
    for (VolKind kind : {VolKind::STDDEV, VolKind::PK, VolKind::GK, VolKind::RS, VolKind::YZ}) {
        auto rv = volatility(series, kind, 30);
        REQUIRE(!rv.values.empty());
        for (double v : rv.values) CHECK(v == doctest::Approx(0.0));
    }
}

TEST_CASE("rolling vector length depends on the estimator's lookback") {
    const auto series = test::synthetic_series(60, 11);
    CHECK(volatility(series, VolKind::PK, 30).values.size() == 31);  // n - N + 1
    CHECK(volatility(series, VolKind::GK, 30).values.size() == 31);
    CHECK(volatility(series, VolKind::RS, 30).values.size() == 31);
    CHECK(volatility(series, VolKind::STDDEV, 30).values.size() == 30); // needs prior close
    CHECK(volatility(series, VolKind::YZ, 30).values.size() == 30);
}

TEST_CASE("volatility window larger than the series is a size error") {
    const auto series = test::synthetic_series(20, 11);
    CHECK_THROWS_AS(volatility(series, VolKind::PK, 30), SizeError);
}

TEST_CASE("Yang-Zhang drift weight") {
    // k = 0.34 / (1.34 + 31/29)
    CHECK(yang_zhang_weight(30) == doctest::Approx(0.34 / (1.34 + 31.0 / 29.0)).epsilon(1e-14));
    CHECK(yang_zhang_weight(30) == doctest::Approx(0.14114).epsilon(1e-4));
}

TEST_CASE("PK window value recomputed from the closed-form expression") {
    const auto series = test::synthetic_series(45, 13);
    const std::size_t N = 30;
    auto rv = volatility(series, VolKind::PK, N);
    // oracle: first window, direct evaluation
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double hl = std::log(series.bars[i].high / series.bars[i].low);
        acc += hl * hl;
    }
    const double oracle = std::sqrt(acc / (4.0 * N * std::log(2.0))) * std::sqrt(kAnnual);
    CHECK(rv.values.front() == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("GK and RS window values recomputed directly") {
    const auto series = test::synthetic_series(45, 17);
    const std::size_t N = 30;
    auto gk = volatility(series, VolKind::GK, N);
    auto rs = volatility(series, VolKind::RS, N);
    double acc_gk = 0.0, acc_rs = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const auto& b = series.bars[i];
        const double hl = std::log(b.high / b.low);
        const double co = std::log(b.close / b.open);
        acc_gk += 0.5 * hl * hl - (2.0 * std::log(2.0) - 1.0) * co * co;
        acc_rs += std::log(b.high / b.close) * std::log(b.high / b.open) +
                  std::log(b.low / b.close) * std::log(b.low / b.open);
    }
    CHECK(gk.values.front() ==
          doctest::Approx(std::sqrt(acc_gk / N) * std::sqrt(kAnnual)).epsilon(1e-12));
    CHECK(rs.values.front() ==
          doctest::Approx(std::sqrt(acc_rs / N) * std::sqrt(kAnnual)).epsilon(1e-12));
}

TEST_CASE("STDDEV window equals population std of close-to-close log returns") {
    const auto series = test::synthetic_series(45, 19);
    const std::size_t N = 30;
    auto rv = volatility(series, VolKind::STDDEV, N);
    // first window consumes bars [0, N]: N returns ending at bar N
    std::vector<double> rets;
    for (std::size_t i = 1; i <= N; ++i)
        rets.push_back(std::log(series.bars[i].close / series.bars[i - 1].close));
    CHECK(rv.values.front() == doctest::Approx(pop_std(rets) * std::sqrt(kAnnual)).epsilon(1e-12));
    CHECK(rv.dates.front() == series.bars[N].date);
}

TEST_CASE("YZ window recomputed from its three components") {
    const auto series = test::synthetic_series(45, 23);
    const std::size_t N = 30;
    auto rv = volatility(series, VolKind::YZ, N);
    // first window: bars [1, N] with previous closes from [0, N-1]
    std::vector<double> overnight, openclose;
    double acc_rs = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
        const auto& b = series.bars[i];
        overnight.push_back(std::log(b.open / series.bars[i - 1].close));
        openclose.push_back(std::log(b.close / b.open));
        acc_rs += std::log(b.high / b.close) * std::log(b.high / b.open) +
                  std::log(b.low / b.close) * std::log(b.low / b.open);
    }
    auto samp_var = [&](const std::vector<double>& v) {
        const double m = mean_of(v);
        double acc = 0.0;
        for (double x : v) acc += (x - m) * (x - m);
        return acc / static_cast<double>(v.size() - 1);
    };
    const double k = yang_zhang_weight(N);
    const double var =
        samp_var(overnight) + k * samp_var(openclose) + (1.0 - k) * (acc_rs / N);
    CHECK(rv.values.front() == doctest::Approx(std::sqrt(var * kAnnual)).epsilon(1e-12));
}

TEST_CASE("all estimators are non-negative on random data") {
    const auto series = test::synthetic_series(200, 29);
    for (VolKind kind : {VolKind::STDDEV, VolKind::PK, VolKind::GK, VolKind::RS, VolKind::YZ}) {
        auto rv = volatility(series, kind, 30);
        for (double v : rv.values) CHECK(v >= 0.0);
        CHECK(rv.summary.min <= rv.summary.mean);
        CHECK(rv.summary.mean <= rv.summary.max);
        CHECK(rv.summary.window == 30);
        CHECK(rv.summary.kind == kind);
        CHECK(rv.dates.size() == rv.values.size());
    }
}

TEST_CASE("RS stays finite on a drift-only series (open=low, close=high)") {
    PriceSeries s;
    s.ticker = "DRIFT";
    Date d{2020, 1, 2};
    double p = 100.0;
    for (int i = 0; i < 40; ++i) {
        const double next = p * 1.01;
        s.bars.push_back(OhlcBar{d, p, next, p, next, 100, {}});
        p = next;
        d = d.next_weekday();
    }
    auto rv = volatility(s, VolKind::RS, 30);
    for (double v : rv.values) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("volatility kind names round-trip") {
    for (VolKind kind : {VolKind::STDDEV, VolKind::PK, VolKind::GK, VolKind::RS, VolKind::YZ})
        CHECK(vol_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(vol_kind_from_string("bogus"), ConfigError);
}
