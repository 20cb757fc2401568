#include "ft/synchrony.hpp"
#include "ft/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ft {

namespace {

// Returns NaN instead of throwing; shared by the global and rolling variants.
double pearson_or_nan(const double* x, const double* y, std::size_t n) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw SizeError("pearson: length mismatch");
    if (x.size() < 2) throw SizeError("pearson: need at least 2 samples");
    const double r = pearson_or_nan(x.data(), y.data(), x.size());
    if (std::isnan(r)) throw NumericError("pearson: constant input, zero variance");
    return r;
}

std::vector<double> rolling_pearson(const std::vector<double>& x, const std::vector<double>& y,
                                    std::size_t window) {
    if (x.size() != y.size()) throw SizeError("rolling_pearson: length mismatch");
    if (window < 2) throw SizeError("rolling_pearson: window must be >= 2");
    if (x.size() < window) throw SizeError("rolling_pearson: series shorter than window");
    std::vector<double> out;
    out.reserve(x.size() - window + 1);
    for (std::size_t i = 0; i + window <= x.size(); ++i)
        out.push_back(pearson_or_nan(x.data() + i, y.data() + i, window));
    return out;
}

DtwResult dtw_distance(const std::vector<double>& x, const std::vector<double>& y, long band) {
    const std::size_t n = x.size(), m = y.size();
    if (n == 0 || m == 0) throw SizeError("dtw_distance: empty input");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n * m, inf);
    auto at = [m](std::size_t i, std::size_t j) { return i * m + j; };
    auto in_band = [band](std::size_t i, std::size_t j) {
        return band < 0 || std::llabs(static_cast<long long>(i) - static_cast<long long>(j)) <= band;
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!in_band(i, j)) continue;
            const double local = std::fabs(x[i] - y[j]);
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                best = inf;
                if (i > 0) best = std::min(best, cost[at(i - 1, j)]);
                if (j > 0) best = std::min(best, cost[at(i, j - 1)]);
                if (i > 0 && j > 0) best = std::min(best, cost[at(i - 1, j - 1)]);
            }
            cost[at(i, j)] = local + best;
        }
    }

    DtwResult result;
    result.cost = cost[at(n - 1, m - 1)];
    if (!std::isfinite(result.cost)) throw NumericError("dtw_distance: band too narrow, no path");

    // Backtrack, preferring the diagonal on ties.
    std::size_t i = n - 1, j = m - 1;
    result.path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        double best = inf;
        std::size_t bi = i, bj = j;
        if (i > 0 && j > 0 && cost[at(i - 1, j - 1)] <= best) {
            best = cost[at(i - 1, j - 1)];
            bi = i - 1;
            bj = j - 1;
        }
        if (i > 0 && cost[at(i - 1, j)] < best) {
            best = cost[at(i - 1, j)];
            bi = i - 1;
            bj = j;
        }
        if (j > 0 && cost[at(i, j - 1)] < best) {
            bi = i;
            bj = j - 1;
        }
        i = bi;
        j = bj;
        result.path.emplace_back(i, j);
    }
    std::reverse(result.path.begin(), result.path.end());
    return result;
}

} // namespace ft
