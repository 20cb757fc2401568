#include "ft/cluster.hpp"
#include "ft/errors.hpp"
#include "ft/rng.hpp"

#include <cmath>
#include <limits>

namespace ft {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc;
}

double total_wss(const std::vector<std::vector<double>>& points,
                 const std::vector<std::vector<double>>& centroids,
                 const std::vector<std::size_t>& assignments) {
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) acc += sq_dist(points[i], centroids[assignments[i]]);
    return acc;
}

} // namespace

std::vector<std::vector<double>> zscore_standardize(const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2) throw SizeError("zscore_standardize needs at least 2 rows");
    const std::size_t dim = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != dim) throw SizeError("zscore_standardize: ragged rows");

    const double n = static_cast<double>(rows.size());
    std::vector<double> mean(dim, 0.0), var(dim, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dim; ++j) mean[j] += r[j];
    for (auto& m : mean) m /= n;
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dim; ++j) var[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
    for (std::size_t j = 0; j < dim; ++j) {
        var[j] /= n;
        if (var[j] == 0.0)
            throw NumericError("zscore_standardize: zero-variance column " + std::to_string(j));
    }

    std::vector<std::vector<double>> out(rows.size(), std::vector<double>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
            out[i][j] = (rows[i][j] - mean[j]) / std::sqrt(var[j]);
    return out;
}

Clustering kmeans_pp(const std::vector<std::vector<double>>& points, std::size_t k,
                     std::uint64_t seed, std::size_t max_iterations) {
    const std::size_t n = points.size();
    if (k < 1) throw SizeError("kmeans_pp: k must be >= 1");
    if (k > n) throw SizeError("kmeans_pp: k exceeds point count");

    Rng rng(seed);
    Clustering result;
    result.k = k;

    // k-means++ seeding: first center uniform, then proportional to D^2.
    result.centroids.push_back(points[rng.index(n)]);
    std::vector<double> d2(n);
    while (result.centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : result.centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (u < acc) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng.index(n); // all points coincide with existing centers
        }
        result.centroids.push_back(points[chosen]);
    }

    // Lloyd iterations to an assignment fixpoint.
    const std::size_t dim = points[0].size();
    result.assignments.assign(n, 0);
    double prev_wss = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        bool changed = iter == 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_dist(points[i], result.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.assignments[i] != best) {
                result.assignments[i] = best;
                changed = true;
            }
        }
        result.iterations = iter + 1;
        if (!changed) break;

        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < dim; ++j) sums[result.assignments[i]][j] += points[i][j];
            ++counts[result.assignments[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue; // empty cluster keeps its centroid
            for (std::size_t j = 0; j < dim; ++j)
                result.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
        }

        const double w = total_wss(points, result.centroids, result.assignments);
        // Lloyd descent: each update step cannot increase the objective.
        if (w > prev_wss + 1e-9 * (1.0 + prev_wss))
            throw NumericError("kmeans_pp: wss increased during Lloyd iteration");
        prev_wss = w;
    }

    result.wss = total_wss(points, result.centroids, result.assignments);
    return result;
}

Clustering kmeans_best_of(const std::vector<std::vector<double>>& points, std::size_t k,
                          std::uint64_t seed, std::size_t restarts) {
    Clustering best;
    best.wss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        Clustering c = kmeans_pp(points, k, mix_seed(seed, (k << 16) + r));
        if (c.wss < best.wss) best = std::move(c);
    }
    return best;
}

ElbowResult elbow_scan(const std::vector<std::vector<double>>& points, std::size_t k_min,
                       std::size_t k_max, std::uint64_t seed, std::size_t restarts) {
    if (k_min < 1 || k_min > k_max) throw SizeError("elbow_scan: empty k range");
    if (k_max > points.size()) throw SizeError("elbow_scan: k_max exceeds point count");

    ElbowResult result;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        result.ks.push_back(k);
        result.wss.push_back(kmeans_best_of(points, k, seed, restarts).wss);
    }

    // Knee = argmax of the discrete second difference, ties to the smallest k.
    double best_curv = -std::numeric_limits<double>::infinity();
    result.knee = result.ks.front();
    for (std::size_t i = 1; i + 1 < result.wss.size(); ++i) {
        const double curv = result.wss[i - 1] - 2.0 * result.wss[i] + result.wss[i + 1];
        if (curv > best_curv + 1e-12) {
            best_curv = curv;
            result.knee = result.ks[i];
        }
    }

    // Kneedle-style alternative: max vertical distance to the chord joining
    // the endpoints of the wss curve.
    const double x0 = static_cast<double>(result.ks.front());
    const double x1 = static_cast<double>(result.ks.back());
    const double y0 = result.wss.front();
    const double y1 = result.wss.back();
    double best_dist = -std::numeric_limits<double>::infinity();
    result.knee_distance = result.ks.front();
    for (std::size_t i = 0; i < result.wss.size(); ++i) {
        const double x = static_cast<double>(result.ks[i]);
        const double chord = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        const double dist = chord - result.wss[i];
        if (dist > best_dist + 1e-12) {
            best_dist = dist;
            result.knee_distance = result.ks[i];
        }
    }
    return result;
}

std::vector<std::size_t> canonical_relabel(const std::vector<std::size_t>& assignments) {
    std::vector<std::size_t> mapping;
    std::vector<std::size_t> out;
    out.reserve(assignments.size());
    for (std::size_t a : assignments) {
        std::size_t id = mapping.size();
        for (std::size_t i = 0; i < mapping.size(); ++i)
            if (mapping[i] == a) {
                id = i;
                break;
            }
        if (id == mapping.size()) mapping.push_back(a);
        out.push_back(id);
    }
    return out;
}

} // namespace ft
