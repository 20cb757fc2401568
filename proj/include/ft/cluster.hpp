#pragma once

#include "ft/date.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ft {

struct FeatureRowLabel {
    std::string ticker;
    Date date;
};

// One row per day x ticker observation; columns are the PK/GK/RS/YZ values.
struct VolatilityFeatureMatrix {
    std::vector<std::string> column_names; // {"PK","GK","RS","YZ"} by construction
    std::vector<FeatureRowLabel> labels;
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return rows.empty() ? column_names.size() : rows[0].size(); }
};

// Column-wise z-score (population std). Throws NumericError on a
// zero-variance column, SizeError with fewer than 2 rows.
std::vector<std::vector<double>> zscore_standardize(const std::vector<std::vector<double>>& rows);

struct Clustering {
    std::size_t k = 0;
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> assignments; // row index -> cluster id
    double wss = 0.0;                     // total within-cluster sum of squares
    std::size_t iterations = 0;
};

// k-means++ seeding followed by Lloyd iterations to an assignment fixpoint
// (max 300). Deterministic given the seed.
Clustering kmeans_pp(const std::vector<std::vector<double>>& points, std::size_t k,
                     std::uint64_t seed, std::size_t max_iterations = 300);

// Best of `restarts` seeded k-means++ runs by wss.
Clustering kmeans_best_of(const std::vector<std::vector<double>>& points, std::size_t k,
                          std::uint64_t seed, std::size_t restarts);

struct ElbowResult {
    std::vector<std::size_t> ks;
    std::vector<double> wss;            // one per k, best-of-restarts
    std::size_t knee = 0;               // argmax of the discrete second difference
    std::size_t knee_distance = 0;      // kneedle-style max distance to the chord
};

ElbowResult elbow_scan(const std::vector<std::vector<double>>& points, std::size_t k_min,
                       std::size_t k_max, std::uint64_t seed, std::size_t restarts = 10);

// Relabels clusters by order of first appearance so two clusterings that
// differ only in centroid ids compare equal.
std::vector<std::size_t> canonical_relabel(const std::vector<std::size_t>& assignments);

} // namespace ft
