#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ft {

// Pearson correlation coefficient. Throws NumericError on constant input,
// SizeError on mismatched or too-short vectors.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// One r per window position; an element is NaN where the slice is constant.
std::vector<double> rolling_pearson(const std::vector<double>& x, const std::vector<double>& y,
                                    std::size_t window = 120);

struct DtwResult {
    double cost = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> path; // (i, j), start (0,0)
};

// Classic dynamic-programming DTW with |x_i - y_j| local cost. An optional
// Sakoe-Chiba band limits |i - j| when band >= 0.
DtwResult dtw_distance(const std::vector<double>& x, const std::vector<double>& y, long band = -1);

} // namespace ft
