#pragma once

#include "ft/date.hpp"
#include "ft/ohlc.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ft {

enum class OhlcComponent { OPEN, HIGH, LOW, CLOSE };

std::string to_string(OhlcComponent c);
OhlcComponent component_from_string(const std::string& name);

// One supervised example: `lags` previous values -> the next value.
struct Window {
    std::vector<double> input;
    double target = 0.0;
};

// Sliding windows over a value series; pair i is (values[i..i+lags), values[i+lags]).
std::vector<Window> make_windows(const std::vector<double>& values, std::size_t lags = 5);

// Fully connected lags -> 10*lags -> 5*lags -> 1 network with ReLU hidden
// activations, linear output, inverted dropout on both hidden layers.
struct MlpModel {
    std::size_t lags = 5;
    std::vector<std::size_t> widths;              // {lags, 10*lags, 5*lags, 1}
    std::vector<std::vector<double>> weights;     // per layer, row-major out x in
    std::vector<std::vector<double>> biases;      // per layer
    double dropout = 0.2;
    MinMaxScaler scaler;                          // fitted on training values
    OhlcComponent component = OhlcComponent::CLOSE;

    // training metadata
    std::size_t epochs = 0;
    std::size_t batch_size = 5;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    double final_loss = 0.0;

    std::size_t parameter_count() const;
};

// Seeded He-style uniform initialization for the given lag geometry.
MlpModel make_mlp(std::size_t lags, OhlcComponent component, double dropout, std::uint64_t seed);

class Rng;

// Forward pass on an already-normalized input. Dropout masks are drawn from
// `rng` only when train_mode is set; eval mode is deterministic.
double mlp_forward(const MlpModel& model, const std::vector<double>& input, bool train_mode = false,
                   Rng* rng = nullptr);

enum class Optimizer { ADAM, SGD };

std::string to_string(Optimizer opt);

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 5;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double dropout = 0.2;
    Optimizer optimizer = Optimizer::ADAM;
    std::uint64_t seed = 1;
};

struct TrainResult {
    MlpModel model;
    std::vector<double> epoch_loss; // mean absolute error per epoch
};

// Mini-batch training on mean absolute error with backpropagation through
// ReLU and the dropout masks. Windows must hold already-normalized values.
// Deterministic given config.seed. Throws DivergenceError on non-finite loss.
TrainResult train(MlpModel model, const std::vector<Window>& pairs, const TrainConfig& config);

// Per-output-weight gradients of the L1 loss at one example, by backprop with
// dropout disabled; exposed for the finite-difference oracle.
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    double loss = 0.0;
};
Gradients mlp_gradients(const MlpModel& model, const Window& example);

struct GridCell {
    TrainConfig config;
    double validation_mae = 0.0;
    bool diverged = false;
};

struct GridSearchResult {
    TrainConfig best;
    std::vector<GridCell> report;
};

// Time-ordered fit/validate split (last 20% validates); minimum validation
// MAE wins. Throws ConvergenceError when every cell diverges.
GridSearchResult grid_search(const std::vector<Window>& pairs, std::size_t lags,
                             const std::vector<TrainConfig>& grid);

// The default hyperparameter grid: epochs {50,100,200} x lr {1e-2,1e-3,1e-4}
// x optimizer {ADAM, SGD}, batch size 5.
std::vector<TrainConfig> default_grid(std::uint64_t seed);

struct ForecastSeries {
    Date start;
    std::size_t horizon = 0;
    std::vector<std::string> components;      // column names, e.g. {"close"}
    std::vector<std::vector<double>> values;  // per component, horizon entries
    std::string model_id;
};

// One-step-ahead prediction over the last `horizon` values of `actual`,
// always conditioning on true previous values.
ForecastSeries forecast_validation(const MlpModel& model, const std::vector<double>& actual,
                                   const std::vector<Date>& dates, std::size_t horizon = 30);

// Fully recursive four-component OHLC path: each component model feeds on its
// own predictions once real history runs out.
ForecastSeries forecast_recursive(const std::array<MlpModel, 4>& models, const PriceSeries& seed,
                                  std::size_t horizon = 30);

// Converts a recursive OHLC forecast into a PriceSeries (volume 0). Bars that
// violate OHLC coherence are counted, not repaired.
std::pair<PriceSeries, std::size_t> forecast_to_series(const ForecastSeries& forecast,
                                                       const std::string& ticker);

// Versioned container: magic + JSON header + row-major float64 parameters.
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

} // namespace ft
