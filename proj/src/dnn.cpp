#include "ft/dnn.hpp"
#include "ft/errors.hpp"
#include "ft/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

namespace ft {

std::string to_string(OhlcComponent c) {
    switch (c) {
        case OhlcComponent::OPEN: return "open";
        case OhlcComponent::HIGH: return "high";
        case OhlcComponent::LOW: return "low";
        case OhlcComponent::CLOSE: return "close";
    }
    return "?";
}

OhlcComponent component_from_string(const std::string& name) {
    if (name == "open") return OhlcComponent::OPEN;
    if (name == "high") return OhlcComponent::HIGH;
    if (name == "low") return OhlcComponent::LOW;
    if (name == "close") return OhlcComponent::CLOSE;
    throw ConfigError("unknown OHLC component '" + name + "'");
}

std::string to_string(Optimizer opt) { return opt == Optimizer::ADAM ? "adam" : "sgd"; }

std::vector<Window> make_windows(const std::vector<double>& values, std::size_t lags) {
    if (lags < 1) throw SizeError("make_windows: lags must be >= 1");
    if (values.size() < lags + 1) throw SizeError("make_windows: series shorter than lags + 1");
    std::vector<Window> out;
    out.reserve(values.size() - lags);
    for (std::size_t i = 0; i + lags < values.size(); ++i) {
        Window w;
        w.input.assign(values.begin() + i, values.begin() + i + lags);
        w.target = values[i + lags];
        out.push_back(std::move(w));
    }
    return out;
}

std::size_t MlpModel::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) n += widths[l] * widths[l + 1] + widths[l + 1];
    return n;
}

MlpModel make_mlp(std::size_t lags, OhlcComponent component, double dropout, std::uint64_t seed) {
    if (lags < 1) throw ConfigError("make_mlp: lags must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("make_mlp: dropout must be in [0,1)");
    MlpModel m;
    m.lags = lags;
    m.widths = {lags, 10 * lags, 5 * lags, 1};
    m.dropout = dropout;
    m.component = component;
    m.seed = seed;

    Rng rng(mix_seed(seed, 0xD0));
    for (std::size_t l = 0; l + 1 < m.widths.size(); ++l) {
        const std::size_t fan_in = m.widths[l];
        const std::size_t fan_out = m.widths[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        std::vector<double> w(fan_in * fan_out);
        for (double& x : w) x = rng.uniform(-limit, limit);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(fan_out, 0.0);
    }
    return m;
}

namespace {

struct ForwardCache {
    // post-activation (and post-dropout) outputs per layer, input included
    std::vector<std::vector<double>> activations;
    // dropout keep masks (scaled) for the two hidden layers
    std::vector<std::vector<double>> masks;
};

double forward_impl(const MlpModel& m, const std::vector<double>& input, bool train_mode, Rng* rng,
                    ForwardCache* cache) {
    if (input.size() != m.lags)
        throw SizeError("mlp_forward: input width " + std::to_string(input.size()) +
                        " does not match lags " + std::to_string(m.lags));
    if (train_mode && m.dropout > 0.0 && rng == nullptr)
        throw ConfigError("mlp_forward: train mode with dropout needs an rng");

    std::vector<double> cur = input;
    if (cache) cache->activations.push_back(cur);

    const std::size_t n_layers = m.weights.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in = m.widths[l];
        const std::size_t out = m.widths[l + 1];
        std::vector<double> next(out);
        for (std::size_t o = 0; o < out; ++o) {
            double acc = m.biases[l][o];
            const double* row = m.weights[l].data() + o * in;
            for (std::size_t i = 0; i < in; ++i) acc += row[i] * cur[i];
            next[o] = acc;
        }
        const bool hidden = l + 1 < n_layers;
        if (hidden) {
            for (double& v : next) v = std::max(v, 0.0); // ReLU
            std::vector<double> mask(out, 1.0);
            if (train_mode && m.dropout > 0.0) {
                // inverted dropout: zero with probability `dropout`, scale
                // survivors by 1/(1-dropout) so eval needs no correction
                const double keep_scale = 1.0 / (1.0 - m.dropout);
                for (std::size_t o = 0; o < out; ++o)
                    mask[o] = rng->uniform() < m.dropout ? 0.0 : keep_scale;
                for (std::size_t o = 0; o < out; ++o) next[o] *= mask[o];
            }
            if (cache) cache->masks.push_back(std::move(mask));
        }
        cur = std::move(next);
        if (cache) cache->activations.push_back(cur);
    }
    return cur[0];
}

// Backprop of L1 loss for one example given a populated cache.
void accumulate_gradients(const MlpModel& m, const ForwardCache& cache, double target,
                          Gradients& grads) {
    const std::size_t n_layers = m.weights.size();
    const double output = cache.activations.back()[0];
    const double diff = output - target;
    grads.loss += std::fabs(diff);

    std::vector<double> delta{diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0)};
    for (std::size_t l = n_layers; l-- > 0;) {
        const std::size_t in = m.widths[l];
        const std::size_t out = m.widths[l + 1];
        const auto& prev_act = cache.activations[l];
        for (std::size_t o = 0; o < out; ++o) {
            grads.biases[l][o] += delta[o];
            double* row = grads.weights[l].data() + o * in;
            for (std::size_t i = 0; i < in; ++i) row[i] += delta[o] * prev_act[i];
        }
        if (l == 0) break;
        std::vector<double> prev_delta(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            const double* row = m.weights[l].data() + o * in;
            for (std::size_t i = 0; i < in; ++i) prev_delta[i] += delta[o] * row[i];
        }
        // through dropout mask and ReLU of the producing hidden layer
        const auto& mask = cache.masks[l - 1];
        const auto& act = cache.activations[l];
        for (std::size_t i = 0; i < in; ++i) {
            prev_delta[i] *= mask[i];
            if (act[i] <= 0.0) prev_delta[i] = 0.0; // ReLU gate (post-dropout zero => pre <= 0 or dropped)
        }
        delta = std::move(prev_delta);
    }
}

Gradients zero_gradients(const MlpModel& m) {
    Gradients g;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        g.weights.emplace_back(m.weights[l].size(), 0.0);
        g.biases.emplace_back(m.biases[l].size(), 0.0);
    }
    return g;
}

} // namespace

double mlp_forward(const MlpModel& model, const std::vector<double>& input, bool train_mode,
                   Rng* rng) {
    return forward_impl(model, input, train_mode, rng, nullptr);
}

Gradients mlp_gradients(const MlpModel& model, const Window& example) {
    ForwardCache cache;
    // dropout disabled: eval-mode masks are all ones
    MlpModel no_dropout = model;
    no_dropout.dropout = 0.0;
    forward_impl(no_dropout, example.input, true, nullptr, &cache);
    Gradients g = zero_gradients(model);
    accumulate_gradients(model, cache, example.target, g);
    return g;
}

TrainResult train(MlpModel model, const std::vector<Window>& pairs, const TrainConfig& config) {
    if (pairs.empty()) throw SizeError("train: no training pairs");
    if (config.batch_size < 1) throw ConfigError("train: batch size must be >= 1");
    if (config.learning_rate <= 0.0) throw ConfigError("train: learning rate must be positive");

    model.dropout = config.dropout;
    model.epochs = config.epochs;
    model.batch_size = config.batch_size;
    model.learning_rate = config.learning_rate;
    model.seed = config.seed;

    Rng rng(mix_seed(config.seed, 0x7EA1));
    const std::size_t n_layers = model.weights.size();

    // Adam moments
    Gradients m1 = zero_gradients(model), m2 = zero_gradients(model);
    std::size_t adam_t = 0;

    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0u);

    TrainResult result;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            const double batch_n = static_cast<double>(end - start);
            Gradients grads = zero_gradients(model);
            for (std::size_t idx = start; idx < end; ++idx) {
                const Window& w = pairs[order[idx]];
                ForwardCache cache;
                forward_impl(model, w.input, true, &rng, &cache);
                accumulate_gradients(model, cache, w.target, grads);
            }
            epoch_loss += grads.loss;

            ++adam_t;
            for (std::size_t l = 0; l < n_layers; ++l) {
                auto update = [&](std::vector<double>& params, const std::vector<double>& g,
                                  std::vector<double>& mom1, std::vector<double>& mom2) {
                    for (std::size_t i = 0; i < params.size(); ++i) {
                        const double grad = g[i] / batch_n;
                        if (config.optimizer == Optimizer::SGD) {
                            params[i] -= config.learning_rate * grad;
                            continue;
                        }
                        mom1[i] = config.adam_beta1 * mom1[i] + (1.0 - config.adam_beta1) * grad;
                        mom2[i] = config.adam_beta2 * mom2[i] +
                                  (1.0 - config.adam_beta2) * grad * grad;
                        const double mhat =
                            mom1[i] / (1.0 - std::pow(config.adam_beta1, static_cast<double>(adam_t)));
                        const double vhat =
                            mom2[i] / (1.0 - std::pow(config.adam_beta2, static_cast<double>(adam_t)));
                        params[i] -= config.learning_rate * mhat /
                                     (std::sqrt(vhat) + config.adam_epsilon);
                    }
                };
                update(model.weights[l], grads.weights[l], m1.weights[l], m2.weights[l]);
                update(model.biases[l], grads.biases[l], m1.biases[l], m2.biases[l]);
            }
        }
        epoch_loss /= static_cast<double>(pairs.size());
        if (!std::isfinite(epoch_loss))
            throw DivergenceError("train: non-finite loss at epoch " + std::to_string(epoch));
        result.epoch_loss.push_back(epoch_loss);
    }
    model.final_loss = result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back();
    result.model = std::move(model);
    return result;
}

std::vector<TrainConfig> default_grid(std::uint64_t seed) {
    std::vector<TrainConfig> grid;
    for (std::size_t epochs : {50u, 100u, 200u}) {
        for (double lr : {1e-2, 1e-3, 1e-4}) {
            for (Optimizer opt : {Optimizer::ADAM, Optimizer::SGD}) {
                TrainConfig c;
                c.epochs = epochs;
                c.batch_size = 5;
                c.learning_rate = lr;
                c.optimizer = opt;
                c.seed = seed;
                grid.push_back(c);
            }
        }
    }
    return grid;
}

GridSearchResult grid_search(const std::vector<Window>& pairs, std::size_t lags,
                             const std::vector<TrainConfig>& grid) {
    if (grid.empty()) throw ConfigError("grid_search: empty grid");
    if (pairs.size() < 5) throw SizeError("grid_search: too few pairs to split");

    const std::size_t n_val = std::max<std::size_t>(1, pairs.size() / 5);
    const std::vector<Window> fit(pairs.begin(), pairs.end() - n_val);
    const std::vector<Window> val(pairs.end() - n_val, pairs.end());

    GridSearchResult out;
    double best_mae = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& config : grid) {
        GridCell cell;
        cell.config = config;
        try {
            MlpModel model = make_mlp(lags, OhlcComponent::CLOSE, config.dropout, config.seed);
            TrainResult trained = train(std::move(model), fit, config);
            double mae = 0.0;
            for (const auto& w : val)
                mae += std::fabs(mlp_forward(trained.model, w.input) - w.target);
            mae /= static_cast<double>(val.size());
            cell.validation_mae = mae;
            if (!std::isfinite(mae)) cell.diverged = true;
        } catch (const DivergenceError&) {
            cell.diverged = true;
        }
        if (!cell.diverged && cell.validation_mae < best_mae) {
            best_mae = cell.validation_mae;
            out.best = config;
            any = true;
        }
        out.report.push_back(cell);
    }
    if (!any) throw ConvergenceError("grid_search: every cell diverged");
    return out;
}

ForecastSeries forecast_validation(const MlpModel& model, const std::vector<double>& actual,
                                   const std::vector<Date>& dates, std::size_t horizon) {
    if (actual.size() < horizon + model.lags)
        throw SizeError("forecast_validation: series too short for horizon plus lags");
    if (!dates.empty() && dates.size() != actual.size())
        throw SizeError("forecast_validation: dates not aligned");

    ForecastSeries out;
    out.horizon = horizon;
    out.components = {to_string(model.component)};
    out.model_id = "mlp-" + to_string(model.component) + "-seed" + std::to_string(model.seed);
    std::vector<double> preds;
    const std::size_t first = actual.size() - horizon;
    for (std::size_t i = first; i < actual.size(); ++i) {
        std::vector<double> input(model.lags);
        for (std::size_t j = 0; j < model.lags; ++j)
            input[j] = model.scaler.transform(actual[i - model.lags + j]);
        preds.push_back(model.scaler.inverse(mlp_forward(model, input)));
    }
    out.values.push_back(std::move(preds));
    out.start = dates.empty() ? Date{} : dates[first];
    return out;
}

ForecastSeries forecast_recursive(const std::array<MlpModel, 4>& models, const PriceSeries& seed,
                                  std::size_t horizon) {
    const std::array<OhlcComponent, 4> comps = {OhlcComponent::OPEN, OhlcComponent::HIGH,
                                                OhlcComponent::LOW, OhlcComponent::CLOSE};
    const std::size_t lags = models[0].lags;
    for (std::size_t c = 0; c < 4; ++c) {
        if (models[c].lags != lags)
            throw ConfigError("forecast_recursive: models disagree on lag count");
        if (models[c].component != comps[c])
            throw ConfigError("forecast_recursive: model " + std::to_string(c) +
                              " is not the " + to_string(comps[c]) + " model");
    }
    if (seed.size() < lags) throw SizeError("forecast_recursive: seed series shorter than lags");

    std::array<std::vector<double>, 4> buffers = {seed.opens(), seed.highs(), seed.lows(),
                                                  seed.closes()};

    ForecastSeries out;
    out.horizon = horizon;
    out.components = {"open", "high", "low", "close"};
    out.model_id = "mlp-ohlc-seed" + std::to_string(models[0].seed);
    out.values.assign(4, {});
    out.start = seed.bars.back().date.next_weekday();

    for (std::size_t h = 0; h < horizon; ++h) {
        for (std::size_t c = 0; c < 4; ++c) {
            const auto& m = models[c];
            auto& buf = buffers[c];
            std::vector<double> input(lags);
            for (std::size_t j = 0; j < lags; ++j)
                input[j] = m.scaler.transform(buf[buf.size() - lags + j]);
            const double pred = m.scaler.inverse(mlp_forward(m, input));
            buf.push_back(pred);
            out.values[c].push_back(pred);
        }
    }
    return out;
}

std::pair<PriceSeries, std::size_t> forecast_to_series(const ForecastSeries& forecast,
                                                       const std::string& ticker) {
    if (forecast.components != std::vector<std::string>{"open", "high", "low", "close"})
        throw ConfigError("forecast_to_series: need a four-component OHLC forecast");
    PriceSeries series;
    series.ticker = ticker;
    std::size_t violations = 0;
    Date d = forecast.start;
    for (std::size_t i = 0; i < forecast.horizon; ++i) {
        OhlcBar bar;
        bar.date = d;
        bar.open = forecast.values[0][i];
        bar.high = forecast.values[1][i];
        bar.low = forecast.values[2][i];
        bar.close = forecast.values[3][i];
        bar.volume = 0;
        if (!bar.valid()) ++violations;
        series.bars.push_back(bar);
        d = d.next_weekday();
    }
    return {std::move(series), violations};
}

namespace {

constexpr char kMagic[6] = {'F', 'T', 'M', 'L', 'P', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

} // namespace

void save_model(const MlpModel& model, const std::string& path) {
    nlohmann::json header = {
        {"version", kFormatVersion},
        {"lags", model.lags},
        {"widths", model.widths},
        {"dropout", model.dropout},
        {"component", to_string(model.component)},
        {"scaler", {{"min", model.scaler.min}, {"max", model.scaler.max}}},
        {"epochs", model.epochs},
        {"batch_size", model.batch_size},
        {"learning_rate", model.learning_rate},
        {"seed", model.seed},
        {"final_loss", model.final_loss},
    };
    const std::string header_str = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw PersistenceError("cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof kMagic);
    const std::uint32_t len = static_cast<std::uint32_t>(header_str.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(header_str.data(), header_str.size());
    auto write_doubles = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        write_doubles(model.weights[l]);
        write_doubles(model.biases[l]);
    }
    if (!out) throw PersistenceError("write to '" + path + "' failed");
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PersistenceError("cannot open '" + path + "'");
    char magic[6];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw PersistenceError("'" + path + "' is not a model file");
    std::uint32_t len = 0;
    if (!in.read(reinterpret_cast<char*>(&len), sizeof len))
        throw PersistenceError("'" + path + "': truncated header length");
    std::string header_str(len, '\0');
    if (!in.read(header_str.data(), len)) throw PersistenceError("'" + path + "': truncated header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_str);
    } catch (const nlohmann::json::exception& e) {
        throw PersistenceError("'" + path + "': corrupt header: " + e.what());
    }
    if (header.value("version", 0u) != kFormatVersion)
        throw PersistenceError("'" + path + "': unsupported format version");

    MlpModel model;
    try {
        model.lags = header.at("lags").get<std::size_t>();
        model.widths = header.at("widths").get<std::vector<std::size_t>>();
        model.dropout = header.at("dropout").get<double>();
        model.component = component_from_string(header.at("component").get<std::string>());
        model.scaler.min = header.at("scaler").at("min").get<double>();
        model.scaler.max = header.at("scaler").at("max").get<double>();
        model.epochs = header.at("epochs").get<std::size_t>();
        model.batch_size = header.at("batch_size").get<std::size_t>();
        model.learning_rate = header.at("learning_rate").get<double>();
        model.seed = header.at("seed").get<std::uint64_t>();
        model.final_loss = header.at("final_loss").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw PersistenceError("'" + path + "': malformed header: " + e.what());
    }
    if (model.widths.size() < 2) throw PersistenceError("'" + path + "': bad geometry");

    auto read_doubles = [&](std::vector<double>& v, std::size_t count) {
        v.resize(count);
        if (!in.read(reinterpret_cast<char*>(v.data()),
                     static_cast<std::streamsize>(count * sizeof(double))))
            throw PersistenceError("'" + path + "': truncated parameter payload");
    };
    for (std::size_t l = 0; l + 1 < model.widths.size(); ++l) {
        std::vector<double> w, b;
        read_doubles(w, model.widths[l] * model.widths[l + 1]);
        read_doubles(b, model.widths[l + 1]);
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    char probe;
    if (in.read(&probe, 1)) throw PersistenceError("'" + path + "': trailing bytes after payload");
    return model;
}

} // namespace ft
