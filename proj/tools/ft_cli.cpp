// Command-line front end: one subcommand per pipeline stage, reproducible
// file outputs under --out, and a manifest (input hashes, effective config,
// seed, versions) written for every run.

#include "ft/backtest.hpp"
#include "ft/cluster.hpp"
#include "ft/dnn.hpp"
#include "ft/errors.hpp"
#include "ft/indicators.hpp"
#include "ft/ingest.hpp"
#include "ft/metrics.hpp"
#include "ft/returns_vol.hpp"
#include "ft/rng.hpp"
#include "ft/select.hpp"
#include "ft/stat_forecast.hpp"
#include "ft/synchrony.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ft;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------- utilities

std::string fmt_num(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

json json_num(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

json json_opt(const std::optional<double>& v) {
    if (!v.has_value()) return nullptr;
    return *v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Per-run bookkeeping collected while a command executes.
struct RunContext {
    std::string command;
    fs::path out_dir;
    std::uint64_t seed = 1;
    json inputs = json::array();
    json params = json::object();
    json outputs = json::array();

    void add_input(const std::string& path) {
        inputs.push_back({{"path", path}, {"fnv1a64", fnv1a64_hex(read_file(path))}});
    }

    fs::path out(const std::string& name) {
        outputs.push_back(name);
        return out_dir / name;
    }

    void write_manifest() {
        json m;
        m["command"] = command;
        m["inputs"] = inputs;
        m["config"] = params;
        m["outputs"] = outputs;
        m["seed"] = seed;
        m["versions"] = {{"forwardtest", kVersion}, {"manifest_format", kFormatVersion}};
        write_file(out_dir / ("manifest_" + command + ".json"), m.dump(2) + "\n");
    }
};

PriceSeries load_series(RunContext& ctx, const std::string& path, const std::string& ticker = "",
                        bool strict = true) {
    ctx.add_input(path);
    ParseOptions opts;
    opts.ticker = ticker.empty() ? fs::path(path).stem().string() : ticker;
    opts.strict = strict;
    auto result = load_ohlc_csv(path, opts);
    result.series.validate();
    return result.series;
}

// Tolerant OHLC reader for model-generated paths (e.g. the `forecast`
// command's output): accepts either the Yahoo-style header or the compact
// date,open,high,low,close one, requires increasing dates, and keeps bars
// whose OHLC coherence is violated (the forecaster counts, never repairs).
PriceSeries load_loose_series(RunContext& ctx, const std::string& path,
                              const std::string& ticker) {
    ctx.add_input(path);
    std::istringstream in(read_file(path));
    std::string header;
    if (!std::getline(in, header)) throw ParseError(path + ": empty file");
    std::map<std::string, std::size_t> col;
    {
        std::istringstream hs(header);
        std::string name;
        std::size_t idx = 0;
        while (std::getline(hs, name, ',')) {
            for (char& c : name) c = static_cast<char>(std::tolower(c));
            col[name] = idx++;
        }
    }
    for (const char* need : {"date", "open", "high", "low", "close"})
        if (!col.count(need)) throw ParseError(path + ": missing column '" + need + "'");
    PriceSeries s;
    s.ticker = ticker.empty() ? fs::path(path).stem().string() : ticker;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        OhlcBar bar;
        bar.date = Date::parse(fields.at(col["date"]));
        bar.open = std::stod(fields.at(col["open"]));
        bar.high = std::stod(fields.at(col["high"]));
        bar.low = std::stod(fields.at(col["low"]));
        bar.close = std::stod(fields.at(col["close"]));
        if (!s.bars.empty() && !(s.bars.back().date < bar.date))
            throw InvariantError(path + ": dates must strictly increase");
        s.bars.push_back(bar);
    }
    if (s.empty()) throw SizeError(path + ": no bars");
    return s;
}

// "NAME" or "NAME(key=value,key=value)".
IndicatorSpec parse_indicator(const std::string& text) {
    const auto open = text.find('(');
    IndicatorSpec spec;
    if (open == std::string::npos) {
        spec.kind = indicator_kind_from_string(text);
        return spec;
    }
    if (text.back() != ')') throw ConfigError("bad indicator syntax '" + text + "'");
    spec.kind = indicator_kind_from_string(text.substr(0, open));
    std::string body = text.substr(open + 1, text.size() - open - 2);
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("bad indicator parameter '" + item + "' (want key=value)");
        spec.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return spec;
}

std::vector<IndicatorSpec> parse_candidates(const std::vector<std::string>& names) {
    if (names.empty()) return default_catalog();
    std::vector<IndicatorSpec> out;
    for (const auto& n : names) out.push_back(parse_indicator(n));
    return out;
}

// ------------------------------------------------------------------- plots

// Self-contained SVG line chart; purely a function of the data (no clocks).
std::string svg_line_chart(const std::string& title,
                           const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    const double w = 800, h = 400, ml = 60, mr = 20, mt = 40, mb = 30;
    double lo = 1e300, hi = -1e300;
    std::size_t n = 0;
    for (const auto& [name, ys] : series)
        for (double y : ys) {
            if (std::isnan(y)) continue;
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
    for (const auto& [name, ys] : series) n = std::max(n, ys.size());
    if (n < 2 || hi <= lo) {
        lo = 0;
        hi = 1;
        n = std::max<std::size_t>(n, 2);
    }
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 400\">\n"
      << "<rect width=\"800\" height=\"400\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n"
      << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (w - ml - mr) << "\" height=\""
      << (h - mt - mb) << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (int g = 0; g <= 4; ++g) {
        const double v = lo + (hi - lo) * g / 4.0;
        const double y = h - mb - (h - mt - mb) * g / 4.0;
        s << "<text x=\"" << (ml - 6) << "\" y=\"" << fmt_num(y + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_num(v)
          << "</text>\n";
    }
    std::size_t si = 0;
    for (const auto& [name, ys] : series) {
        const char* color = palette[si % 5];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ys.size(); ++i) {
            if (std::isnan(ys[i])) continue;
            const double x = ml + (w - ml - mr) * static_cast<double>(i) /
                                      static_cast<double>(n - 1);
            const double y = h - mb - (h - mt - mb) * (ys[i] - lo) / (hi - lo);
            s << fmt_num(x) << "," << fmt_num(y) << " ";
        }
        s << "\"/>\n<text x=\"" << (ml + 10) << "\" y=\"" << (mt + 16 + 16 * si)
          << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << name
          << "</text>\n";
        ++si;
    }
    s << "</svg>\n";
    return s.str();
}

// ------------------------------------------------------------- subcommands

int cmd_ingest(RunContext& ctx, const std::string& csv, const std::string& ticker,
               bool permissive) {
    ctx.add_input(csv);
    ParseOptions opts;
    opts.ticker = ticker.empty() ? fs::path(csv).stem().string() : ticker;
    opts.strict = !permissive;
    auto result = load_ohlc_csv(csv, opts);
    result.series.validate();
    write_file(ctx.out(opts.ticker + ".series.csv"), serialize_ohlc_csv(result.series));
    if (permissive) {
        std::string issues = "line,message\n";
        for (const auto& issue : result.skipped)
            issues += std::to_string(issue.line) + "," + issue.message + "\n";
        write_file(ctx.out(opts.ticker + ".issues.csv"), issues);
    }
    std::printf("ingested %zu bars for %s (%zu rows skipped)\n", result.series.size(),
                opts.ticker.c_str(), result.skipped.size());
    return 0;
}

int cmd_volatility(RunContext& ctx, const std::string& csv, const std::string& kind_name,
                   std::size_t window) {
    auto series = load_series(ctx, csv);
    const VolKind kind = vol_kind_from_string(kind_name);
    auto roll = volatility(series, kind, window);

    std::string out_csv = "date,volatility\n";
    for (std::size_t i = 0; i < roll.values.size(); ++i)
        out_csv += roll.dates[i].to_string() + "," + fmt_num(roll.values[i]) + "\n";
    write_file(ctx.out("volatility_" + kind_name + ".csv"), out_csv);

    json summary = {{"ticker", series.ticker},     {"kind", to_string(kind)},
                    {"window", window},            {"min", json_num(roll.summary.min)},
                    {"max", json_num(roll.summary.max)}, {"mean", json_num(roll.summary.mean)},
                    {"stddev", json_num(roll.summary.stddev)},
                    {"points", roll.values.size()}};
    write_file(ctx.out("volatility_" + kind_name + "_summary.json"), summary.dump(2) + "\n");
    write_file(ctx.out("volatility_" + kind_name + ".svg"),
               svg_line_chart("rolling " + kind_name + " volatility (window " +
                                  std::to_string(window) + ")",
                              {{series.ticker, roll.values}}));
    std::printf("%s %s mean %.6f over %zu windows\n", series.ticker.c_str(), kind_name.c_str(),
                roll.summary.mean, roll.values.size());
    return 0;
}

// PK/GK/RS vectors are one longer than YZ (which consumes the prior bar);
// drop their first entry so every row shares the YZ window-end date.
VolatilityFeatureMatrix feature_matrix(const std::vector<PriceSeries>& series_list,
                                       std::size_t window) {
    VolatilityFeatureMatrix m;
    m.column_names = {"PK", "GK", "RS", "YZ"};
    for (const auto& s : series_list) {
        auto pk = volatility(s, VolKind::PK, window);
        auto gk = volatility(s, VolKind::GK, window);
        auto rs = volatility(s, VolKind::RS, window);
        auto yz = volatility(s, VolKind::YZ, window);
        const std::size_t skip = pk.values.size() - yz.values.size();
        for (std::size_t i = 0; i < yz.values.size(); ++i) {
            m.labels.push_back({s.ticker, yz.dates[i]});
            m.rows.push_back({pk.values[i + skip], gk.values[i + skip], rs.values[i + skip],
                              yz.values[i]});
        }
    }
    return m;
}

int cmd_cluster(RunContext& ctx, const std::vector<std::string>& csvs, std::size_t window,
                std::size_t k_min, std::size_t k_max, std::size_t k_fixed, std::size_t restarts) {
    std::vector<PriceSeries> series_list;
    for (const auto& csv : csvs) series_list.push_back(load_series(ctx, csv));
    auto matrix = feature_matrix(series_list, window);
    auto z = zscore_standardize(matrix.rows);

    auto elbow = elbow_scan(z, k_min, k_max, ctx.seed, restarts);
    std::string wss_csv = "k,wss\n";
    for (std::size_t i = 0; i < elbow.ks.size(); ++i)
        wss_csv += std::to_string(elbow.ks[i]) + "," + fmt_num(elbow.wss[i]) + "\n";
    write_file(ctx.out("cluster_wss.csv"), wss_csv);
    write_file(ctx.out("cluster_wss.svg"),
               svg_line_chart("within-cluster sum of squares vs k", {{"wss", elbow.wss}}));

    const std::size_t k = k_fixed > 0 ? k_fixed : elbow.knee;
    auto clustering = kmeans_best_of(z, k, ctx.seed, restarts);
    auto labels = canonical_relabel(clustering.assignments);

    std::string assign_csv = "ticker,date,cluster\n";
    for (std::size_t i = 0; i < matrix.labels.size(); ++i)
        assign_csv += matrix.labels[i].ticker + "," + matrix.labels[i].date.to_string() + "," +
                      std::to_string(labels[i]) + "\n";
    write_file(ctx.out("cluster_assignments.csv"), assign_csv);

    json summary = {{"rows", matrix.row_count()},
                    {"columns", matrix.column_names},
                    {"window", window},
                    {"k", k},
                    {"knee", elbow.knee},
                    {"knee_distance", elbow.knee_distance},
                    {"wss", json_num(clustering.wss)},
                    {"iterations", clustering.iterations}};
    write_file(ctx.out("cluster_summary.json"), summary.dump(2) + "\n");
    std::printf("clustered %zu rows into k=%zu (knee %zu), wss %.4f\n", matrix.row_count(), k,
                elbow.knee, clustering.wss);
    return 0;
}

// Restrict two series to their common dates so the columns align bar by bar.
std::pair<std::vector<double>, std::vector<Date>> aligned_closes(const PriceSeries& a,
                                                                 const PriceSeries& b,
                                                                 std::vector<double>& b_closes) {
    std::map<Date, double> b_by_date;
    for (const auto& bar : b.bars) b_by_date[bar.date] = bar.close;
    std::vector<double> a_closes;
    std::vector<Date> dates;
    for (const auto& bar : a.bars) {
        auto it = b_by_date.find(bar.date);
        if (it == b_by_date.end()) continue;
        a_closes.push_back(bar.close);
        b_closes.push_back(it->second);
        dates.push_back(bar.date);
    }
    return {a_closes, dates};
}

int cmd_synchrony(RunContext& ctx, const std::string& csv_a, const std::string& csv_b,
                  std::size_t window, long band) {
    auto a = load_series(ctx, csv_a);
    auto b = load_series(ctx, csv_b);
    std::vector<double> yb;
    auto [ya, dates] = aligned_closes(a, b, yb);
    if (ya.size() < 2) throw SizeError("synchrony: fewer than 2 common dates");

    const double r = pearson(ya, yb);
    auto rolling = rolling_pearson(ya, yb, window);
    std::string roll_csv = "date,r\n";
    for (std::size_t i = 0; i < rolling.size(); ++i)
        roll_csv += dates[i + window - 1].to_string() + "," + fmt_num(rolling[i]) + "\n";
    write_file(ctx.out("synchrony_rolling_pearson.csv"), roll_csv);
    write_file(ctx.out("synchrony_rolling_pearson.svg"),
               svg_line_chart("rolling Pearson (window " + std::to_string(window) + ")",
                              {{"r", rolling}}));

    auto dtw_raw = dtw_distance(ya, yb, band);
    auto [na, sa] = minmax_normalize(ya);
    auto [nb, sb] = minmax_normalize(yb);
    auto dtw_norm = dtw_distance(na, nb, band);

    json out = {{"ticker_a", a.ticker},
                {"ticker_b", b.ticker},
                {"common_bars", ya.size()},
                {"pearson", json_num(r)},
                {"rolling_window", window},
                {"dtw_band", band},
                {"dtw_cost_raw", json_num(dtw_raw.cost)},
                {"dtw_cost_normalized", json_num(dtw_norm.cost)},
                {"dtw_path_length", dtw_raw.path.size()}};
    write_file(ctx.out("synchrony.json"), out.dump(2) + "\n");
    std::printf("pearson %.4f, dtw raw %.2f, dtw normalized %.4f over %zu common bars\n", r,
                dtw_raw.cost, dtw_norm.cost, ya.size());
    return 0;
}

int cmd_adf(RunContext& ctx, const std::string& csv, long max_lag, bool use_log) {
    auto series = load_series(ctx, csv);
    auto closes = series.closes();
    if (use_log)
        for (double& c : closes) c = std::log(c);
    auto r = adf_test(closes, max_lag);
    json out = {{"ticker", series.ticker},
                {"log_prices", use_log},
                {"statistic", json_num(r.statistic)},
                {"p_value", json_num(r.p_value)},
                {"lags", r.lags},
                {"observations", r.observations},
                {"crit_1pct", json_num(r.crit_1pct)},
                {"crit_5pct", json_num(r.crit_5pct)},
                {"crit_10pct", json_num(r.crit_10pct)},
                {"stationary_at_5pct", r.stationary_at_5pct()}};
    write_file(ctx.out("adf.json"), out.dump(2) + "\n");
    std::printf("ADF %.4f (p %.4f, lags %zu): %s\n", r.statistic, r.p_value, r.lags,
                r.stationary_at_5pct() ? "stationary at 5%" : "unit root not rejected");
    return 0;
}

int cmd_arima(RunContext& ctx, const std::string& csv, std::size_t p_max, std::size_t q_max,
              std::size_t horizon) {
    auto series = load_series(ctx, csv);
    auto closes = series.closes();
    if (closes.size() < horizon + 20)
        throw SizeError("arima: need at least horizon + 20 bars");
    std::vector<double> train(closes.begin(), closes.end() - static_cast<std::ptrdiff_t>(horizon));
    std::vector<double> test(closes.end() - static_cast<std::ptrdiff_t>(horizon), closes.end());

    auto result = auto_arima(train, p_max, q_max);
    std::string aic_csv = "p,q,aic,ok\n";
    for (const auto& cell : result.table)
        aic_csv += std::to_string(cell.p) + "," + std::to_string(cell.q) + "," +
                   fmt_num(cell.aic) + "," + (cell.ok ? "1" : "0") + "\n";
    write_file(ctx.out("arima_aic.csv"), aic_csv);

    json model = {{"ticker", series.ticker},
                  {"p", result.best.p},
                  {"d", result.best.d},
                  {"q", result.best.q},
                  {"ar", result.best.ar},
                  {"ma", result.best.ma},
                  {"intercept", json_num(result.best.intercept)},
                  {"sigma2", json_num(result.best.sigma2)},
                  {"aic", json_num(result.best.aic)},
                  {"stationary", result.best.stationary},
                  {"invertible", result.best.invertible},
                  {"train_bars", train.size()}};

    auto forecast = arima_forecast(result.best, train, horizon);
    std::string fc_csv = "date,predicted,actual\n";
    Date d = series.bars[train.size() - 1].date;
    for (std::size_t i = 0; i < horizon; ++i) {
        d = d.next_weekday();
        fc_csv += d.to_string() + "," + fmt_num(forecast[i]) + "," + fmt_num(test[i]) + "\n";
    }
    write_file(ctx.out("arima_forecast.csv"), fc_csv);

    auto errors = forecast_errors(test, forecast);
    model["forecast_horizon"] = horizon;
    model["forecast_mape"] = json_num(errors.mape);
    model["forecast_rmse"] = json_num(errors.rmse);
    model["forecast_mae"] = json_num(errors.mae);
    write_file(ctx.out("arima_model.json"), model.dump(2) + "\n");
    write_file(ctx.out("arima_forecast.svg"),
               svg_line_chart("ARIMA " + std::to_string(result.best.p) + ",1," +
                                  std::to_string(result.best.q) + " forecast vs actual",
                              {{"actual", test}, {"predicted", forecast}}));
    std::printf("ARIMA(%zu,1,%zu) aic %.2f, %zu-day MAPE %.4f\n", result.best.p, result.best.q,
                result.best.aic, horizon, errors.mape);
    return 0;
}

std::vector<double> component_values(const PriceSeries& s, OhlcComponent c) {
    switch (c) {
        case OhlcComponent::OPEN: return s.opens();
        case OhlcComponent::HIGH: return s.highs();
        case OhlcComponent::LOW: return s.lows();
        case OhlcComponent::CLOSE: return s.closes();
    }
    throw ConfigError("unknown component");
}

int cmd_train_dnn(RunContext& ctx, const std::string& csv, const std::string& component,
                  std::size_t lags, std::size_t epochs, double lr, double dropout,
                  std::size_t batch, const std::string& optimizer, bool use_grid,
                  std::size_t holdout) {
    auto series = load_series(ctx, csv);
    std::vector<OhlcComponent> components;
    if (component == "all")
        components = {OhlcComponent::OPEN, OhlcComponent::HIGH, OhlcComponent::LOW,
                      OhlcComponent::CLOSE};
    else
        components = {component_from_string(component)};

    json models_json = json::object();
    std::string loss_csv = "component,epoch,loss\n";
    for (OhlcComponent comp : components) {
        auto values = component_values(series, comp);
        if (values.size() <= holdout + lags + 1)
            throw SizeError("train-dnn: series too short for the holdout");
        std::vector<double> train_values(values.begin(),
                                         values.end() - static_cast<std::ptrdiff_t>(holdout));
        auto [normalized, scaler] = minmax_normalize(train_values);
        auto pairs = make_windows(normalized, lags);

        TrainConfig config;
        config.epochs = epochs;
        config.learning_rate = lr;
        config.dropout = dropout;
        config.batch_size = batch;
        config.optimizer = optimizer == "sgd" ? Optimizer::SGD : Optimizer::ADAM;
        config.seed = mix_seed(ctx.seed, static_cast<std::uint64_t>(comp));
        json cell_report = nullptr;
        if (use_grid) {
            auto grid = grid_search(pairs, lags, default_grid(config.seed));
            config = grid.best;
            cell_report = json::array();
            for (const auto& cell : grid.report)
                cell_report.push_back({{"epochs", cell.config.epochs},
                                       {"learning_rate", cell.config.learning_rate},
                                       {"optimizer", to_string(cell.config.optimizer)},
                                       {"validation_mae", json_num(cell.validation_mae)},
                                       {"diverged", cell.diverged}});
        }

        auto result = train(make_mlp(lags, comp, config.dropout, config.seed), pairs, config);
        result.model.scaler = scaler;
        const std::string name = to_string(comp);
        save_model(result.model, (ctx.out("dnn_" + name + ".model")).string());
        for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
            loss_csv += name + "," + std::to_string(e + 1) + "," +
                        fmt_num(result.epoch_loss[e]) + "\n";
        models_json[name] = {{"lags", lags},
                             {"widths", result.model.widths},
                             {"parameter_count", result.model.parameter_count()},
                             {"epochs", config.epochs},
                             {"learning_rate", config.learning_rate},
                             {"dropout", config.dropout},
                             {"batch_size", config.batch_size},
                             {"optimizer", to_string(config.optimizer)},
                             {"seed", config.seed},
                             {"final_loss", json_num(result.model.final_loss)},
                             {"grid_report", cell_report}};
        std::printf("trained %s net: %zu windows, final loss %.6f\n", name.c_str(), pairs.size(),
                    result.model.final_loss);
    }
    write_file(ctx.out("dnn_training.csv"), loss_csv);
    write_file(ctx.out("dnn_models.json"), models_json.dump(2) + "\n");
    return 0;
}

int cmd_forecast(RunContext& ctx, const std::string& csv, const std::string& models_dir,
                 std::size_t horizon, const std::string& mode, const std::string& component) {
    auto series = load_series(ctx, csv);
    if (mode == "recursive") {
        std::array<MlpModel, 4> models;
        const std::array<const char*, 4> names{"open", "high", "low", "close"};
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string path = models_dir + "/dnn_" + names[i] + ".model";
            ctx.add_input(path);
            models[i] = load_model(path);
        }
        auto fc = forecast_recursive(models, series, horizon);
        auto [predicted, violations] = forecast_to_series(fc, series.ticker + "_forecast");
        std::string fc_csv = "date,open,high,low,close\n";
        for (const auto& bar : predicted.bars)
            fc_csv += bar.date.to_string() + "," + fmt_num(bar.open) + "," + fmt_num(bar.high) +
                      "," + fmt_num(bar.low) + "," + fmt_num(bar.close) + "\n";
        write_file(ctx.out("forecast.csv"), fc_csv);
        json out = {{"mode", "recursive"},
                    {"start", fc.start.to_string()},
                    {"horizon", fc.horizon},
                    {"components", fc.components},
                    {"model_id", fc.model_id},
                    {"ohlc_violations", violations}};
        write_file(ctx.out("forecast.json"), out.dump(2) + "\n");
        // overlay: trailing history closes followed by the predicted closes
        std::vector<double> hist_tail, fc_overlay;
        const std::size_t tail = std::min<std::size_t>(60, series.size());
        for (std::size_t i = series.size() - tail; i < series.size(); ++i)
            hist_tail.push_back(series.bars[i].close);
        fc_overlay.assign(tail, std::numeric_limits<double>::quiet_NaN());
        for (const auto& bar : predicted.bars) fc_overlay.push_back(bar.close);
        hist_tail.resize(tail + predicted.size(), std::numeric_limits<double>::quiet_NaN());
        write_file(ctx.out("forecast.svg"),
                   svg_line_chart("recursive OHLC forecast (close)",
                                  {{"history", hist_tail}, {"forecast", fc_overlay}}));
        std::printf("forecast %zu bars from %s (%zu OHLC violations)\n", predicted.size(),
                    fc.start.to_string().c_str(), violations);
        return 0;
    }
    if (mode != "validation") throw ConfigError("forecast: mode must be recursive or validation");
    const OhlcComponent comp = component_from_string(component);
    const std::string path = models_dir + "/dnn_" + to_string(comp) + ".model";
    ctx.add_input(path);
    auto model = load_model(path);
    auto values = component_values(series, comp);
    auto fc = forecast_validation(model, values, series.dates(), horizon);
    std::vector<double> actual(values.end() - static_cast<std::ptrdiff_t>(horizon), values.end());
    auto errors = forecast_errors(actual, fc.values[0]);
    std::string fc_csv = "date,predicted,actual\n";
    for (std::size_t i = 0; i < horizon; ++i)
        fc_csv += series.bars[series.size() - horizon + i].date.to_string() + "," +
                  fmt_num(fc.values[0][i]) + "," + fmt_num(actual[i]) + "\n";
    write_file(ctx.out("forecast_validation.csv"), fc_csv);
    json out = {{"mode", "validation"},      {"component", to_string(comp)},
                {"horizon", horizon},        {"model_id", fc.model_id},
                {"mape", json_num(errors.mape)}, {"rmse", json_num(errors.rmse)},
                {"mae", json_num(errors.mae)},   {"evs", json_num(errors.evs)}};
    write_file(ctx.out("forecast_validation.json"), out.dump(2) + "\n");
    write_file(ctx.out("forecast_validation.svg"),
               svg_line_chart("one-step-ahead validation (" + to_string(comp) + ")",
                              {{"actual", actual}, {"predicted", fc.values[0]}}));
    std::printf("validation MAPE %.4f, EVS %.4f over %zu bars\n", errors.mape, errors.evs,
                horizon);
    return 0;
}

json ranking_json(const SelectionResult& r) {
    json ranked = json::array();
    for (const auto& c : r.ranked)
        ranked.push_back({{"indicator", c.spec.name()},
                          {"total_return", json_num(c.metrics.total_return)},
                          {"sharpe", json_opt(c.metrics.sharpe)},
                          {"sortino", json_opt(c.metrics.sortino)},
                          {"calmar", json_opt(c.metrics.calmar)},
                          {"expectancy", json_opt(c.metrics.expectancy)},
                          {"mdd", json_num(c.metrics.mdd)},
                          {"trades", c.report.trades.size()}});
    return {{"mode", to_string(r.mode)},
            {"window_start", r.window_start.to_string()},
            {"window_end", r.window_end.to_string()},
            {"chosen", r.chosen.name()},
            {"tie_break_note", r.tie_break_note},
            {"ranked", ranked}};
}

std::string ranking_csv(const SelectionResult& r) {
    std::string csv = "rank,indicator,total_return,sharpe,mdd,trades\n";
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
        const auto& c = r.ranked[i];
        csv += std::to_string(i + 1) + "," + c.spec.name() + "," +
               fmt_num(c.metrics.total_return) + "," +
               (c.metrics.sharpe ? fmt_num(*c.metrics.sharpe) : "") + "," +
               fmt_num(c.metrics.mdd) + "," + std::to_string(c.report.trades.size()) + "\n";
    }
    return csv;
}

int cmd_select(RunContext& ctx, const std::string& csv, const std::string& mode_name,
               const std::vector<std::string>& indicators, double budget, double fee,
               std::size_t bars) {
    auto series = load_series(ctx, csv);
    const SelectionMode mode =
        mode_name == "forwardtest" ? SelectionMode::FORWARDTEST : SelectionMode::BACKTEST;
    SelectionOptions opts;
    opts.budget = budget;
    opts.fee_rate = fee;
    opts.evaluation_bars = bars;
    auto result = select_strategy(parse_candidates(indicators), series, mode, opts);
    write_file(ctx.out("select_ranking.csv"), ranking_csv(result));
    write_file(ctx.out("select.json"), ranking_json(result).dump(2) + "\n");
    std::printf("%s selection over %s..%s chose %s\n", to_string(mode).c_str(),
                result.window_start.to_string().c_str(), result.window_end.to_string().c_str(),
                result.chosen.name().c_str());
    return 0;
}

int cmd_backtest(RunContext& ctx, const std::string& csv, const std::string& indicator,
                 double budget, double fee) {
    auto series = load_series(ctx, csv);
    auto spec = parse_indicator(indicator);
    auto report = run_backtest(series, signals_for(spec, series), budget, fee);
    auto metrics = risk_metrics(report);

    std::string blotter = "entry_date,entry_px,exit_date,exit_px,qty,fee,pnl\n";
    for (const auto& t : report.trades)
        blotter += t.entry_date.to_string() + "," + fmt_num(t.entry_price) + "," +
                   t.exit_date.to_string() + "," + fmt_num(t.exit_price) + "," +
                   fmt_num(t.quantity) + "," + fmt_num(t.fee_paid) + "," + fmt_num(t.profit) +
                   "\n";
    write_file(ctx.out("backtest_blotter.csv"), blotter);

    std::string equity_csv = "date,equity\n";
    for (std::size_t i = 0; i < report.equity.size(); ++i)
        equity_csv += report.dates[i].to_string() + "," + fmt_num(report.equity[i]) + "\n";
    write_file(ctx.out("backtest_equity.csv"), equity_csv);
    write_file(ctx.out("backtest_equity.svg"),
               svg_line_chart("equity curve: " + spec.name(), {{"equity", report.equity}}));

    json out = {{"ticker", series.ticker},
                {"indicator", spec.name()},
                {"budget", budget},
                {"fee_rate", fee},
                {"trades", report.trades.size()},
                {"final_equity", json_num(report.equity.back())},
                {"total_return", json_num(metrics.total_return)},
                {"mdd", json_num(metrics.mdd)},
                {"sharpe", json_opt(metrics.sharpe)},
                {"sortino", json_opt(metrics.sortino)},
                {"calmar", json_opt(metrics.calmar)},
                {"expectancy", json_opt(metrics.expectancy)}};
    write_file(ctx.out("backtest_metrics.json"), out.dump(2) + "\n");
    std::printf("%s on %s: %zu trades, final equity %.4f\n", spec.name().c_str(),
                series.ticker.c_str(), report.trades.size(), report.equity.back());
    return 0;
}

json pick_json(const CandidateResult& c) {
    return {{"indicator", c.spec.name()},
            {"total_return", json_num(c.metrics.total_return)},
            {"sharpe", json_opt(c.metrics.sharpe)},
            {"sortino", json_opt(c.metrics.sortino)},
            {"mdd", json_num(c.metrics.mdd)},
            {"trades", c.report.trades.size()},
            {"final_equity", json_num(c.report.equity.back())}};
}

int cmd_compare(RunContext& ctx, const std::string& history_csv, const std::string& predicted_csv,
                const std::string& real_csv, const std::vector<std::string>& indicators,
                double budget, double fee, std::size_t bars) {
    auto history = load_series(ctx, history_csv);
    auto predicted = load_loose_series(ctx, predicted_csv, history.ticker + "_predicted");
    auto real_future = load_series(ctx, real_csv);
    SelectionOptions opts;
    opts.budget = budget;
    opts.fee_rate = fee;
    opts.evaluation_bars = bars;
    auto cmp = compare_modes(parse_candidates(indicators), history, predicted, real_future, opts);

    json out = {{"backtest_selection", ranking_json(cmp.backtest_selection)},
                {"forwardtest_selection", ranking_json(cmp.forwardtest_selection)},
                {"backtest_pick_on_future", pick_json(cmp.backtest_pick_on_future)},
                {"forwardtest_pick_on_future", pick_json(cmp.forwardtest_pick_on_future)},
                {"total_backtest_runs", cmp.total_backtest_runs}};
    write_file(ctx.out("compare.json"), out.dump(2) + "\n");

    std::string csv = "mode,chosen,real_future_total_return,real_future_trades\n";
    csv += "BACKTEST," + cmp.backtest_selection.chosen.name() + "," +
           fmt_num(cmp.backtest_pick_on_future.metrics.total_return) + "," +
           std::to_string(cmp.backtest_pick_on_future.report.trades.size()) + "\n";
    csv += "FORWARDTEST," + cmp.forwardtest_selection.chosen.name() + "," +
           fmt_num(cmp.forwardtest_pick_on_future.metrics.total_return) + "," +
           std::to_string(cmp.forwardtest_pick_on_future.report.trades.size()) + "\n";
    write_file(ctx.out("compare.csv"), csv);
    std::printf("backtest mode chose %s (%.4f on real future); forwardtest mode chose %s (%.4f)\n",
                cmp.backtest_selection.chosen.name().c_str(),
                cmp.backtest_pick_on_future.metrics.total_return,
                cmp.forwardtest_selection.chosen.name().c_str(),
                cmp.forwardtest_pick_on_future.metrics.total_return);
    return 0;
}

int cmd_report(RunContext& ctx) {
    // Collate whatever pipeline artifacts exist under --out.
    const std::array<const char*, 12> artifacts{
        "volatility_YZ_summary.json", "cluster_summary.json", "synchrony.json",
        "adf.json",                   "arima_model.json",     "dnn_models.json",
        "forecast.json",              "forecast_validation.json", "select.json",
        "backtest_metrics.json",      "compare.json",         "manifest_ingest.json"};
    json combined = json::object();
    std::string md = "# Pipeline report\n\n";
    for (const char* name : artifacts) {
        const fs::path path = ctx.out_dir / name;
        if (!fs::exists(path)) continue;
        combined[name] = json::parse(read_file(path.string()));
        md += "- `" + std::string(name) + "` present\n";
    }
    write_file(ctx.out("report.json"), combined.dump(2) + "\n");
    write_file(ctx.out("report.md"), md);
    std::printf("report collated %zu artifacts\n", combined.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DNN-forwardtesting pipeline: OHLC ingest, volatility features, clustering, "
                 "synchrony, statistical and neural forecasting, strategy selection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("forwardtest ") + kVersion);
    app.set_config("--config")->description(
        "plain-text key = value config, [section] per subcommand");

    std::string out_dir = "out";
    std::uint64_t seed = 1;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->capture_default_str();

    // ingest
    std::string in_csv, in_ticker;
    bool in_permissive = false;
    auto* ingest = app.add_subcommand("ingest", "parse and canonicalize an OHLC csv");
    ingest->add_option("--csv", in_csv, "input csv")->required();
    ingest->add_option("--ticker", in_ticker, "ticker label (default: file stem)");
    ingest->add_flag("--permissive", in_permissive, "skip bad rows instead of failing");

    // volatility
    std::string vol_csv, vol_kind = "YZ";
    std::size_t vol_window = 30;
    auto* vol = app.add_subcommand("volatility", "rolling historical volatility");
    vol->add_option("--csv", vol_csv, "input csv")->required();
    vol->add_option("--kind", vol_kind, "STDDEV|PK|GK|RS|YZ")->capture_default_str();
    vol->add_option("--window", vol_window, "window in bars")->capture_default_str();

    // cluster
    std::vector<std::string> cl_csvs;
    std::size_t cl_window = 30, cl_kmin = 2, cl_kmax = 10, cl_k = 0, cl_restarts = 10;
    auto* cluster = app.add_subcommand("cluster", "k-means++ over volatility features");
    cluster->add_option("--csv", cl_csvs, "input csv (repeatable)")->required();
    cluster->add_option("--window", cl_window, "volatility window")->capture_default_str();
    cluster->add_option("--kmin", cl_kmin, "elbow scan start")->capture_default_str();
    cluster->add_option("--kmax", cl_kmax, "elbow scan end")->capture_default_str();
    cluster->add_option("--k", cl_k, "fixed k (0 = use the knee)")->capture_default_str();
    cluster->add_option("--restarts", cl_restarts, "restarts per k")->capture_default_str();

    // synchrony
    std::string sy_a, sy_b;
    std::size_t sy_window = 120;
    long sy_band = -1;
    auto* sync = app.add_subcommand("synchrony", "Pearson and DTW between two tickers");
    sync->add_option("--csv-a", sy_a, "first csv")->required();
    sync->add_option("--csv-b", sy_b, "second csv")->required();
    sync->add_option("--window", sy_window, "rolling Pearson window")->capture_default_str();
    sync->add_option("--band", sy_band, "Sakoe-Chiba band (-1 = none)")->capture_default_str();

    // adf
    std::string adf_csv;
    long adf_maxlag = -1;
    bool adf_log = false;
    auto* adf = app.add_subcommand("adf", "augmented Dickey-Fuller unit-root test");
    adf->add_option("--csv", adf_csv, "input csv")->required();
    adf->add_option("--max-lag", adf_maxlag, "max lag (-1 = Schwert rule)")->capture_default_str();
    adf->add_flag("--log", adf_log, "test log prices");

    // arima
    std::string ar_csv;
    std::size_t ar_pmax = 5, ar_qmax = 2, ar_horizon = 30;
    auto* arima = app.add_subcommand("arima", "grid-AIC ARIMA fit and forecast");
    arima->add_option("--csv", ar_csv, "input csv")->required();
    arima->add_option("--pmax", ar_pmax, "max AR order")->capture_default_str();
    arima->add_option("--qmax", ar_qmax, "max MA order")->capture_default_str();
    arima->add_option("--horizon", ar_horizon, "held-out forecast bars")->capture_default_str();

    // train-dnn
    std::string tr_csv, tr_component = "all", tr_optimizer = "adam";
    std::size_t tr_lags = 5, tr_epochs = 100, tr_batch = 5, tr_holdout = 30;
    double tr_lr = 1e-3, tr_dropout = 0.2;
    bool tr_grid = false;
    auto* train_cmd = app.add_subcommand("train-dnn", "train the per-component MLPs");
    train_cmd->add_option("--csv", tr_csv, "input csv")->required();
    train_cmd->add_option("--component", tr_component, "open|high|low|close|all")
        ->capture_default_str();
    train_cmd->add_option("--lags", tr_lags, "input window length")->capture_default_str();
    train_cmd->add_option("--epochs", tr_epochs, "training epochs")->capture_default_str();
    train_cmd->add_option("--lr", tr_lr, "learning rate")->capture_default_str();
    train_cmd->add_option("--dropout", tr_dropout, "hidden dropout rate")->capture_default_str();
    train_cmd->add_option("--batch", tr_batch, "mini-batch size")->capture_default_str();
    train_cmd->add_option("--optimizer", tr_optimizer, "adam|sgd")->capture_default_str();
    train_cmd->add_option("--holdout", tr_holdout, "trailing bars excluded from training")
        ->capture_default_str();
    train_cmd->add_flag("--grid", tr_grid, "hyperparameter grid search");

    // forecast
    std::string fc_csv, fc_models = "out", fc_mode = "recursive", fc_component = "close";
    std::size_t fc_horizon = 30;
    auto* forecast = app.add_subcommand("forecast", "forecast with trained MLPs");
    forecast->add_option("--csv", fc_csv, "seed history csv")->required();
    forecast->add_option("--models", fc_models, "directory with dnn_*.model")
        ->capture_default_str();
    forecast->add_option("--horizon", fc_horizon, "bars to forecast")->capture_default_str();
    forecast->add_option("--mode", fc_mode, "recursive|validation")->capture_default_str();
    forecast->add_option("--component", fc_component, "component for validation mode")
        ->capture_default_str();

    // select
    std::string se_csv, se_mode = "backtest";
    std::vector<std::string> se_indicators;
    double se_budget = 100.0, se_fee = 0.0;
    std::size_t se_bars = 30;
    auto* select = app.add_subcommand("select", "rank candidate strategies");
    select->add_option("--csv", se_csv, "evaluation series (warm-up prefix + window)")
        ->required();
    select->add_option("--mode", se_mode, "backtest|forwardtest")->capture_default_str();
    select->add_option("--indicator", se_indicators,
                       "candidate, e.g. RSI or ADX(period=14,threshold=25); repeatable "
                       "(default: full catalog)");
    select->add_option("--budget", se_budget, "starting budget")->capture_default_str();
    select->add_option("--fee", se_fee, "proportional fee rate")->capture_default_str();
    select->add_option("--bars", se_bars, "trailing bars scored")->capture_default_str();

    // backtest
    std::string bt_csv, bt_indicator;
    double bt_budget = 100.0, bt_fee = 0.0;
    auto* backtest = app.add_subcommand("backtest", "simulate one strategy");
    backtest->add_option("--csv", bt_csv, "input csv")->required();
    backtest->add_option("--indicator", bt_indicator, "strategy, e.g. RSI or TEMA(period=9)")
        ->required();
    backtest->add_option("--budget", bt_budget, "starting budget")->capture_default_str();
    backtest->add_option("--fee", bt_fee, "proportional fee rate")->capture_default_str();

    // compare
    std::string cp_history, cp_predicted, cp_real;
    std::vector<std::string> cp_indicators;
    double cp_budget = 100.0, cp_fee = 0.0;
    std::size_t cp_bars = 30;
    auto* compare = app.add_subcommand("compare", "backtest vs forwardtest selection");
    compare->add_option("--history", cp_history, "real history csv")->required();
    compare->add_option("--predicted", cp_predicted, "predicted future csv")->required();
    compare->add_option("--real", cp_real, "real future csv")->required();
    compare->add_option("--indicator", cp_indicators, "candidate (repeatable, default catalog)");
    compare->add_option("--budget", cp_budget, "starting budget")->capture_default_str();
    compare->add_option("--fee", cp_fee, "proportional fee rate")->capture_default_str();
    compare->add_option("--bars", cp_bars, "evaluation window bars")->capture_default_str();

    // report
    app.add_subcommand("report", "collate artifacts under --out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2
    }

    RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.seed = seed;
    try {
        fs::create_directories(ctx.out_dir);
        int rc = 1;
        if (app.got_subcommand("ingest")) {
            ctx.command = "ingest";
            ctx.params = {{"ticker", in_ticker}, {"permissive", in_permissive}};
            rc = cmd_ingest(ctx, in_csv, in_ticker, in_permissive);
        } else if (app.got_subcommand("volatility")) {
            ctx.command = "volatility";
            ctx.params = {{"kind", vol_kind}, {"window", vol_window}};
            rc = cmd_volatility(ctx, vol_csv, vol_kind, vol_window);
        } else if (app.got_subcommand("cluster")) {
            ctx.command = "cluster";
            ctx.params = {{"window", cl_window}, {"kmin", cl_kmin},         {"kmax", cl_kmax},
                          {"k", cl_k},           {"restarts", cl_restarts}};
            rc = cmd_cluster(ctx, cl_csvs, cl_window, cl_kmin, cl_kmax, cl_k, cl_restarts);
        } else if (app.got_subcommand("synchrony")) {
            ctx.command = "synchrony";
            ctx.params = {{"window", sy_window}, {"band", sy_band}};
            rc = cmd_synchrony(ctx, sy_a, sy_b, sy_window, sy_band);
        } else if (app.got_subcommand("adf")) {
            ctx.command = "adf";
            ctx.params = {{"max_lag", adf_maxlag}, {"log", adf_log}};
            rc = cmd_adf(ctx, adf_csv, adf_maxlag, adf_log);
        } else if (app.got_subcommand("arima")) {
            ctx.command = "arima";
            ctx.params = {{"pmax", ar_pmax}, {"qmax", ar_qmax}, {"horizon", ar_horizon}};
            rc = cmd_arima(ctx, ar_csv, ar_pmax, ar_qmax, ar_horizon);
        } else if (app.got_subcommand("train-dnn")) {
            ctx.command = "train-dnn";
            ctx.params = {{"component", tr_component}, {"lags", tr_lags},
                          {"epochs", tr_epochs},       {"lr", tr_lr},
                          {"dropout", tr_dropout},     {"batch", tr_batch},
                          {"optimizer", tr_optimizer}, {"grid", tr_grid},
                          {"holdout", tr_holdout}};
            rc = cmd_train_dnn(ctx, tr_csv, tr_component, tr_lags, tr_epochs, tr_lr, tr_dropout,
                               tr_batch, tr_optimizer, tr_grid, tr_holdout);
        } else if (app.got_subcommand("forecast")) {
            ctx.command = "forecast";
            ctx.params = {{"models", fc_models},
                          {"horizon", fc_horizon},
                          {"mode", fc_mode},
                          {"component", fc_component}};
            rc = cmd_forecast(ctx, fc_csv, fc_models, fc_horizon, fc_mode, fc_component);
        } else if (app.got_subcommand("select")) {
            ctx.command = "select";
            ctx.params = {{"mode", se_mode},     {"indicators", se_indicators},
                          {"budget", se_budget}, {"fee", se_fee},
                          {"bars", se_bars}};
            rc = cmd_select(ctx, se_csv, se_mode, se_indicators, se_budget, se_fee, se_bars);
        } else if (app.got_subcommand("backtest")) {
            ctx.command = "backtest";
            ctx.params = {{"indicator", bt_indicator}, {"budget", bt_budget}, {"fee", bt_fee}};
            rc = cmd_backtest(ctx, bt_csv, bt_indicator, bt_budget, bt_fee);
        } else if (app.got_subcommand("compare")) {
            ctx.command = "compare";
            ctx.params = {{"indicators", cp_indicators},
                          {"budget", cp_budget},
                          {"fee", cp_fee},
                          {"bars", cp_bars}};
            rc = cmd_compare(ctx, cp_history, cp_predicted, cp_real, cp_indicators, cp_budget,
                             cp_fee, cp_bars);
        } else if (app.got_subcommand("report")) {
            ctx.command = "report";
            rc = cmd_report(ctx);
        }
        if (rc == 0) ctx.write_manifest();
        return rc;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
