#include "ft/indicators.hpp"
#include "ft/errors.hpp"

#include <cmath>
#include <limits>

namespace ft {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool defined(double v) { return !std::isnan(v); }

std::size_t as_period(double v, const char* what) {
    if (v < 1.0 || v != std::floor(v)) throw ConfigError(std::string("bad period for ") + what);
    return static_cast<std::size_t>(v);
}

void require_length(const PriceSeries& series, std::size_t warmup, const char* what) {
    if (series.size() <= warmup)
        throw SizeError(std::string(what) + ": series of " + std::to_string(series.size()) +
                        " bars shorter than warm-up " + std::to_string(warmup));
}

} // namespace

std::string to_string(IndicatorKind kind) {
    switch (kind) {
        case IndicatorKind::SMA: return "SMA";
        case IndicatorKind::EMA: return "EMA";
        case IndicatorKind::MACD: return "MACD";
        case IndicatorKind::BB: return "BB";
        case IndicatorKind::STOCH: return "STOCH";
        case IndicatorKind::WILLR: return "WILLR";
        case IndicatorKind::MOM: return "MOM";
        case IndicatorKind::RSI: return "RSI";
        case IndicatorKind::ATR: return "ATR";
        case IndicatorKind::PO: return "PO";
        case IndicatorKind::TEMA: return "TEMA";
        case IndicatorKind::ADX: return "ADX";
        case IndicatorKind::ST_MO_MACD: return "ST+MO+MACD";
        case IndicatorKind::PO_WILLR: return "PO+WILLR";
        case IndicatorKind::PO_RSI: return "PO+RSI";
    }
    return "?";
}

IndicatorKind indicator_kind_from_string(const std::string& name) {
    static const std::map<std::string, IndicatorKind> table = {
        {"SMA", IndicatorKind::SMA},       {"EMA", IndicatorKind::EMA},
        {"MACD", IndicatorKind::MACD},     {"BB", IndicatorKind::BB},
        {"STOCH", IndicatorKind::STOCH},   {"WILLR", IndicatorKind::WILLR},
        {"MOM", IndicatorKind::MOM},       {"RSI", IndicatorKind::RSI},
        {"ATR", IndicatorKind::ATR},       {"PO", IndicatorKind::PO},
        {"TEMA", IndicatorKind::TEMA},     {"ADX", IndicatorKind::ADX},
        {"ST+MO+MACD", IndicatorKind::ST_MO_MACD},
        {"PO+WILLR", IndicatorKind::PO_WILLR},
        {"PO+RSI", IndicatorKind::PO_RSI},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown indicator '" + name + "'");
    return it->second;
}

IndicatorSpec IndicatorSpec::make(IndicatorKind kind) {
    IndicatorSpec spec;
    spec.kind = kind;
    return spec;
}

std::string IndicatorSpec::name() const {
    std::string s = to_string(kind);
    switch (kind) {
        case IndicatorKind::SMA:
        case IndicatorKind::EMA:
            s += "(" + std::to_string(static_cast<int>(param("period", 20))) + ")";
            break;
        case IndicatorKind::RSI:
            s += "(" + std::to_string(static_cast<int>(param("period", 5))) + "," +
                 std::to_string(static_cast<int>(param("overbought", 70))) + "," +
                 std::to_string(static_cast<int>(param("oversold", 30))) + ")";
            break;
        case IndicatorKind::TEMA:
            s += "(" + std::to_string(static_cast<int>(param("period", 9))) + ")";
            break;
        case IndicatorKind::ADX:
            s += "(" + std::to_string(static_cast<int>(param("period", 14))) + "," +
                 std::to_string(static_cast<int>(param("threshold", 25))) + ")";
            break;
        default:
            break;
    }
    return s;
}

std::vector<IndicatorSpec> default_catalog() {
    std::vector<IndicatorSpec> out;
    for (IndicatorKind k : {IndicatorKind::SMA, IndicatorKind::EMA, IndicatorKind::MACD,
                            IndicatorKind::BB, IndicatorKind::STOCH, IndicatorKind::WILLR,
                            IndicatorKind::MOM, IndicatorKind::RSI, IndicatorKind::ATR,
                            IndicatorKind::PO, IndicatorKind::TEMA, IndicatorKind::ADX,
                            IndicatorKind::ST_MO_MACD, IndicatorKind::PO_WILLR,
                            IndicatorKind::PO_RSI})
        out.push_back(IndicatorSpec::make(k));
    return out;
}

const std::vector<double>& IndicatorValues::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return columns[i];
    throw ConfigError("indicator column '" + name + "' not present");
}

std::vector<double> sma(const std::vector<double>& values, std::size_t period) {
    if (period < 1) throw ConfigError("sma: period must be >= 1");
    std::vector<double> out(values.size(), kNaN);
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += values[i];
        if (i >= period) acc -= values[i - period];
        if (i + 1 >= period) out[i] = acc / static_cast<double>(period);
    }
    return out;
}

std::vector<double> ema(const std::vector<double>& values, std::size_t period) {
    if (period < 1) throw ConfigError("ema: period must be >= 1");
    // alpha = 2/(n+1), seeded with the first value; warm-up of n-1 bars.
    std::vector<double> out(values.size(), kNaN);
    if (values.empty()) return out;
    const double alpha = 2.0 / (static_cast<double>(period) + 1.0);
    double level = values[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) level = alpha * values[i] + (1.0 - alpha) * level;
        if (i + 1 >= period) out[i] = level;
    }
    return out;
}

namespace {

// EMA recursion without warm-up masking, for stacking (TEMA, MACD signal).
std::vector<double> ema_raw(const std::vector<double>& values, std::size_t period) {
    std::vector<double> out(values.size(), kNaN);
    if (values.empty()) return out;
    const double alpha = 2.0 / (static_cast<double>(period) + 1.0);
    double level = values[0];
    out[0] = level;
    for (std::size_t i = 1; i < values.size(); ++i) {
        level = alpha * values[i] + (1.0 - alpha) * level;
        out[i] = level;
    }
    return out;
}

} // namespace

std::vector<double> tema(const std::vector<double>& values, std::size_t period) {
    const auto e1 = ema_raw(values, period);
    const auto e2 = ema_raw(e1, period);
    const auto e3 = ema_raw(e2, period);
    std::vector<double> out(values.size(), kNaN);
    const std::size_t warmup = 3 * (period - 1);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (i >= warmup) out[i] = 3.0 * e1[i] - 3.0 * e2[i] + e3[i];
    return out;
}

std::vector<double> momentum(const std::vector<double>& values, std::size_t period) {
    std::vector<double> out(values.size(), kNaN);
    for (std::size_t i = period; i < values.size(); ++i) out[i] = values[i] - values[i - period];
    return out;
}

std::vector<double> rsi(const std::vector<double>& closes, std::size_t period) {
    if (period < 1) throw ConfigError("rsi: period must be >= 1");
    std::vector<double> out(closes.size(), kNaN);
    if (closes.size() <= period) return out;
    // Wilder smoothing: simple averages over the first `period` moves, then
    // avg = (avg*(n-1) + move)/n.
    double avg_gain = 0.0, avg_loss = 0.0;
    for (std::size_t i = 1; i <= period; ++i) {
        const double d = closes[i] - closes[i - 1];
        avg_gain += std::max(d, 0.0);
        avg_loss += std::max(-d, 0.0);
    }
    avg_gain /= static_cast<double>(period);
    avg_loss /= static_cast<double>(period);
    auto to_rsi = [](double g, double l) {
        if (l == 0.0) return g == 0.0 ? 50.0 : 100.0;
        return 100.0 - 100.0 / (1.0 + g / l);
    };
    out[period] = to_rsi(avg_gain, avg_loss);
    for (std::size_t i = period + 1; i < closes.size(); ++i) {
        const double d = closes[i] - closes[i - 1];
        avg_gain = (avg_gain * (period - 1) + std::max(d, 0.0)) / static_cast<double>(period);
        avg_loss = (avg_loss * (period - 1) + std::max(-d, 0.0)) / static_cast<double>(period);
        out[i] = to_rsi(avg_gain, avg_loss);
    }
    return out;
}

std::vector<double> atr(const PriceSeries& series, std::size_t period) {
    require_length(series, period, "atr");
    const auto& bars = series.bars;
    std::vector<double> tr(bars.size());
    tr[0] = bars[0].high - bars[0].low;
    for (std::size_t i = 1; i < bars.size(); ++i) {
        const double pc = bars[i - 1].close;
        tr[i] = std::max({bars[i].high - bars[i].low, std::fabs(bars[i].high - pc),
                          std::fabs(bars[i].low - pc)});
    }
    std::vector<double> out(bars.size(), kNaN);
    double level = 0.0;
    for (std::size_t i = 1; i <= period; ++i) level += tr[i];
    level /= static_cast<double>(period);
    out[period] = level;
    for (std::size_t i = period + 1; i < bars.size(); ++i) {
        level = (level * (period - 1) + tr[i]) / static_cast<double>(period);
        out[i] = level;
    }
    return out;
}

MacdResult macd(const std::vector<double>& closes, std::size_t fast, std::size_t slow,
                std::size_t signal_period) {
    MacdResult r;
    const auto ef = ema_raw(closes, fast);
    const auto es = ema_raw(closes, slow);
    std::vector<double> line(closes.size());
    for (std::size_t i = 0; i < closes.size(); ++i) line[i] = ef[i] - es[i];
    const auto sig = ema_raw(line, signal_period);
    r.macd.assign(closes.size(), kNaN);
    r.signal.assign(closes.size(), kNaN);
    const std::size_t warm_line = slow - 1;
    const std::size_t warm_sig = slow - 1 + signal_period - 1;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        if (i >= warm_line) r.macd[i] = line[i];
        if (i >= warm_sig) r.signal[i] = sig[i];
    }
    return r;
}

BollingerResult bollinger(const std::vector<double>& closes, std::size_t period, double width) {
    BollingerResult r;
    r.middle = sma(closes, period);
    r.upper.assign(closes.size(), kNaN);
    r.lower.assign(closes.size(), kNaN);
    for (std::size_t i = 0; i < closes.size(); ++i) {
        if (i + 1 < period) continue;
        double var = 0.0;
        for (std::size_t j = i + 1 - period; j <= i; ++j)
            var += (closes[j] - r.middle[i]) * (closes[j] - r.middle[i]);
        const double sd = std::sqrt(var / static_cast<double>(period));
        r.upper[i] = r.middle[i] + width * sd;
        r.lower[i] = r.middle[i] - width * sd;
    }
    return r;
}

StochasticResult stochastic(const PriceSeries& series, std::size_t k_period, std::size_t d_period) {
    require_length(series, k_period, "stochastic");
    const auto& bars = series.bars;
    std::vector<double> k(bars.size(), kNaN);
    for (std::size_t i = k_period - 1; i < bars.size(); ++i) {
        double hh = -std::numeric_limits<double>::infinity();
        double ll = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1 - k_period; j <= i; ++j) {
            hh = std::max(hh, bars[j].high);
            ll = std::min(ll, bars[j].low);
        }
        k[i] = hh == ll ? kNaN : 100.0 * (bars[i].close - ll) / (hh - ll);
    }
    StochasticResult r;
    r.k = k;
    // %D = SMA over the last d_period defined %K values.
    r.d.assign(bars.size(), kNaN);
    for (std::size_t i = k_period - 1 + d_period - 1; i < bars.size(); ++i) {
        double acc = 0.0;
        bool ok = true;
        for (std::size_t j = i + 1 - d_period; j <= i; ++j) {
            if (!defined(k[j])) {
                ok = false;
                break;
            }
            acc += k[j];
        }
        if (ok) r.d[i] = acc / static_cast<double>(d_period);
    }
    return r;
}

std::vector<double> williams_r(const PriceSeries& series, std::size_t period) {
    require_length(series, period, "williams_r");
    const auto& bars = series.bars;
    std::vector<double> out(bars.size(), kNaN);
    for (std::size_t i = period - 1; i < bars.size(); ++i) {
        double hh = -std::numeric_limits<double>::infinity();
        double ll = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1 - period; j <= i; ++j) {
            hh = std::max(hh, bars[j].high);
            ll = std::min(ll, bars[j].low);
        }
        out[i] = hh == ll ? kNaN : -100.0 * (hh - bars[i].close) / (hh - ll);
    }
    return out;
}

std::vector<double> price_oscillator(const std::vector<double>& closes, std::size_t fast,
                                     std::size_t slow) {
    const auto ef = ema_raw(closes, fast);
    const auto es = ema_raw(closes, slow);
    std::vector<double> out(closes.size(), kNaN);
    for (std::size_t i = slow - 1; i < closes.size(); ++i)
        out[i] = 100.0 * (ef[i] - es[i]) / es[i];
    return out;
}

AdxResult adx(const PriceSeries& series, std::size_t period) {
    require_length(series, 2 * period, "adx");
    const auto& bars = series.bars;
    const std::size_t n = bars.size();

    std::vector<double> tr(n, 0.0), pdm(n, 0.0), mdm(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double up = bars[i].high - bars[i - 1].high;
        const double down = bars[i - 1].low - bars[i].low;
        pdm[i] = (up > down && up > 0.0) ? up : 0.0;
        mdm[i] = (down > up && down > 0.0) ? down : 0.0;
        const double pc = bars[i - 1].close;
        tr[i] = std::max({bars[i].high - bars[i].low, std::fabs(bars[i].high - pc),
                          std::fabs(bars[i].low - pc)});
    }

    AdxResult r;
    r.adx.assign(n, kNaN);
    r.plus_di.assign(n, kNaN);
    r.minus_di.assign(n, kNaN);

    // Wilder smoothed sums: seed with the sum of the first `period` moves,
    // then S = S - S/n + X.
    double str = 0.0, spdm = 0.0, smdm = 0.0;
    for (std::size_t i = 1; i <= period; ++i) {
        str += tr[i];
        spdm += pdm[i];
        smdm += mdm[i];
    }
    std::vector<double> dx(n, kNaN);
    auto set_di = [&](std::size_t i) {
        if (str <= 0.0) return;
        r.plus_di[i] = 100.0 * spdm / str;
        r.minus_di[i] = 100.0 * smdm / str;
        const double sum = r.plus_di[i] + r.minus_di[i];
        if (sum > 0.0) dx[i] = 100.0 * std::fabs(r.plus_di[i] - r.minus_di[i]) / sum;
    };
    set_di(period);
    for (std::size_t i = period + 1; i < n; ++i) {
        str = str - str / static_cast<double>(period) + tr[i];
        spdm = spdm - spdm / static_cast<double>(period) + pdm[i];
        smdm = smdm - smdm / static_cast<double>(period) + mdm[i];
        set_di(i);
    }

    // ADX = Wilder average of DX, first value the mean of the first n DX.
    double level = 0.0;
    std::size_t count = 0;
    for (std::size_t i = period; i < n; ++i) {
        if (!defined(dx[i])) continue;
        if (count < period) {
            level += dx[i];
            ++count;
            if (count == period) {
                level /= static_cast<double>(period);
                r.adx[i] = level;
            }
        } else {
            level = (level * (period - 1) + dx[i]) / static_cast<double>(period);
            r.adx[i] = level;
        }
    }
    return r;
}

IndicatorValues compute_indicator(const IndicatorSpec& spec, const PriceSeries& series) {
    IndicatorValues v;
    const auto closes = series.closes();
    auto add = [&](const std::string& name, std::vector<double> col) {
        v.names.push_back(name);
        v.columns.push_back(std::move(col));
    };

    switch (spec.kind) {
        case IndicatorKind::SMA: {
            const auto p = as_period(spec.param("period", 20), "SMA");
            require_length(series, p - 1, "SMA");
            add("value", sma(closes, p));
            break;
        }
        case IndicatorKind::EMA: {
            const auto p = as_period(spec.param("period", 20), "EMA");
            require_length(series, p - 1, "EMA");
            add("value", ema(closes, p));
            break;
        }
        case IndicatorKind::MACD: {
            const auto fast = as_period(spec.param("fast", 12), "MACD");
            const auto slow = as_period(spec.param("slow", 26), "MACD");
            const auto sig = as_period(spec.param("signal", 9), "MACD");
            require_length(series, slow + sig - 2, "MACD");
            auto m = macd(closes, fast, slow, sig);
            add("macd", std::move(m.macd));
            add("signal", std::move(m.signal));
            break;
        }
        case IndicatorKind::BB: {
            const auto p = as_period(spec.param("period", 20), "BB");
            require_length(series, p - 1, "BB");
            auto b = bollinger(closes, p, spec.param("width", 2.0));
            add("middle", std::move(b.middle));
            add("upper", std::move(b.upper));
            add("lower", std::move(b.lower));
            break;
        }
        case IndicatorKind::STOCH: {
            const auto kp = as_period(spec.param("k_period", 14), "STOCH");
            const auto dp = as_period(spec.param("d_period", 3), "STOCH");
            require_length(series, kp + dp - 2, "STOCH");
            auto s = stochastic(series, kp, dp);
            add("k", std::move(s.k));
            add("d", std::move(s.d));
            break;
        }
        case IndicatorKind::WILLR: {
            const auto p = as_period(spec.param("period", 14), "WILLR");
            add("value", williams_r(series, p));
            break;
        }
        case IndicatorKind::MOM: {
            const auto p = as_period(spec.param("period", 10), "MOM");
            require_length(series, p, "MOM");
            add("value", momentum(closes, p));
            break;
        }
        case IndicatorKind::RSI: {
            const auto p = as_period(spec.param("period", 5), "RSI");
            require_length(series, p, "RSI");
            add("value", rsi(closes, p));
            break;
        }
        case IndicatorKind::ATR: {
            const auto p = as_period(spec.param("period", 14), "ATR");
            add("value", atr(series, p));
            break;
        }
        case IndicatorKind::PO: {
            const auto slow = as_period(spec.param("slow", 26), "PO");
            require_length(series, slow - 1, "PO");
            add("value", price_oscillator(closes, as_period(spec.param("fast", 12), "PO"), slow));
            break;
        }
        case IndicatorKind::TEMA: {
            const auto p = as_period(spec.param("period", 9), "TEMA");
            require_length(series, 3 * (p - 1), "TEMA");
            add("tema_open", tema(series.opens(), p));
            add("tema_high", tema(series.highs(), p));
            add("tema_low", tema(series.lows(), p));
            add("tema_close", tema(closes, p));
            break;
        }
        case IndicatorKind::ADX: {
            const auto p = as_period(spec.param("period", 14), "ADX");
            auto a = adx(series, p);
            add("adx", std::move(a.adx));
            add("pdi", std::move(a.plus_di));
            add("mdi", std::move(a.minus_di));
            break;
        }
        case IndicatorKind::ST_MO_MACD: {
            auto s = stochastic(series, as_period(spec.param("k_period", 14), "STOCH"),
                                as_period(spec.param("d_period", 3), "STOCH"));
            add("k", std::move(s.k));
            add("mom", momentum(closes, as_period(spec.param("mom_period", 10), "MOM")));
            auto m = macd(closes, 12, 26, 9);
            add("macd", std::move(m.macd));
            add("signal", std::move(m.signal));
            break;
        }
        case IndicatorKind::PO_WILLR: {
            add("po", price_oscillator(closes, 12, 26));
            add("willr", williams_r(series, as_period(spec.param("willr_period", 14), "WILLR")));
            break;
        }
        case IndicatorKind::PO_RSI: {
            add("po", price_oscillator(closes, 12, 26));
            add("rsi", rsi(closes, as_period(spec.param("rsi_period", 5), "RSI")));
            break;
        }
    }
    return v;
}

namespace {

// Strict crossing between consecutive bars; both bars must be defined.
bool crosses_above(const std::vector<double>& a, const std::vector<double>& b, std::size_t i) {
    return i > 0 && defined(a[i]) && defined(a[i - 1]) && defined(b[i]) && defined(b[i - 1]) &&
           a[i - 1] <= b[i - 1] && a[i] > b[i];
}

bool crosses_below(const std::vector<double>& a, const std::vector<double>& b, std::size_t i) {
    return i > 0 && defined(a[i]) && defined(a[i - 1]) && defined(b[i]) && defined(b[i - 1]) &&
           a[i - 1] >= b[i - 1] && a[i] < b[i];
}

bool crosses_above_level(const std::vector<double>& a, double level, std::size_t i) {
    return i > 0 && defined(a[i]) && defined(a[i - 1]) && a[i - 1] <= level && a[i] > level;
}

bool crosses_below_level(const std::vector<double>& a, double level, std::size_t i) {
    return i > 0 && defined(a[i]) && defined(a[i - 1]) && a[i - 1] >= level && a[i] < level;
}

} // namespace

SignalSeries generate_signals(const IndicatorSpec& spec, const PriceSeries& series,
                              const IndicatorValues& values) {
    const std::size_t n = series.size();
    for (const auto& col : values.columns)
        if (col.size() != n) throw SizeError("generate_signals: indicator values not aligned");

    SignalSeries out;
    out.actions.assign(n, Action::HOLD);
    const auto closes = series.closes();

    // Combo members use level (state) conditions; a combo enters on the bar
    // where the conjunction becomes true.
    auto combo = [&](auto entry_state, auto exit_state) {
        bool prev_entry = false, prev_exit = false;
        for (std::size_t i = 0; i < n; ++i) {
            const bool e = entry_state(i);
            const bool x = exit_state(i);
            if (e && !prev_entry)
                out.actions[i] = Action::ENTER;
            else if (x && !prev_exit)
                out.actions[i] = Action::EXIT;
            prev_entry = e;
            prev_exit = x;
        }
    };

    switch (spec.kind) {
        case IndicatorKind::SMA:
        case IndicatorKind::EMA: {
            const auto& ma = values.column("value");
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_above(closes, ma, i)) out.actions[i] = Action::ENTER;
                else if (crosses_below(closes, ma, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::MACD: {
            const auto& line = values.column("macd");
            const auto& sig = values.column("signal");
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_above(line, sig, i)) out.actions[i] = Action::ENTER;
                else if (crosses_below(line, sig, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::BB: {
            // Mean reversion: enter on a drop through the lower band, exit on
            // a rise through the upper band.
            const auto& upper = values.column("upper");
            const auto& lower = values.column("lower");
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_below(closes, lower, i)) out.actions[i] = Action::ENTER;
                else if (crosses_above(closes, upper, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::STOCH: {
            const auto& k = values.column("k");
            const double os = spec.param("oversold", 20.0);
            const double ob = spec.param("overbought", 80.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_above_level(k, os, i)) out.actions[i] = Action::ENTER;
                else if (crosses_below_level(k, ob, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::WILLR: {
            const auto& w = values.column("value");
            const double os = spec.param("oversold", -80.0);
            const double ob = spec.param("overbought", -20.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_above_level(w, os, i)) out.actions[i] = Action::ENTER;
                else if (crosses_below_level(w, ob, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::MOM: {
            const auto& mom = values.column("value");
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_above_level(mom, 0.0, i)) out.actions[i] = Action::ENTER;
                else if (crosses_below_level(mom, 0.0, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::RSI: {
            const auto& r = values.column("value");
            const double os = spec.param("oversold", 30.0);
            const double ob = spec.param("overbought", 70.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_above_level(r, os, i)) out.actions[i] = Action::ENTER;
                else if (crosses_below_level(r, ob, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::ATR: {
            // Volatility breakout: a close moving more than mult*ATR from the
            // previous close signals in the direction of the move.
            const auto& a = values.column("value");
            const double mult = spec.param("mult", 1.0);
            for (std::size_t i = 1; i < n; ++i) {
                if (!defined(a[i - 1])) continue;
                if (closes[i] > closes[i - 1] + mult * a[i - 1]) out.actions[i] = Action::ENTER;
                else if (closes[i] < closes[i - 1] - mult * a[i - 1]) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::PO: {
            const auto& po = values.column("value");
            for (std::size_t i = 0; i < n; ++i) {
                if (crosses_above_level(po, 0.0, i)) out.actions[i] = Action::ENTER;
                else if (crosses_below_level(po, 0.0, i)) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::TEMA: {
            // Per-component TEMA rule:
            //   entry ((l<T_l) or (h<T_h)) and ((c<T_c) or (o<T_o))
            //   exit  ((l>T_l) or (h>T_h)) and ((c>T_c) or (o>T_o))
            const auto& to = values.column("tema_open");
            const auto& th = values.column("tema_high");
            const auto& tl = values.column("tema_low");
            const auto& tc = values.column("tema_close");
            for (std::size_t i = 0; i < n; ++i) {
                if (!defined(to[i]) || !defined(th[i]) || !defined(tl[i]) || !defined(tc[i]))
                    continue;
                const auto& b = series.bars[i];
                const bool entry = ((b.low < tl[i]) || (b.high < th[i])) &&
                                   ((b.close < tc[i]) || (b.open < to[i]));
                const bool exit = ((b.low > tl[i]) || (b.high > th[i])) &&
                                  ((b.close > tc[i]) || (b.open > to[i]));
                if (entry) out.actions[i] = Action::ENTER;
                else if (exit) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::ADX: {
            const auto& a = values.column("adx");
            const auto& pdi = values.column("pdi");
            const auto& mdi = values.column("mdi");
            const double threshold = spec.param("threshold", 25.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (!defined(a[i]) || !defined(pdi[i]) || !defined(mdi[i])) continue;
                if (pdi[i] > mdi[i] && a[i] > threshold) out.actions[i] = Action::ENTER;
                else if (mdi[i] > pdi[i] && a[i] > threshold) out.actions[i] = Action::EXIT;
            }
            break;
        }
        case IndicatorKind::ST_MO_MACD: {
            const auto& k = values.column("k");
            const auto& mom = values.column("mom");
            const auto& line = values.column("macd");
            const auto& sig = values.column("signal");
            const double os = spec.param("oversold", 20.0);
            const double ob = spec.param("overbought", 80.0);
            combo(
                [&](std::size_t i) {
                    return defined(k[i]) && defined(mom[i]) && defined(line[i]) && defined(sig[i]) &&
                           k[i] < os && mom[i] > 0.0 && line[i] > sig[i];
                },
                [&](std::size_t i) {
                    return defined(k[i]) && defined(mom[i]) && defined(line[i]) && defined(sig[i]) &&
                           k[i] > ob && mom[i] < 0.0 && line[i] < sig[i];
                });
            break;
        }
        case IndicatorKind::PO_WILLR: {
            const auto& po = values.column("po");
            const auto& w = values.column("willr");
            combo(
                [&](std::size_t i) {
                    return defined(po[i]) && defined(w[i]) && po[i] > 0.0 && w[i] < -80.0;
                },
                [&](std::size_t i) {
                    return defined(po[i]) && defined(w[i]) && po[i] < 0.0 && w[i] > -20.0;
                });
            break;
        }
        case IndicatorKind::PO_RSI: {
            const auto& po = values.column("po");
            const auto& r = values.column("rsi");
            const double os = spec.param("oversold", 30.0);
            const double ob = spec.param("overbought", 70.0);
            combo(
                [&](std::size_t i) {
                    return defined(po[i]) && defined(r[i]) && po[i] > 0.0 && r[i] < os;
                },
                [&](std::size_t i) {
                    return defined(po[i]) && defined(r[i]) && po[i] < 0.0 && r[i] > ob;
                });
            break;
        }
    }
    return out;
}

SignalSeries signals_for(const IndicatorSpec& spec, const PriceSeries& series) {
    return generate_signals(spec, series, compute_indicator(spec, series));
}

} // namespace ft
