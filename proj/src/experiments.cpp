#include "clipofdm/experiments.hpp"

#include "clipofdm/bussgang.hpp"
#include "clipofdm/evm.hpp"
#include "clipofdm/lowerbound.hpp"
#include "clipofdm/rate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace clipofdm {

namespace {

const char* const kExperimentNames[] = {"demo-frame", "evm-sweep", "evm-bound", "sdr",
                                        "rate-surface", "rate-optimal", "channel"};

const char* const kKnownKeys[] = {"experiment", "scheme",     "n",           "num_symbols",
                                  "seed",       "gamma_db",   "varsigma",    "eta_osnr_db",
                                  "eta_dsnr_db", "ratio_db",  "channel",     "delay_spread",
                                  "sample_rate", "out"};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& field, const std::string& text)
{
    const auto t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError(field, "expected a number, got '" + t + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& field, const std::string& text)
{
    const auto t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw ConfigError(field, "expected a non-negative integer, got '" + t + "'");
    }
    return v;
}

// The 8 QPSK symbols of the worked subcarrier-arrangement example.
const ComplexVector kExampleSymbols = {{1, 1}, {1, -1}, {-1, -1}, {1, 1},
                                       {1, -1}, {-1, 1}, {-1, -1}, {1, -1}};

ExperimentOutput run_demo_frame(const ExperimentConfig& cfg)
{
    const auto plan = SubcarrierPlan::make(cfg.scheme, cfg.n);
    SymbolFrame frame;
    if (plan.num_symbols() == kExampleSymbols.size()) {
        frame = map_symbols(plan, kExampleSymbols);
    } else {
        auto rng = batch_engine(cfg.seed, 0);
        frame = random_qpsk_frame(plan, rng);
    }
    const double sigma = frame_sigma(plan, kQpskPower);
    const auto clip_cfg = ClipBiasConfig::make_for(plan.scheme, sigma, db_to_amplitude(cfg.gamma_db.at(0)),
                                                   cfg.varsigma.at(0));
    const auto y = clip_and_bias(frame.time, clip_cfg);

    CsvTable table({"index", "X_re", "X_im", "x_time", "y_time"});
    for (std::size_t i = 0; i < plan.n; ++i) {
        CsvTable::Row row;
        row.add(static_cast<long long>(i))
            .add(frame.spectrum[i].real())
            .add(frame.spectrum[i].imag())
            .add(frame.time[i])
            .add(y[i]);
        table.push(row);
    }
    std::ostringstream s;
    s << "demo-frame: " << table.rows() << " rows; sigma=" << format_number(sigma)
      << " c_u=" << format_number(clip_cfg.upper()) << " c_l=" << format_number(clip_cfg.lower())
      << " B=" << format_number(clip_cfg.bias());
    return {std::move(table), s.str()};
}

ExperimentOutput run_evm_sweep(const ExperimentConfig& cfg)
{
    const auto plan = SubcarrierPlan::make(cfg.scheme, cfg.n);
    const double sigma = frame_sigma(plan, kQpskPower);
    CsvTable table({"scheme", "gamma_db", "varsigma", "evm_analytic", "evm_mc", "mc_stderr"});
    std::ostringstream argmins;
    for (double gdb : cfg.gamma_db) {
        const double gamma = db_to_amplitude(gdb);
        double best_a = INFINITY, best_m = INFINITY;
        double arg_a = 0.0, arg_m = 0.0;
        for (double s : cfg.varsigma) {
            const auto clip_cfg = ClipBiasConfig::make_for(plan.scheme, sigma, gamma, s);
            const double analytic = analytic_evm(plan.scheme, gamma, s);
            // Same seed at every grid point: common random frames across the sweep.
            const auto mc = monte_carlo_evm(plan, clip_cfg, cfg.num_symbols, cfg.seed);
            CsvTable::Row row;
            row.add(to_string(plan.scheme)).add(gdb).add(s).add(analytic).add(mc.evm).add(mc.stderr_batch);
            table.push(row);
            if (analytic < best_a) {
                best_a = analytic;
                arg_a = s;
            }
            if (mc.evm < best_m) {
                best_m = mc.evm;
                arg_m = s;
            }
        }
        argmins << ' ' << format_number(gdb) << "dB:" << format_number(arg_a) << '/' << format_number(arg_m);
    }
    return {std::move(table), "evm-sweep: " + std::to_string(table.rows())
                                  + " rows; argmin varsigma (analytic/mc)" + argmins.str()};
}

ExperimentOutput run_evm_bound(const ExperimentConfig& cfg)
{
    const auto plan = SubcarrierPlan::make(cfg.scheme, cfg.n);
    CsvTable table({"scheme", "gamma_db", "evm_scheme", "evm_lower_bound", "mean_kt_residual"});
    double worst_gap = 0.0;
    for (double gdb : cfg.gamma_db) {
        const auto est = evm_lower_bound(plan, db_to_amplitude(gdb), cfg.num_symbols, cfg.seed);
        CsvTable::Row row;
        row.add(to_string(plan.scheme)).add(gdb).add(est.evm_scheme).add(est.evm_lower_bound).add(est.mean_kt_residual);
        table.push(row);
        worst_gap = std::max(worst_gap, est.evm_scheme - est.evm_lower_bound);
    }
    return {std::move(table), "evm-bound: " + std::to_string(table.rows())
                                  + " rows; largest scheme-minus-bound gap " + format_number(worst_gap)};
}

ExperimentOutput run_sdr(const ExperimentConfig& cfg)
{
    const auto plan = SubcarrierPlan::make(cfg.scheme, cfg.n);
    const double sigma = frame_sigma(plan, kQpskPower);
    const auto clip_cfg = ClipBiasConfig::make_for(plan.scheme, sigma, db_to_amplitude(cfg.gamma_db.at(0)),
                                                   cfg.varsigma.at(0));
    const auto prof = sdr_per_subcarrier(plan, clip_cfg);
    RealVector sdr_all(plan.n, NAN);
    for (std::size_t i = 0; i < plan.data_indices.size(); ++i) {
        sdr_all[plan.data_indices[i]] = 10.0 * std::log10(prof.sdr[i]);
    }
    CsvTable table({"k", "P_X", "P_Xbar", "P_D", "sdr_db"});
    double mean_db = 0.0;
    for (std::size_t k = 0; k < plan.n; ++k) {
        CsvTable::Row row;
        row.add(static_cast<long long>(k)).add(prof.p_x[k]).add(prof.p_xbar[k]).add(prof.p_d[k]).add(sdr_all[k]);
        table.push(row);
    }
    for (double v : prof.sdr) {
        mean_db += 10.0 * std::log10(v);
    }
    mean_db /= static_cast<double>(prof.sdr.size());
    return {std::move(table), "sdr: " + std::to_string(table.rows()) + " rows; alpha="
                                  + format_number(prof.alpha) + " mean data-bin SDR "
                                  + format_number(mean_db) + " dB"};
}

ChannelSpec make_channel(const ExperimentConfig& cfg)
{
    return cfg.ceiling_channel ? ceiling_bounce_response(cfg.delay_spread, cfg.sample_rate, cfg.n)
                               : ChannelSpec::awgn(cfg.n);
}

RealVector to_amplitudes(const std::vector<double>& db)
{
    RealVector out(db.size());
    std::transform(db.begin(), db.end(), out.begin(), db_to_amplitude);
    return out;
}

ExperimentOutput run_rate_surface(const ExperimentConfig& cfg)
{
    const auto plan = SubcarrierPlan::make(cfg.scheme, cfg.n);
    const RateSurface surface(plan, to_amplitudes(cfg.gamma_db), cfg.varsigma);
    ConstraintPair c;
    c.osnr = db_to_amplitude(cfg.eta_osnr_db.at(0));
    if (cfg.eta_dsnr_db) {
        c.dsnr = db_to_amplitude(*cfg.eta_dsnr_db);
    }
    const auto chan = make_channel(cfg);
    CsvTable table({"gamma_db", "varsigma", "rate_bits_per_subcarrier"});
    for (std::size_t gi = 0; gi < cfg.gamma_db.size(); ++gi) {
        for (std::size_t si = 0; si < cfg.varsigma.size(); ++si) {
            CsvTable::Row row;
            row.add(cfg.gamma_db[gi]).add(cfg.varsigma[si]).add(surface.rate(gi, si, c, chan));
            table.push(row);
        }
    }
    const auto best = surface.optimize(c, chan);
    return {std::move(table), "rate-surface: " + std::to_string(table.rows()) + " rows; argmax gamma_db="
                                  + format_number(amplitude_to_db(best.gamma))
                                  + " varsigma=" + format_number(best.varsigma)
                                  + " rate=" + format_number(best.rate)};
}

ExperimentOutput run_rate_optimal(const ExperimentConfig& cfg)
{
    const auto gammas = to_amplitudes(cfg.gamma_db);
    const RateSurface dco(SubcarrierPlan::make(Scheme::DCO, cfg.n), gammas,
                          cfg.scheme == Scheme::DCO ? cfg.varsigma : default_varsigma_grid(Scheme::DCO));
    const RateSurface aco(SubcarrierPlan::make(Scheme::ACO, cfg.n), gammas, {0.0});
    const auto chan = make_channel(cfg);
    CsvTable table({"eta_osnr_db", "gamma_opt_db", "varsigma_opt", "rate_dco", "rate_aco"});
    std::size_t dco_wins = 0;
    for (double eta : cfg.eta_osnr_db) {
        const auto c = ConstraintPair::from_db(eta, cfg.ratio_db);
        const auto d = dco.optimize(c, chan);
        const auto a = aco.optimize(c, chan);
        const auto& mine = cfg.scheme == Scheme::DCO ? d : a;
        CsvTable::Row row;
        row.add(eta).add(amplitude_to_db(mine.gamma)).add(mine.varsigma).add(d.rate).add(a.rate);
        table.push(row);
        dco_wins += d.rate >= a.rate ? 1 : 0;
    }
    return {std::move(table), "rate-optimal: " + std::to_string(table.rows()) + " rows; DCO >= ACO at "
                                  + std::to_string(dco_wins) + " points; optimum columns for "
                                  + std::string(to_string(cfg.scheme))};
}

ExperimentOutput run_channel(const ExperimentConfig& cfg)
{
    const auto ch = ceiling_bounce_response(cfg.delay_spread, cfg.sample_rate, cfg.n);
    CsvTable table({"k", "H_mag2"});
    for (std::size_t k = 0; k < cfg.n; ++k) {
        CsvTable::Row row;
        row.add(static_cast<long long>(k)).add(ch.h_mag2[k]);
        table.push(row);
    }
    return {std::move(table), "channel: " + std::to_string(table.rows()) + " rows; |H_N/2|^2="
                                  + format_number(ch.h_mag2[cfg.n / 2])};
}

} // namespace

std::string_view to_string(Experiment e) { return kExperimentNames[static_cast<int>(e)]; }

Experiment parse_experiment(std::string_view name)
{
    for (int i = 0; i < 7; ++i) {
        if (name == kExperimentNames[i]) {
            return static_cast<Experiment>(i);
        }
    }
    throw ConfigError("experiment", "unknown experiment '" + std::string(name) + "'");
}

void Settings::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::optional<std::string> Settings::get(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Settings Settings::parse(std::string_view text)
{
    Settings s;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        }
        s.set(trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)));
    }
    return s;
}

void Settings::merge(const Settings& other)
{
    for (const auto& [k, v] : other.values_) {
        values_[k] = v;
    }
}

std::vector<double> parse_grid(const std::string& field, const std::string& text)
{
    const auto t = trim(text);
    if (t.empty()) {
        throw ConfigError(field, "empty grid");
    }
    if (std::count(t.begin(), t.end(), ':') == 2) {
        const auto p1 = t.find(':');
        const auto p2 = t.find(':', p1 + 1);
        const double first = parse_double(field, t.substr(0, p1));
        const double step = parse_double(field, t.substr(p1 + 1, p2 - p1 - 1));
        const double last = parse_double(field, t.substr(p2 + 1));
        if (!(step > 0.0) || last < first) {
            throw ConfigError(field, "grid needs step > 0 and last >= first");
        }
        return linear_grid(first, last, step);
    }
    std::vector<double> out;
    std::istringstream in(t);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(parse_double(field, item));
    }
    if (out.empty()) {
        throw ConfigError(field, "empty grid");
    }
    return out;
}

ExperimentConfig ExperimentConfig::from_settings(const Settings& s)
{
    for (const auto& [key, value] : s.values()) {
        if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys)) {
            throw ConfigError(key, "unknown key");
        }
    }
    ExperimentConfig cfg;
    const auto exp = s.get("experiment");
    if (!exp) {
        throw ConfigError("experiment", "missing");
    }
    cfg.experiment = parse_experiment(*exp);
    if (auto v = s.get("scheme")) {
        try {
            cfg.scheme = parse_scheme(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scheme", e.what());
        }
    }
    const bool dco = cfg.scheme == Scheme::DCO;

    // Per-experiment defaults.
    switch (cfg.experiment) {
    case Experiment::DemoFrame:
        cfg.n = dco ? 18 : 32;
        cfg.gamma_db = {dco ? 3.0 : -2.0};
        cfg.varsigma = {dco ? 0.45 : 0.0};
        break;
    case Experiment::EvmSweep:
        cfg.gamma_db = dco ? linear_grid(5.0, 9.0, 1.0) : linear_grid(-4.0, 5.0, 1.0);
        cfg.varsigma = dco ? linear_grid(0.3, 0.7, 0.02) : std::vector<double>{0.0};
        break;
    case Experiment::EvmBound:
        cfg.n = 64;
        cfg.num_symbols = 100;
        cfg.gamma_db = dco ? linear_grid(0.0, 9.0, 1.0) : linear_grid(-4.0, 4.0, 1.0);
        break;
    case Experiment::Sdr:
        cfg.gamma_db = {dco ? 5.0 : -2.0};
        cfg.varsigma = {dco ? 0.5 : 0.0};
        break;
    case Experiment::RateSurface:
        cfg.gamma_db = linear_grid(-4.0, 12.0, 0.25);
        cfg.varsigma = default_varsigma_grid(cfg.scheme);
        cfg.eta_osnr_db = {20.0};
        cfg.eta_dsnr_db = 32.0;
        break;
    case Experiment::RateOptimal:
        cfg.gamma_db = linear_grid(-4.0, 12.0, 0.25);
        cfg.varsigma = default_varsigma_grid(Scheme::DCO);
        cfg.eta_osnr_db = linear_grid(0.0, 25.0, 1.0);
        cfg.ratio_db = 18.0;
        break;
    case Experiment::Channel:
        break;
    }

    if (auto v = s.get("n")) {
        cfg.n = parse_unsigned("n", *v);
    }
    if (auto v = s.get("num_symbols")) {
        cfg.num_symbols = parse_unsigned("num_symbols", *v);
        if (cfg.num_symbols == 0) {
            throw ConfigError("num_symbols", "must be >= 1");
        }
    }
    if (auto v = s.get("seed")) {
        cfg.seed = parse_unsigned("seed", *v);
    }
    if (auto v = s.get("gamma_db")) {
        cfg.gamma_db = parse_grid("gamma_db", *v);
    }
    if (auto v = s.get("varsigma")) {
        cfg.varsigma = parse_grid("varsigma", *v);
    }
    if (auto v = s.get("eta_osnr_db")) {
        cfg.eta_osnr_db = parse_grid("eta_osnr_db", *v);
    }
    if (auto v = s.get("eta_dsnr_db")) {
        if (trim(*v) == "none") {
            cfg.eta_dsnr_db.reset();
        } else {
            cfg.eta_dsnr_db = parse_double("eta_dsnr_db", *v);
        }
    }
    if (auto v = s.get("ratio_db")) {
        if (trim(*v) == "none") {
            cfg.ratio_db.reset();
        } else {
            cfg.ratio_db = parse_double("ratio_db", *v);
        }
    }
    if (auto v = s.get("channel")) {
        const auto c = trim(*v);
        if (c == "awgn") {
            cfg.ceiling_channel = false;
        } else if (c == "ceiling" || c == "ceiling-bounce") {
            cfg.ceiling_channel = true;
        } else {
            throw ConfigError("channel", "expected awgn or ceiling");
        }
    }
    if (auto v = s.get("delay_spread")) {
        cfg.delay_spread = parse_double("delay_spread", *v);
        if (!(cfg.delay_spread > 0.0)) {
            throw ConfigError("delay_spread", "must be positive");
        }
    }
    if (auto v = s.get("sample_rate")) {
        cfg.sample_rate = parse_double("sample_rate", *v);
        if (!(cfg.sample_rate > 0.0)) {
            throw ConfigError("sample_rate", "must be positive");
        }
    }
    if (auto v = s.get("out")) {
        cfg.out = trim(*v);
    }

    // Cross-field checks.
    try {
        if (cfg.experiment != Experiment::Channel) {
            (void)SubcarrierPlan::make(cfg.scheme, cfg.n);
        } else if (cfg.n < 2) {
            throw std::invalid_argument("need N >= 2");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("n", e.what());
    }
    const bool uses_varsigma = cfg.experiment == Experiment::DemoFrame || cfg.experiment == Experiment::EvmSweep
                               || cfg.experiment == Experiment::Sdr || cfg.experiment == Experiment::RateSurface
                               || cfg.experiment == Experiment::RateOptimal;
    if (uses_varsigma) {
        for (double v : cfg.varsigma) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ConfigError("varsigma", "values must lie in [0, 1]");
            }
        }
        if (cfg.scheme == Scheme::ACO && cfg.experiment != Experiment::RateOptimal
            && (cfg.varsigma.size() != 1 || cfg.varsigma[0] != 0.0)) {
            throw ConfigError("varsigma", "ACO requires varsigma = 0");
        }
        if (cfg.varsigma.empty()) {
            throw ConfigError("varsigma", "empty grid");
        }
    }
    if (cfg.experiment != Experiment::Channel && cfg.gamma_db.empty()) {
        throw ConfigError("gamma_db", "empty grid");
    }
    if ((cfg.experiment == Experiment::RateSurface || cfg.experiment == Experiment::RateOptimal)
        && cfg.eta_osnr_db.empty()) {
        throw ConfigError("eta_osnr_db", "empty grid");
    }
    return cfg;
}

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = [] {
        auto make = [](std::string name, std::string fig, std::string desc, std::string text) {
            return Preset{std::move(name), std::move(fig), std::move(desc), Settings::parse(text)};
        };
        return std::vector<Preset>{
            make("fig2-dco", "Figure 2 (DCO panel)", "DCO frame of 8 QPSK symbols, N=18, 3 dB, varsigma 0.45",
                 "experiment=demo-frame\nscheme=DCO\n"),
            make("fig2-aco", "Figure 2 (ACO panel)", "ACO frame of 8 QPSK symbols, N=32, -2 dB",
                 "experiment=demo-frame\nscheme=ACO\n"),
            make("fig3", "Figure 3", "DCO EVM vs varsigma 0.30:0.02:0.70 at 5..9 dB, N=512, 1000 symbols",
                 "experiment=evm-sweep\nscheme=DCO\n"),
            make("fig4", "Figure 4", "DCO EVM and its lower bound vs gamma, N=64, 100 symbols",
                 "experiment=evm-bound\nscheme=DCO\n"),
            make("fig5", "Figure 5", "ACO EVM and its lower bound vs gamma, N=64, 100 symbols",
                 "experiment=evm-bound\nscheme=ACO\n"),
            make("fig6", "Figure 6", "Ceiling-bounce |H_k|^2, D=10 ns, 100 MHz, N=512",
                 "experiment=channel\nn=512\n"),
            make("fig7", "Figure 7", "DCO rate surface, eta_OSNR=20 dB, eta_DSNR=32 dB, AWGN",
                 "experiment=rate-surface\nscheme=DCO\n"),
            make("fig8", "Figure 8", "ACO rate surface, eta_OSNR=20 dB, eta_DSNR=32 dB, AWGN",
                 "experiment=rate-surface\nscheme=ACO\n"),
            make("fig9", "Figure 9", "DCO optimum (gamma, varsigma) vs eta_OSNR, ratio 18 dB, AWGN",
                 "experiment=rate-optimal\nscheme=DCO\nratio_db=18\n"),
            make("fig10", "Figure 10", "ACO optimum gamma vs eta_OSNR, ratio 18 dB, AWGN",
                 "experiment=rate-optimal\nscheme=ACO\nratio_db=18\n"),
            make("fig11", "Figure 11", "Optimal rates vs eta_OSNR, ratio 6 dB, AWGN",
                 "experiment=rate-optimal\nscheme=DCO\nratio_db=6\n"),
            make("fig12", "Figure 12", "Optimal rates vs eta_OSNR, ratio 12 dB, AWGN",
                 "experiment=rate-optimal\nscheme=DCO\nratio_db=12\n"),
            make("fig13", "Figure 13", "Optimal rates vs eta_OSNR, no DSNR constraint, AWGN",
                 "experiment=rate-optimal\nscheme=DCO\nratio_db=none\n"),
        };
    }();
    return all;
}

const Preset& find_preset(const std::string& name)
{
    for (const auto& p : presets()) {
        if (p.name == name) {
            return p;
        }
    }
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg)
{
    switch (cfg.experiment) {
    case Experiment::DemoFrame:
        return run_demo_frame(cfg);
    case Experiment::EvmSweep:
        return run_evm_sweep(cfg);
    case Experiment::EvmBound:
        return run_evm_bound(cfg);
    case Experiment::Sdr:
        return run_sdr(cfg);
    case Experiment::RateSurface:
        return run_rate_surface(cfg);
    case Experiment::RateOptimal:
        return run_rate_optimal(cfg);
    case Experiment::Channel:
        return run_channel(cfg);
    }
    throw ConfigError("experiment", "unhandled experiment");
}

} // namespace clipofdm
