#include "clipofdm/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace clipofdm {

namespace {

// O_y / sigma.
double average_power_ratio(double gamma, double varsigma)
{
    const double a = 2.0 * gamma * varsigma;
    const double b = 2.0 * gamma * (1.0 - varsigma);
    return gauss_pdf(a) - gauss_pdf(b) - a * gauss_cdf(-a) + b * gauss_cdf(-b) + a;
}

} // namespace

double average_optical_power(const ClipBiasConfig& cfg)
{
    return cfg.sigma * average_power_ratio(cfg.gamma, cfg.varsigma);
}

PowerMetrics power_metrics(const ClipBiasConfig& cfg)
{
    return {average_optical_power(cfg), cfg.dynamic_range()};
}

ConstraintPair ConstraintPair::from_db(double osnr_db, std::optional<double> ratio_db)
{
    ConstraintPair c;
    c.osnr = db_to_amplitude(osnr_db);
    if (ratio_db) {
        c.dsnr = db_to_amplitude(osnr_db + *ratio_db);
    }
    return c;
}

ConstraintPair ConstraintPair::dsnr_only_db(double dsnr_db)
{
    ConstraintPair c;
    c.dsnr = db_to_amplitude(dsnr_db);
    return c;
}

double max_sigma_over_noise(double gamma, double varsigma, const ConstraintPair& c)
{
    if (!c.osnr && !c.dsnr) {
        throw std::invalid_argument("max_sigma_over_noise: no constraint given");
    }
    double best = std::numeric_limits<double>::infinity();
    if (c.osnr) {
        const double o = average_power_ratio(gamma, varsigma);
        if (o > 0.0) {
            best = std::min(best, *c.osnr / o);
        }
    }
    if (c.dsnr && gamma > 0.0) {
        best = std::min(best, *c.dsnr / (2.0 * gamma));
    }
    return best;
}

ChannelSpec ChannelSpec::awgn(std::size_t n) { return {ChannelKind::AWGN, 0.0, 0.0, RealVector(n, 1.0)}; }

RealVector ceiling_bounce_taps(double delay_spread, double sample_rate)
{
    if (!(delay_spread > 0.0) || !(sample_rate > 0.0)) {
        throw std::invalid_argument("ceiling_bounce: delay spread and sample rate must be positive");
    }
    const double a = 12.0 * std::sqrt(11.0 / 23.0) * delay_spread;
    const double ts = 1.0 / sample_rate;
    auto tap = [&](std::size_t n) {
        const double t = static_cast<double>(n) * ts;
        return 6.0 * std::pow(a, 6) / std::pow(t + a, 7);
    };
    // Tail of sum_{n >= M} h[n]^2 is below the integral from (M - 1) Ts, which
    // is 36 a^12 / (13 ((M - 1) Ts + a)^13) / Ts. Sum until that is negligible.
    auto tail_bound = [&](std::size_t m) {
        const double t = (m == 0 ? 0.0 : static_cast<double>(m - 1) * ts);
        return 36.0 * std::pow(a, 12) / (13.0 * std::pow(t + a, 13)) / ts;
    };
    RealVector taps;
    double energy = 0.0;
    for (std::size_t n = 0;; ++n) {
        const double h = tap(n);
        taps.push_back(h);
        energy += h * h;
        if (n > 0 && tail_bound(n + 1) < 1e-12 * energy) {
            break;
        }
    }
    double cum = 0.0;
    std::size_t keep = 0;
    while (keep < taps.size()) {
        cum += taps[keep] * taps[keep];
        ++keep;
        if (cum >= 0.9999 * energy) {
            break;
        }
    }
    taps.resize(keep);
    return taps;
}

ChannelSpec ceiling_bounce_response(double delay_spread, double sample_rate, std::size_t n)
{
    const auto taps = ceiling_bounce_taps(delay_spread, sample_rate);
    RealVector folded(n, 0.0);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        folded[i % n] += taps[i];
    }
    const auto spec = dft_real(folded);
    const double dc = std::norm(spec[0]);
    ChannelSpec ch{ChannelKind::CeilingBounce, delay_spread, sample_rate, RealVector(n)};
    for (std::size_t k = 0; k < n; ++k) {
        ch.h_mag2[k] = std::norm(spec[k]) / dc;
    }
    return ch;
}

RatePoint sndr_profile(const SubcarrierPlan& plan, const SpectralProfile& prof, double gamma,
                       double varsigma, const ConstraintPair& constraints, const ChannelSpec& chan)
{
    if (chan.h_mag2.size() != plan.n) {
        throw std::invalid_argument("sndr_profile: channel length does not match N");
    }
    RatePoint pt{gamma, varsigma, RealVector(plan.data_indices.size(), 0.0), 0.0};
    const double a2 = prof.alpha * prof.alpha;
    const double snr_scale = max_sigma_over_noise(gamma, varsigma, constraints);
    if (a2 == 0.0 || !std::isfinite(snr_scale)) {
        return pt;
    }
    const double kd = static_cast<double>(plan.data_indices.size());
    const double noise = kd / (static_cast<double>(plan.n) * a2 * snr_scale * snr_scale);
    double sum = 0.0;
    for (std::size_t i = 0; i < plan.data_indices.size(); ++i) {
        const double h2 = chan.h_mag2[plan.data_indices[i]];
        const double inv = 1.0 / prof.sdr[i] + noise / h2;
        pt.sndr[i] = 1.0 / inv;
        sum += std::log2(1.0 + pt.sndr[i]);
    }
    pt.rate = sum / (2.0 * static_cast<double>(plan.n));
    return pt;
}

RatePoint sndr_profile(const SubcarrierPlan& plan, double gamma, double varsigma,
                       const ConstraintPair& constraints, const ChannelSpec& chan)
{
    if (gamma == 0.0) {
        return {gamma, varsigma, RealVector(plan.data_indices.size(), 0.0), 0.0};
    }
    const auto cfg = ClipBiasConfig::make_for(plan.scheme, 1.0, gamma, varsigma);
    return sndr_profile(plan, sdr_per_subcarrier(plan, cfg), gamma, varsigma, constraints, chan);
}

RateSurface::RateSurface(SubcarrierPlan plan, RealVector gammas, RealVector varsigmas)
    : plan_(std::move(plan)), gammas_(std::move(gammas)), varsigmas_(std::move(varsigmas))
{
    if (gammas_.empty() || varsigmas_.empty()) {
        throw std::invalid_argument("RateSurface: empty grid");
    }
    if (plan_.scheme == Scheme::ACO && (varsigmas_.size() != 1 || varsigmas_[0] != 0.0)) {
        throw std::invalid_argument("RateSurface: ACO requires the varsigma grid {0}");
    }
    profiles_.reserve(gammas_.size() * varsigmas_.size());
    for (double g : gammas_) {
        for (double s : varsigmas_) {
            const auto cfg = ClipBiasConfig::make_for(plan_.scheme, 1.0, g, s);
            profiles_.push_back(sdr_per_subcarrier(plan_, cfg));
        }
    }
}

double RateSurface::rate(std::size_t gi, std::size_t si, const ConstraintPair& c,
                         const ChannelSpec& chan) const
{
    const auto& prof = profiles_[gi * varsigmas_.size() + si];
    return sndr_profile(plan_, prof, gammas_[gi], varsigmas_[si], c, chan).rate;
}

OperatingPoint RateSurface::optimize(const ConstraintPair& c, const ChannelSpec& chan) const
{
    OperatingPoint best{gammas_[0], varsigmas_[0], -1.0};
    // gamma-major scan with strict improvement keeps the smaller gamma, then the
    // smaller varsigma, on ties (grids are ascending).
    for (std::size_t gi = 0; gi < gammas_.size(); ++gi) {
        for (std::size_t si = 0; si < varsigmas_.size(); ++si) {
            const double r = rate(gi, si, c, chan);
            if (r > best.rate) {
                best = {gammas_[gi], varsigmas_[si], r};
            }
        }
    }
    return best;
}

OperatingPoint optimize_operating_point(const SubcarrierPlan& plan, const ConstraintPair& constraints,
                                        const ChannelSpec& chan, const RealVector& gamma_grid,
                                        const RealVector& varsigma_grid)
{
    auto gammas = gamma_grid;
    auto varsigmas = varsigma_grid;
    std::sort(gammas.begin(), gammas.end());
    std::sort(varsigmas.begin(), varsigmas.end());
    return RateSurface(plan, gammas, varsigmas).optimize(constraints, chan);
}

RealVector linear_grid(double first, double last, double step)
{
    if (!(step > 0.0) || last < first) {
        throw std::invalid_argument("linear_grid: need step > 0 and last >= first");
    }
    const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
    RealVector g(count);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = first + static_cast<double>(i) * step;
        // Snap to the nearest multiple of 1e-12 so decimal grids print cleanly.
        g[i] = std::round(g[i] * 1e12) / 1e12;
    }
    return g;
}

RealVector default_gamma_grid()
{
    auto db = linear_grid(-4.0, 12.0, 0.25);
    for (auto& v : db) {
        v = db_to_amplitude(v);
    }
    return db;
}

RealVector default_varsigma_grid(Scheme scheme)
{
    if (scheme == Scheme::ACO) {
        return {0.0};
    }
    return linear_grid(0.0, 0.7, 0.01);
}

} // namespace clipofdm
