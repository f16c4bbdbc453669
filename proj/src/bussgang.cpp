#include "clipofdm/bussgang.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace clipofdm {

namespace {

void check_ratios(double gamma, double varsigma)
{
    if (!(gamma >= 0.0) || std::isinf(gamma)) {
        throw std::invalid_argument("gamma must be finite and >= 0");
    }
    if (!(varsigma >= 0.0 && varsigma <= 1.0)) {
        throw std::invalid_argument("varsigma must lie in [0, 1]");
    }
}

// Window edges in units of sigma.
struct Edges {
    double lo;
    double hi;
};

Edges edges(double gamma, double varsigma)
{
    return {-2.0 * gamma * varsigma, 2.0 * gamma * (1.0 - varsigma)};
}

// Integral of (p0 + p1 t + p2 t^2) phi(t) over [lo, hi].
double gauss_poly_integral(double lo, double hi, double p0, double p1, double p2)
{
    auto pdf_t = [](double t) { return std::isinf(t) ? 0.0 : t * gauss_pdf(t); };
    const double mass = gauss_cdf(hi) - gauss_cdf(lo);
    const double first = gauss_pdf(lo) - gauss_pdf(hi);
    const double second = mass + pdf_t(lo) - pdf_t(hi);
    return p0 * mass + p1 * first + p2 * second;
}

// Piecewise-linear clip(s t, lo, hi) with s = +-1, as c + d t on a given point.
struct Linear {
    double c;
    double d;
};

Linear clip_piece(double t, double sign, double lo, double hi)
{
    const double v = sign * t;
    if (v < lo) {
        return {lo, 0.0};
    }
    if (v > hi) {
        return {hi, 0.0};
    }
    return {0.0, sign};
}

// E[clip(T) clip(s T)] in sigma^2 units, by exact integration over the
// breakpoints of both factors.
double clipped_product_moment(double gamma, double varsigma, double sign)
{
    const auto e = edges(gamma, varsigma);
    std::array<double, 6> cuts{-INFINITY, e.lo, e.hi, sign * e.lo, sign * e.hi, INFINITY};
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (!(b > a)) {
            continue;
        }
        double probe;
        if (std::isinf(a)) {
            probe = b - 1.0;
        } else if (std::isinf(b)) {
            probe = a + 1.0;
        } else {
            probe = 0.5 * (a + b);
        }
        const auto f = clip_piece(probe, 1.0, e.lo, e.hi);
        const auto g = clip_piece(probe, sign, e.lo, e.hi);
        total += gauss_poly_integral(a, b, f.c * g.c, f.c * g.d + f.d * g.c, f.d * g.d);
    }
    return total;
}

} // namespace

double alpha(double gamma, double varsigma)
{
    check_ratios(gamma, varsigma);
    const auto e = edges(gamma, varsigma);
    return gauss_cdf(e.hi) - gauss_cdf(e.lo);
}

double clipped_mean(double gamma, double varsigma, double sigma)
{
    check_ratios(gamma, varsigma);
    const double a = 2.0 * gamma * varsigma;
    const double b = 2.0 * gamma * (1.0 - varsigma);
    return sigma * (gauss_pdf(a) - gauss_pdf(b) - a * gauss_cdf(-a) + b * gauss_cdf(-b));
}

double clipped_mean_square(double gamma, double varsigma, double sigma)
{
    check_ratios(gamma, varsigma);
    const auto e = edges(gamma, varsigma);
    const double inner = gauss_poly_integral(e.lo, e.hi, 0.0, 0.0, 1.0);
    const double tails = e.hi * e.hi * gauss_cdf(-e.hi) + e.lo * e.lo * gauss_cdf(e.lo);
    return sigma * sigma * (inner + tails);
}

double clipped_antipodal_correlation(double gamma, double varsigma, double sigma)
{
    check_ratios(gamma, varsigma);
    return sigma * sigma * clipped_product_moment(gamma, varsigma, -1.0);
}

RealVector bussgang_coeffs(double gamma, double varsigma, double sigma, int order)
{
    check_ratios(gamma, varsigma);
    if (order < 2) {
        throw std::invalid_argument("bussgang_coeffs: order must be >= 2");
    }
    if (order > 170) {
        throw std::invalid_argument("bussgang_coeffs: order above 170 overflows; use make_bussgang_model");
    }
    const auto e = edges(gamma, varsigma);
    RealVector b(static_cast<std::size_t>(order) + 1);
    b[0] = clipped_mean(gamma, varsigma, sigma);
    b[1] = sigma * alpha(gamma, varsigma);
    const double pa = gauss_pdf(e.lo);
    const double pb = gauss_pdf(e.hi);
    for (int l = 2; l <= order; ++l) {
        b[l] = sigma * (pa * hermite_prob(l - 2, e.lo) - pb * hermite_prob(l - 2, e.hi));
    }
    return b;
}

BussgangModel make_bussgang_model(double gamma, double varsigma, double sigma, const SeriesOptions& opts)
{
    check_ratios(gamma, varsigma);
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("make_bussgang_model: sigma must be positive");
    }
    const auto e = edges(gamma, varsigma);
    BussgangModel m{gamma, varsigma, sigma, alpha(gamma, varsigma), {}, 0.0, 0.0};
    m.mean_square = clipped_mean_square(gamma, varsigma, sigma);

    const double s2 = sigma * sigma;
    const double b0 = clipped_mean(gamma, varsigma, sigma);
    m.weights.push_back(b0 * b0);
    m.weights.push_back(s2 * m.alpha * m.alpha);
    double partial = m.weights[0] + m.weights[1];

    // b_l^2 / l! = sigma^2 (phi(a) h_{l-2}(a) - phi(b) h_{l-2}(b))^2 / (l (l-1)),
    // with h_k = He_k / sqrt(k!). Endpoints whose density underflows drop out.
    const double pa = gauss_pdf(e.lo);
    const double pb = gauss_pdf(e.hi);
    double ha_prev = 0.0, ha = 1.0;
    double hb_prev = 0.0, hb = 1.0;
    const double tol = opts.closure_tolerance * s2;
    for (int k = 0;; ++k) {
        const int l = k + 2;
        const double term_a = pa > 0.0 ? pa * ha : 0.0;
        const double term_b = pb > 0.0 ? pb * hb : 0.0;
        const double diff = term_a - term_b;
        const double w = s2 * diff * diff / (static_cast<double>(l) * (l - 1));
        m.weights.push_back(w);
        partial += w;
        if (l >= opts.min_order && m.mean_square - partial < tol) {
            break;
        }
        if (l >= opts.max_order) {
            throw std::runtime_error("make_bussgang_model: closure residual "
                                     + std::to_string(m.mean_square - partial)
                                     + " above tolerance at maximum order");
        }
        const double sk = std::sqrt(static_cast<double>(k));
        const double sk1 = std::sqrt(static_cast<double>(k + 1));
        const double na = (e.lo * ha - sk * ha_prev) / sk1;
        const double nb = (e.hi * hb - sk * hb_prev) / sk1;
        ha_prev = ha;
        ha = na;
        hb_prev = hb;
        hb = nb;
    }
    m.closure_residual = std::max(0.0, m.mean_square - partial);
    return m;
}

Autocorrelation clipped_autocorrelation(std::span<const double> r_xx, const BussgangModel& model,
                                        const SeriesOptions& opts)
{
    const double s2 = model.sigma * model.sigma;
    Autocorrelation out{RealVector(r_xx.size()), 0.0};
    std::map<double, double> memo;
    for (std::size_t m = 0; m < r_xx.size(); ++m) {
        const double r = r_xx[m] / s2;
        if (std::abs(r) > 1.0 + 1e-9) {
            throw std::invalid_argument("clipped_autocorrelation: |R_xx[m]| exceeds R_xx[0]");
        }
        if (auto it = memo.find(r); it != memo.end()) {
            out.values[m] = it->second;
            continue;
        }
        double value;
        if (std::abs(r) >= 1.0 - 1e-12) {
            value = r > 0.0 ? model.mean_square
                            : clipped_antipodal_correlation(model.gamma, model.varsigma, model.sigma);
        } else {
            value = 0.0;
            double power = 1.0;
            for (double w : model.weights) {
                value += w * power;
                power *= r;
                if (std::abs(power) < 1e-300) {
                    break;
                }
            }
            const double tail = std::pow(std::abs(r), model.order() + 1) * model.closure_residual;
            out.tail_bound = std::max(out.tail_bound, tail);
        }
        memo.emplace(r, value);
        out.values[m] = value;
    }
    if (out.tail_bound > opts.tail_tolerance * s2) {
        throw std::runtime_error("clipped_autocorrelation: truncation tail "
                                 + std::to_string(out.tail_bound) + " above tolerance");
    }
    return out;
}

RealVector flat_input_psd(const SubcarrierPlan& plan, double sigma)
{
    RealVector p(plan.n, 0.0);
    const double level = static_cast<double>(plan.n) * sigma * sigma
                         / static_cast<double>(plan.data_indices.size());
    for (auto k : plan.data_indices) {
        p[k] = level;
    }
    return p;
}

RealVector autocorrelation_from_psd(std::span<const double> psd)
{
    const ComplexVector spec(psd.begin(), psd.end());
    const auto t = idft(spec);
    const double scale = 1.0 / std::sqrt(static_cast<double>(psd.size()));
    RealVector r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        r[i] = t[i].real() * scale;
    }
    return r;
}

RealVector psd_from_autocorrelation(std::span<const double> r)
{
    const auto f = dft_real(r);
    const double scale = std::sqrt(static_cast<double>(r.size()));
    RealVector p(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        p[i] = f[i].real() * scale;
    }
    return p;
}

SpectralProfile sdr_per_subcarrier(const SubcarrierPlan& plan, const ClipBiasConfig& cfg,
                                   const SeriesOptions& opts)
{
    if (plan.scheme == Scheme::ACO && cfg.varsigma != 0.0) {
        throw std::invalid_argument("sdr_per_subcarrier: ACO requires varsigma = 0");
    }
    const auto model = make_bussgang_model(cfg.gamma, cfg.varsigma, cfg.sigma, opts);
    SpectralProfile prof;
    prof.alpha = model.alpha;
    prof.order = model.order();
    prof.p_x = flat_input_psd(plan, cfg.sigma);
    const auto r_xx = autocorrelation_from_psd(prof.p_x);
    const auto r_out = clipped_autocorrelation(r_xx, model, opts);
    prof.tail_bound = r_out.tail_bound;
    prof.p_xbar = psd_from_autocorrelation(r_out.values);

    const double a2 = model.alpha * model.alpha;
    const double tol = 1e-9 * static_cast<double>(plan.n) * cfg.sigma * cfg.sigma;
    prof.p_d.resize(plan.n);
    for (std::size_t k = 0; k < plan.n; ++k) {
        double d = prof.p_xbar[k] - a2 * prof.p_x[k];
        if (d < -tol) {
            throw std::runtime_error("sdr_per_subcarrier: negative distortion power on bin "
                                     + std::to_string(k) + "; series order too small");
        }
        prof.p_d[k] = std::max(d, 0.0);
    }
    prof.sdr.reserve(plan.data_indices.size());
    for (auto k : plan.data_indices) {
        const double signal = a2 * prof.p_x[k];
        prof.sdr.push_back(prof.p_d[k] > 0.0 ? signal / prof.p_d[k]
                                             : std::numeric_limits<double>::infinity());
    }
    return prof;
}

} // namespace clipofdm
