#include "clipofdm/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clipofdm {

std::string_view to_string(Scheme s) { return s == Scheme::DCO ? "DCO" : "ACO"; }

Scheme parse_scheme(std::string_view name)
{
    if (name == "DCO" || name == "dco") {
        return Scheme::DCO;
    }
    if (name == "ACO" || name == "aco") {
        return Scheme::ACO;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

SubcarrierPlan SubcarrierPlan::make(Scheme scheme, std::size_t n)
{
    SubcarrierPlan plan{scheme, n, {}, scheme == Scheme::DCO ? 1.0 : 0.5};
    if (scheme == Scheme::DCO) {
        if (n < 4 || n % 2 != 0) {
            throw std::invalid_argument("DCO plan needs an even N >= 4");
        }
        for (std::size_t k = 1; k < n; ++k) {
            if (k != n / 2) {
                plan.data_indices.push_back(k);
            }
        }
    } else {
        if (n < 4 || n % 4 != 0) {
            throw std::invalid_argument("ACO plan needs N divisible by 4");
        }
        for (std::size_t k = 1; k < n; k += 2) {
            plan.data_indices.push_back(k);
        }
    }
    return plan;
}

std::vector<std::size_t> SubcarrierPlan::lower_half_indices() const
{
    std::vector<std::size_t> out;
    for (auto k : data_indices) {
        if (k < n / 2) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<bool> SubcarrierPlan::data_mask() const
{
    std::vector<bool> mask(n, false);
    for (auto k : data_indices) {
        mask[k] = true;
    }
    return mask;
}

ClipBiasConfig ClipBiasConfig::make(double sigma, double gamma, double varsigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be positive and finite");
    }
    if (!(gamma >= 0.0) || std::isnan(gamma)) {
        throw std::invalid_argument("gamma must be >= 0");
    }
    if (!(varsigma >= 0.0 && varsigma <= 1.0)) {
        throw std::invalid_argument("varsigma must lie in [0, 1]");
    }
    return ClipBiasConfig{sigma, gamma, varsigma};
}

ClipBiasConfig ClipBiasConfig::make_for(Scheme scheme, double sigma, double gamma, double varsigma)
{
    if (scheme == Scheme::ACO && varsigma != 0.0) {
        throw std::invalid_argument("ACO requires varsigma = 0");
    }
    return make(sigma, gamma, varsigma);
}

double frame_sigma(const SubcarrierPlan& plan, double symbol_power)
{
    return std::sqrt(symbol_power * static_cast<double>(plan.data_indices.size())
                     / static_cast<double>(plan.n));
}

SymbolFrame map_symbols(const SubcarrierPlan& plan, std::span<const Complex> symbols)
{
    const auto lower = plan.lower_half_indices();
    if (symbols.size() != lower.size()) {
        throw std::invalid_argument("map_symbols: expected " + std::to_string(lower.size())
                                    + " symbols, got " + std::to_string(symbols.size()));
    }
    SymbolFrame frame;
    frame.spectrum.assign(plan.n, Complex{});
    for (std::size_t i = 0; i < lower.size(); ++i) {
        const auto s = symbols[i];
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
            throw std::invalid_argument("map_symbols: non-finite symbol");
        }
        frame.spectrum[lower[i]] = s;
        frame.spectrum[plan.n - lower[i]] = std::conj(s);
    }
    frame.time = idft_real(frame.spectrum);
    return frame;
}

SymbolFrame random_qpsk_frame(const SubcarrierPlan& plan, std::mt19937_64& rng)
{
    const auto count = plan.num_symbols();
    ComplexVector symbols(count);
    std::uint64_t bits = 0;
    int left = 0;
    for (auto& s : symbols) {
        if (left < 2) {
            bits = rng();
            left = 64;
        }
        const double re = (bits & 1U) ? 1.0 : -1.0;
        const double im = (bits & 2U) ? 1.0 : -1.0;
        bits >>= 2;
        left -= 2;
        s = Complex(re, im);
    }
    return map_symbols(plan, symbols);
}

RealVector clip(std::span<const double> x, const ClipBiasConfig& cfg)
{
    const double lo = cfg.lower();
    const double hi = cfg.upper();
    RealVector out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return std::clamp(v, lo, hi); });
    return out;
}

RealVector clip_and_bias(std::span<const double> x, const ClipBiasConfig& cfg)
{
    auto out = clip(x, cfg);
    const double b = cfg.bias();
    for (auto& v : out) {
        v += b;
    }
    return out;
}

bool has_negative_half_symmetry(std::span<const double> x, double tol)
{
    if (x.size() % 2 != 0) {
        return false;
    }
    const auto half = x.size() / 2;
    for (std::size_t n = 0; n < half; ++n) {
        if (std::abs(x[n + half] + x[n]) > tol) {
            return false;
        }
    }
    return true;
}

ComplexVector half_clip_spectrum_check(const SymbolFrame& frame)
{
    double scale = 1.0;
    for (double v : frame.time) {
        scale = std::max(scale, std::abs(v));
    }
    if (!has_negative_half_symmetry(frame.time, 1e-9 * scale)) {
        throw std::invalid_argument("half_clip_spectrum_check: frame lacks negative half symmetry");
    }
    RealVector z(frame.time.size());
    std::transform(frame.time.begin(), frame.time.end(), z.begin(),
                   [](double v) { return v > 0.0 ? v : 0.0; });
    return dft_real(z);
}

bool is_hermitian(std::span<const Complex> spectrum, double tol)
{
    const auto n = spectrum.size();
    if (n == 0) {
        return false;
    }
    if (std::abs(spectrum[0].imag()) > tol) {
        return false;
    }
    if (n % 2 == 0 && std::abs(spectrum[n / 2].imag()) > tol) {
        return false;
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(spectrum[k] - std::conj(spectrum[n - k])) > tol) {
            return false;
        }
    }
    return true;
}

} // namespace clipofdm
