#pragma once

#include "clipofdm/numerics.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace clipofdm {

enum class Scheme { DCO, ACO };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

/// Which subcarriers carry data for a scheme and DFT size.
///
/// DCO: every bin except 0 and N/2. ACO: odd bins only, N divisible by 4.
/// The reference scale is the factor the receiver sees on a data bin after
/// clipping with no distortion (1 for DCO, 1/2 for ACO).
struct SubcarrierPlan {
    Scheme scheme;
    std::size_t n;
    std::vector<std::size_t> data_indices;
    double reference_scale;

    static SubcarrierPlan make(Scheme scheme, std::size_t n);

    /// Data bins in the lower half (1 <= k < N/2); each carries one input symbol.
    std::vector<std::size_t> lower_half_indices() const;
    std::size_t num_symbols() const { return data_indices.size() / 2; }
    /// 0/1 mask over all N bins.
    std::vector<bool> data_mask() const;
};

/// Clipping window parameters. gamma is half the window width over sigma; varsigma
/// places the DC bias inside the window.
struct ClipBiasConfig {
    double sigma;
    double gamma;
    double varsigma;

    /// Validates ranges and throws std::invalid_argument on failure.
    static ClipBiasConfig make(double sigma, double gamma, double varsigma);
    static ClipBiasConfig make_for(Scheme scheme, double sigma, double gamma, double varsigma);

    double upper() const { return 2.0 * sigma * gamma * (1.0 - varsigma); }
    double lower() const { return -2.0 * sigma * gamma * varsigma; }
    double bias() const { return -lower(); }
    double dynamic_range() const { return upper() - lower(); }
};

struct SymbolFrame {
    ComplexVector spectrum;
    RealVector time;
};

/// Time-domain std-dev of a frame ensemble whose data bins each carry
/// `symbol_power` = E|X_k|^2 (Parseval over N bins).
double frame_sigma(const SubcarrierPlan& plan, double symbol_power);

/// QPSK points {+-1 +- j}; E|X|^2 = 2.
inline constexpr double kQpskPower = 2.0;

/// Places symbols on the lower-half data bins and mirrors them with conjugates.
SymbolFrame map_symbols(const SubcarrierPlan& plan, std::span<const Complex> symbols);

/// Random QPSK frame drawn from `rng`.
SymbolFrame random_qpsk_frame(const SubcarrierPlan& plan, std::mt19937_64& rng);

/// Clip to [c_l, c_u] without adding the bias.
RealVector clip(std::span<const double> x, const ClipBiasConfig& cfg);

/// LED drive signal y = clip(x) - c_l, confined to [0, c_u - c_l].
RealVector clip_and_bias(std::span<const double> x, const ClipBiasConfig& cfg);

bool has_negative_half_symmetry(std::span<const double> x, double tol);

/// DFT of the signal with negative samples removed. On odd bins this is exactly
/// half the input spectrum when the input has negative half symmetry.
ComplexVector half_clip_spectrum_check(const SymbolFrame& frame);

bool is_hermitian(std::span<const Complex> spectrum, double tol);

} // namespace clipofdm
