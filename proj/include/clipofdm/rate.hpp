#pragma once

#include "clipofdm/bussgang.hpp"

#include <optional>

namespace clipofdm {

struct PowerMetrics {
    double average;  ///< O_y
    double dynamic;  ///< G_y = c_u - c_l
};

/// Mean of the LED drive signal for a Gaussian input.
double average_optical_power(const ClipBiasConfig& cfg);
PowerMetrics power_metrics(const ClipBiasConfig& cfg);

/// Noise-normalized optical power limits (linear amplitude ratios). At least
/// one must be present.
struct ConstraintPair {
    std::optional<double> osnr;  ///< P_A / sigma_w
    std::optional<double> dsnr;  ///< (P_H - P_L) / sigma_w

    /// eta_OSNR in dB, with DSNR set `ratio_db` above it (nullopt: no DSNR limit).
    static ConstraintPair from_db(double osnr_db, std::optional<double> ratio_db);
    static ConstraintPair dsnr_only_db(double dsnr_db);
};

/// Largest sigma / sigma_w meeting every present constraint. +inf when no
/// constraint binds (gamma = 0).
double max_sigma_over_noise(double gamma, double varsigma, const ConstraintPair& c);

enum class ChannelKind { AWGN, CeilingBounce };

struct ChannelSpec {
    ChannelKind kind;
    double delay_spread;  ///< rms delay D, seconds (ceiling bounce only)
    double sample_rate;   ///< Hz
    RealVector h_mag2;    ///< |H_k|^2 normalized to |H_0| = 1

    static ChannelSpec awgn(std::size_t n);
};

/// Sampled ceiling-bounce impulse response, truncated at 99.99% of its energy,
/// transformed with an N-point DFT and normalized to unit DC gain.
ChannelSpec ceiling_bounce_response(double delay_spread, double sample_rate, std::size_t n);

/// Taps of the sampled ceiling-bounce response kept by the truncation rule.
RealVector ceiling_bounce_taps(double delay_spread, double sample_rate);

struct RatePoint {
    double gamma;
    double varsigma;
    RealVector sndr;  ///< over plan.data_indices
    double rate;      ///< bits / subcarrier
};

RatePoint sndr_profile(const SubcarrierPlan& plan, double gamma, double varsigma,
                       const ConstraintPair& constraints, const ChannelSpec& chan);

/// Same, reusing a spectral profile computed for (gamma, varsigma).
RatePoint sndr_profile(const SubcarrierPlan& plan, const SpectralProfile& prof, double gamma,
                       double varsigma, const ConstraintPair& constraints, const ChannelSpec& chan);

struct OperatingPoint {
    double gamma;
    double varsigma;
    double rate;
};

/// Caches spectral profiles over a (gamma, varsigma) grid so that sweeps over
/// constraints only redo the cheap SNDR step.
class RateSurface {
public:
    RateSurface(SubcarrierPlan plan, RealVector gammas, RealVector varsigmas);

    const SubcarrierPlan& plan() const { return plan_; }
    const RealVector& gammas() const { return gammas_; }
    const RealVector& varsigmas() const { return varsigmas_; }

    double rate(std::size_t gi, std::size_t si, const ConstraintPair& c, const ChannelSpec& chan) const;

    /// Exhaustive argmax; ties go to the smaller gamma, then the smaller varsigma.
    OperatingPoint optimize(const ConstraintPair& c, const ChannelSpec& chan) const;

private:
    SubcarrierPlan plan_;
    RealVector gammas_;
    RealVector varsigmas_;
    std::vector<SpectralProfile> profiles_;  // row-major in (gamma, varsigma)
};

OperatingPoint optimize_operating_point(const SubcarrierPlan& plan, const ConstraintPair& constraints,
                                        const ChannelSpec& chan, const RealVector& gamma_grid,
                                        const RealVector& varsigma_grid);

/// Default grids: gamma from -4 to 12 dB in 0.25 dB steps; varsigma 0..0.7 in 0.01
/// steps for DCO and {0} for ACO.
RealVector default_gamma_grid();
RealVector default_varsigma_grid(Scheme scheme);

/// Evenly spaced values first, first+step, ... up to last (inclusive), built from
/// integer counts so that e.g. 0.5 is hit exactly.
RealVector linear_grid(double first, double last, double step);

} // namespace clipofdm
