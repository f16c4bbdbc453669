#pragma once

#include "clipofdm/ofdm.hpp"

namespace clipofdm {

/// Bussgang gain of the clipper, E[clip(x) x] / sigma^2.
double alpha(double gamma, double varsigma);

/// Raw series coefficients b_0..b_order (units of sigma). Orders above 170
/// overflow in double precision and are rejected; use BussgangModel instead.
RealVector bussgang_coeffs(double gamma, double varsigma, double sigma, int order);

/// E[clip(x)] and E[clip(x)^2] for x ~ N(0, sigma^2).
double clipped_mean(double gamma, double varsigma, double sigma);
double clipped_mean_square(double gamma, double varsigma, double sigma);
/// E[clip(x) clip(-x)]: the output correlation at input correlation -1.
double clipped_antipodal_correlation(double gamma, double varsigma, double sigma);

/// Truncated output-correlation series. weights[l] = b_l^2 / l!, so the output
/// autocorrelation at input correlation coefficient r is sum_l weights[l] r^l.
struct BussgangModel {
    double gamma;
    double varsigma;
    double sigma;
    double alpha;
    RealVector weights;
    double mean_square;       ///< E[clip(x)^2], the series limit at r = 1
    double closure_residual;  ///< mean_square - sum(weights) >= 0

    int order() const { return static_cast<int>(weights.size()) - 1; }
};

struct SeriesOptions {
    int min_order = 40;
    int max_order = 1 << 22;
    double closure_tolerance = 1e-8;  // relative to sigma^2
    double tail_tolerance = 1e-10;    // relative to sigma^2
};

/// Builds the series, extending the order past min_order until the closure
/// residual drops below tolerance. Throws std::runtime_error at max_order.
BussgangModel make_bussgang_model(double gamma, double varsigma, double sigma,
                                  const SeriesOptions& opts = {});

struct Autocorrelation {
    RealVector values;
    double tail_bound;  ///< worst bound on the neglected series terms
};

/// Output autocorrelation from the input autocorrelation. Lags with |r| = 1
/// take the closed-form endpoint values. Throws when |R_xx[m]| > sigma^2 or
/// when a truncation tail exceeds the tolerance.
Autocorrelation clipped_autocorrelation(std::span<const double> r_xx, const BussgangModel& model,
                                        const SeriesOptions& opts = {});

/// Second-order description of the clipper output per subcarrier.
struct SpectralProfile {
    double alpha;
    RealVector p_x;     ///< E|X_k|^2, all N bins
    RealVector p_xbar;  ///< E|Xbar_k|^2, all N bins
    RealVector p_d;     ///< distortion power, all N bins
    RealVector sdr;     ///< linear SDR on plan.data_indices, same order
    double tail_bound;
    int order;
};

/// Equal-power input PSD over the data bins: N sigma^2 / |K_d|.
RealVector flat_input_psd(const SubcarrierPlan& plan, double sigma);

/// Input autocorrelation of a PSD, R[m] = (1/N) sum_k P_k exp(j 2 pi k m / N).
RealVector autocorrelation_from_psd(std::span<const double> psd);

/// PSD of an autocorrelation, P_k = sum_m R[m] exp(-j 2 pi k m / N).
RealVector psd_from_autocorrelation(std::span<const double> r);

SpectralProfile sdr_per_subcarrier(const SubcarrierPlan& plan, const ClipBiasConfig& cfg,
                                   const SeriesOptions& opts = {});

} // namespace clipofdm
