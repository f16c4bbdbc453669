#pragma once

#include "clipofdm/ofdm.hpp"

#include <cstdint>

namespace clipofdm {

// Closed forms assume a Gaussian time-domain signal. Powers are per sample
// and normalized by sigma^2.

/// Per-sample clipping error power of DCO-OFDM, E[(x - clip(x))^2] / sigma^2.
double dco_clip_error_power(double gamma, double varsigma);
/// First and second partial derivatives of dco_clip_error_power in varsigma.
double dco_clip_error_power_dvarsigma(double gamma, double varsigma);
double dco_clip_error_power_d2varsigma(double gamma, double varsigma);

double dco_evm(double gamma, double varsigma);

/// Bias ratio minimizing DCO EVM at every gamma (symmetric clipping).
constexpr double dco_optimal_bias() { return 0.5; }

/// ACO clipping error power on the odd bins, per sample, over sigma^2.
double aco_clip_error_power(double gamma);

/// ACO EVM against the half-amplitude reference X_k / 2.
double aco_evm(double gamma);

/// Closed-form EVM for a scheme (varsigma ignored for ACO).
double analytic_evm(Scheme scheme, double gamma, double varsigma);

struct EvmResult {
    Scheme scheme;
    double gamma;
    double varsigma;
    double evm;
    double clip_error_power;  ///< mean over symbols of sum_{K_d} |X_ref - Xbar|^2
    double stderr_batch;      ///< batch-means standard error of evm
    std::size_t num_symbols;
};

/// Ensemble EVM over random QPSK frames. Frames are split into (up to) 10
/// batches, each drawing from its own seeded generator, so the result depends
/// only on (plan, cfg, num_symbols, seed).
EvmResult monte_carlo_evm(const SubcarrierPlan& plan, const ClipBiasConfig& cfg,
                          std::size_t num_symbols, std::uint64_t seed);

/// Generator for batch `batch` of a seeded run. Shared by every Monte Carlo path.
std::mt19937_64 batch_engine(std::uint64_t seed, std::size_t batch);

} // namespace clipofdm
