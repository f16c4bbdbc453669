#pragma once

#include "clipofdm/ofdm.hpp"

#include <cstdint>
#include <stdexcept>

namespace clipofdm {

/// Minimum-distortion problem for one symbol:
///
///   minimize    sum_{k in data_indices} |C_k|^2,   C = DFT(xhat - x)
///   subject to  max(xhat) - min(xhat) <= dynamic_range
///
/// Bins outside data_indices (always 0 and N/2 for both schemes) are free.
/// `x` is the reference waveform: the original symbol for DCO, half of it for ACO.
struct BoundProblem {
    RealVector x;
    double dynamic_range;
    std::vector<std::size_t> data_indices;

    bool dc_free() const;
    bool nyquist_free() const;
};

/// Kuhn-Tucker residuals of a candidate solution. All entries are >= 0.
/// dual_min is the magnitude of the most negative multiplier (0 when all are >= 0).
struct KtCertificate {
    double stationarity_residual = 0.0;
    double primal_violation = 0.0;
    double dual_min = 0.0;
    double complementarity_residual = 0.0;

    double worst() const;
};

struct SolverOptions {
    std::size_t max_iterations = 50000;
    double tolerance = 1e-9;     // ADMM primal/dual residual, relative to max|x|
    double rho = 2.0;
    bool polish = true;
    std::size_t polish_every = 25;
};

struct BoundSolution {
    ComplexVector distortion;  ///< C_k
    RealVector shaped;         ///< xhat = x + c
    double floor = 0.0;        ///< window is [floor, floor + dynamic_range]
    double objective = 0.0;
    KtCertificate kt;
    std::size_t iterations = 0;
    bool converged = false;
    bool polished = false;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, BoundSolution best)
        : std::runtime_error(what), best_(std::move(best))
    {
    }
    const BoundSolution& best() const { return best_; }

private:
    BoundSolution best_;
};

/// Solves the convex program with ADMM on the time-domain waveform. Throws
/// SolverError (carrying the best iterate and its residuals) when neither the
/// ADMM residuals nor the KT check reach tolerance within the iteration cap.
BoundSolution solve_min_distortion(const BoundProblem& prob, const SolverOptions& opts = {});

/// KT residuals for a feasible candidate (xhat, floor) of the full problem.
KtCertificate kt_certificate(const BoundProblem& prob, std::span<const double> shaped, double floor);

/// Euclidean projection onto {v : max(v) - min(v) <= range}. Writes the window floor.
RealVector project_to_range(std::span<const double> w, double range, double* floor = nullptr);

/// sum_{k in data} |C_k|^2 for c = shaped - x.
double distortion_objective(std::span<const double> x, std::span<const double> shaped,
                            std::span<const std::size_t> data_indices);

struct BoundEstimate {
    Scheme scheme;
    double gamma;
    double evm_lower_bound;
    double evm_scheme;          ///< clipping EVM measured on the same frames
    double stderr_bound;        ///< batch-means standard error of the bound
    double mean_kt_residual;
    double max_kt_residual;
    std::size_t num_symbols;
};

/// EVM lower bound over random QPSK frames of the plan. Each frame's reference
/// (X for DCO, X/2 for ACO) is reshaped into a window of width 2 gamma sigma with
/// minimum data-bin distortion. Clipping (varsigma = 0.5 for DCO, ACO clipping for
/// ACO) is evaluated on the same frames for comparison.
BoundEstimate evm_lower_bound(const SubcarrierPlan& plan, double gamma, std::size_t num_symbols,
                              std::uint64_t seed, const SolverOptions& opts = {});

/// Multipliers and residuals for the ACO clipping solution of the half-length
/// problem: minimize sum_{n<N/2} c[n]^2 s.t. 0 <= x[n] + c[n] <= 2 gamma sigma.
struct AcoKtResult {
    KtCertificate certificate;
    RealVector correction;   ///< c*[n], n < N/2
    RealVector multipliers;  ///< mu_i, i < N (upper constraints first, then lower)
};

AcoKtResult kt_certificate_aco(std::span<const double> x, double gamma_sigma);

/// Solution of the half-length ACO problem (box projection) and its objective.
struct ReducedAcoSolution {
    RealVector correction;
    double objective;
};

ReducedAcoSolution solve_reduced_aco(std::span<const double> x, double range);

} // namespace clipofdm
