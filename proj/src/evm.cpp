#include "clipofdm/evm.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace clipofdm {

namespace {

// E[(T - c)_+^2] for standard normal T.
double upper_tail_second_moment(double c)
{
    return (1.0 + c * c) * gauss_cdf(-c) - c * gauss_pdf(c);
}

void check_ratios(double gamma, double varsigma)
{
    if (!(gamma >= 0.0)) {
        throw std::invalid_argument("gamma must be >= 0");
    }
    if (!(varsigma >= 0.0 && varsigma <= 1.0)) {
        throw std::invalid_argument("varsigma must lie in [0, 1]");
    }
}

} // namespace

double dco_clip_error_power(double gamma, double varsigma)
{
    check_ratios(gamma, varsigma);
    if (std::isinf(gamma)) {
        return 0.0;
    }
    return upper_tail_second_moment(2.0 * gamma * (1.0 - varsigma))
           + upper_tail_second_moment(2.0 * gamma * varsigma);
}

double dco_clip_error_power_dvarsigma(double gamma, double varsigma)
{
    const double up = 2.0 * gamma * (1.0 - varsigma);
    const double lo = 2.0 * gamma * varsigma;
    return 4.0 * gamma * gauss_pdf(up) - 4.0 * gamma * gauss_pdf(lo)
           - 8.0 * gamma * gamma * (1.0 - varsigma) * gauss_cdf(-up)
           + 8.0 * gamma * gamma * varsigma * gauss_cdf(-lo);
}

double dco_clip_error_power_d2varsigma(double gamma, double varsigma)
{
    return 8.0 * gamma * gamma
           * (gauss_cdf(2.0 * gamma * (varsigma - 1.0)) + gauss_cdf(-2.0 * gamma * varsigma));
}

double dco_evm(double gamma, double varsigma)
{
    return std::sqrt(dco_clip_error_power(gamma, varsigma));
}

double aco_clip_error_power(double gamma)
{
    check_ratios(gamma, 0.0);
    if (std::isinf(gamma)) {
        return 0.0;
    }
    const double g2 = 2.0 * gamma;
    return 0.5 * (-g2 * gauss_pdf(g2) + gauss_cdf(-g2) + g2 * g2 * gauss_cdf(-g2));
}

double aco_evm(double gamma) { return std::sqrt(4.0 * aco_clip_error_power(gamma)); }

double analytic_evm(Scheme scheme, double gamma, double varsigma)
{
    return scheme == Scheme::DCO ? dco_evm(gamma, varsigma) : aco_evm(gamma);
}

std::mt19937_64 batch_engine(std::uint64_t seed, std::size_t batch)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch)};
    return std::mt19937_64(seq);
}

EvmResult monte_carlo_evm(const SubcarrierPlan& plan, const ClipBiasConfig& cfg,
                          std::size_t num_symbols, std::uint64_t seed)
{
    if (num_symbols == 0) {
        throw std::invalid_argument("monte_carlo_evm: num_symbols must be >= 1");
    }
    if (plan.scheme == Scheme::ACO && cfg.varsigma != 0.0) {
        throw std::invalid_argument("monte_carlo_evm: ACO requires varsigma = 0");
    }
    const std::size_t batches = std::min<std::size_t>(10, num_symbols);
    std::vector<double> batch_err(batches, 0.0);
    std::vector<double> batch_ref(batches, 0.0);

    for (std::size_t b = 0; b < batches; ++b) {
        const std::size_t count = num_symbols / batches + (b < num_symbols % batches ? 1 : 0);
        auto rng = batch_engine(seed, b);
        for (std::size_t s = 0; s < count; ++s) {
            const auto frame = random_qpsk_frame(plan, rng);
            const auto clipped = dft_real(clip(frame.time, cfg));
            for (auto k : plan.data_indices) {
                const auto ref = plan.reference_scale * frame.spectrum[k];
                batch_err[b] += std::norm(ref - clipped[k]);
                batch_ref[b] += std::norm(ref);
            }
        }
    }

    const double err = std::accumulate(batch_err.begin(), batch_err.end(), 0.0);
    const double ref = std::accumulate(batch_ref.begin(), batch_ref.end(), 0.0);
    EvmResult r{plan.scheme, cfg.gamma, cfg.varsigma, std::sqrt(err / ref),
                err / static_cast<double>(num_symbols), 0.0, num_symbols};

    if (batches > 1) {
        std::vector<double> evms(batches);
        for (std::size_t b = 0; b < batches; ++b) {
            evms[b] = std::sqrt(batch_err[b] / batch_ref[b]);
        }
        const double mean = std::accumulate(evms.begin(), evms.end(), 0.0) / batches;
        double var = 0.0;
        for (double e : evms) {
            var += (e - mean) * (e - mean);
        }
        var /= static_cast<double>(batches - 1);
        r.stderr_batch = std::sqrt(var / static_cast<double>(batches));
    }
    return r;
}

} // namespace clipofdm
