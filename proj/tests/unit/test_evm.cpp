#include "clipofdm/evm.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace clipofdm;

TEST_CASE("DCO clip error power against quadrature")
{
    for (double g : {0.0, 0.3, 1.0, 1.7, 3.0}) {
        for (double s : {0.0, 0.2, 0.45, 0.5, 0.8, 1.0}) {
            CHECK(dco_clip_error_power(g, s) == doctest::Approx(oracle::dco_error_quad(g, s)).epsilon(1e-9).scale(1e-12));
        }
    }
    CHECK(dco_clip_error_power(0.0, 0.5) == doctest::Approx(1.0));
    CHECK(dco_clip_error_power(1.0, 0.5) == doctest::Approx(0.150679).epsilon(1e-5));
    CHECK(dco_clip_error_power(1.2, 0.3) == doctest::Approx(dco_clip_error_power(1.2, 0.7)).epsilon(1e-14));
}

TEST_CASE("DCO clip error power against Monte Carlo samples")
{
    const double mc = oracle::mc_clip_error(-1.0, 1.0, 10'000'000, 17);
    CHECK(dco_clip_error_power(1.0, 0.5) == doctest::Approx(mc).epsilon(3e-3));
}

TEST_CASE("DCO EVM values and optimal bias")
{
    CHECK(dco_evm(0.0, 0.5) == doctest::Approx(1.0));
    CHECK(dco_evm(1.0, 0.5) == doctest::Approx(0.38817).epsilon(1e-4));
    // Simplified form at the optimum bias.
    for (double g : {0.2, 1.0, 2.5}) {
        const double simple = std::sqrt(2.0 * (1.0 + g * g) * gauss_cdf(-g) - 2.0 * g * gauss_pdf(g));
        CHECK(dco_evm(g, 0.5) == doctest::Approx(simple).epsilon(1e-12));
    }
    // Both tails vanish only when the bias sits strictly inside the window.
    for (double s : {0.3, 0.5, 0.9}) {
        CHECK(dco_evm(1e6 * (1.0 - s), s) < 1e-6);
    }
    CHECK(dco_evm(1e6, 0.0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(dco_optimal_bias() == 0.5);
}

TEST_CASE("DCO derivatives against finite differences")
{
    for (double g : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(dco_clip_error_power_dvarsigma(g, 0.5)) < 1e-12);
        for (double s : {0.1, 0.3, 0.6, 0.9}) {
            const auto f = [g](double v) { return dco_clip_error_power(g, v); };
            const auto df = [g](double v) { return dco_clip_error_power_dvarsigma(g, v); };
            CHECK(dco_clip_error_power_dvarsigma(g, s) == doctest::Approx(oracle::derivative(f, s)).epsilon(1e-6).scale(1e-9));
            CHECK(dco_clip_error_power_d2varsigma(g, s) == doctest::Approx(oracle::derivative(df, s)).epsilon(1e-6).scale(1e-9));
        }
    }
    for (int i = 1; i <= 9; ++i) {
        CHECK(dco_clip_error_power_d2varsigma(1.0, 0.1 * i) > 0.0);
    }
}

TEST_CASE("analytic argmin over the 0.30:0.02:0.70 grid is 0.5")
{
    for (int gdb = 5; gdb <= 9; ++gdb) {
        const double g = db_to_amplitude(gdb);
        double best = INFINITY, arg = -1;
        for (int i = 0; i <= 20; ++i) {
            const double s = 0.3 + 0.02 * i;
            if (dco_evm(g, s) < best) {
                best = dco_evm(g, s);
                arg = s;
            }
        }
        CHECK(arg == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("ACO clip error power and EVM")
{
    CHECK(aco_clip_error_power(0.0) == doctest::Approx(0.25));
    CHECK(aco_clip_error_power(1.0) == doctest::Approx(0.0028840).epsilon(1e-4));
    for (double g : {0.0, 0.4, 1.0, 1.8}) {
        CHECK(aco_clip_error_power(g) == doctest::Approx(oracle::aco_error_quad(g)).epsilon(1e-9).scale(1e-14));
    }
    CHECK(aco_evm(0.0) == doctest::Approx(1.0));
    CHECK(aco_evm(1.0) == doctest::Approx(0.10741).epsilon(1e-4));
    // Deep tail: cancellation-prone, so compare with quadrature rather than a bound.
    CHECK(aco_evm(3.0) == doctest::Approx(std::sqrt(4.0 * oracle::aco_error_quad(3.0))).epsilon(1e-6));
    CHECK(aco_evm(3.0) < 2e-5);
    CHECK(aco_evm(50.0) == 0.0);
}

TEST_CASE("monotone in gamma")
{
    double prev_d = INFINITY, prev_a = INFINITY;
    for (int i = 0; i <= 50; ++i) {
        const double g = 0.1 * i;
        CHECK(dco_evm(g, 0.5) < prev_d);
        CHECK(aco_evm(g) < prev_a);
        prev_d = dco_evm(g, 0.5);
        prev_a = aco_evm(g);
    }
}

TEST_CASE("Monte Carlo EVM")
{
    const auto dco = SubcarrierPlan::make(Scheme::DCO, 512);
    const auto aco = SubcarrierPlan::make(Scheme::ACO, 512);
    SUBCASE("DCO 6 dB matches closed form within 2%")
    {
        const double g = db_to_amplitude(6.0);
        const auto r = monte_carlo_evm(dco, ClipBiasConfig::make(frame_sigma(dco, kQpskPower), g, 0.5), 1000, 4);
        CHECK(r.evm == doctest::Approx(dco_evm(g, 0.5)).epsilon(0.02));
        CHECK(r.stderr_batch > 0.0);
        CHECK(r.num_symbols == 1000);
    }
    SUBCASE("ACO -2 dB matches closed form within 2%")
    {
        const double g = db_to_amplitude(-2.0);
        const auto r = monte_carlo_evm(aco, ClipBiasConfig::make(frame_sigma(aco, kQpskPower), g, 0.0), 1000, 4);
        CHECK(r.evm == doctest::Approx(aco_evm(g)).epsilon(0.02));
    }
    SUBCASE("no clipping gives zero EVM")
    {
        const auto r = monte_carlo_evm(dco, ClipBiasConfig::make(frame_sigma(dco, kQpskPower), 100.0, 0.5), 50, 1);
        CHECK(r.evm < 1e-3);
    }
    SUBCASE("deterministic for a seed")
    {
        const auto cfg = ClipBiasConfig::make(frame_sigma(dco, kQpskPower), 1.5, 0.4);
        const auto a = monte_carlo_evm(dco, cfg, 37, 99);
        const auto b = monte_carlo_evm(dco, cfg, 37, 99);
        CHECK(a.evm == b.evm);
        CHECK(a.stderr_batch == b.stderr_batch);
        const auto c = monte_carlo_evm(dco, cfg, 37, 100);
        CHECK(a.evm != c.evm);
    }
    CHECK_THROWS(monte_carlo_evm(dco, ClipBiasConfig::make(1.0, 1.0, 0.5), 0, 1));
}
