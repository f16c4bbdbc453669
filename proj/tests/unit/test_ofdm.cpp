#include "clipofdm/ofdm.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace clipofdm;

namespace {

const ComplexVector kTableSymbols = {{1, 1}, {1, -1}, {-1, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {1, -1}};

} // namespace

TEST_CASE("subcarrier plans")
{
    const auto d = SubcarrierPlan::make(Scheme::DCO, 18);
    CHECK(d.data_indices.size() == 16);
    CHECK(std::find(d.data_indices.begin(), d.data_indices.end(), 0) == d.data_indices.end());
    CHECK(std::find(d.data_indices.begin(), d.data_indices.end(), 9) == d.data_indices.end());
    CHECK(d.reference_scale == 1.0);
    CHECK(d.num_symbols() == 8);

    const auto a = SubcarrierPlan::make(Scheme::ACO, 32);
    CHECK(a.data_indices.size() == 16);
    for (auto k : a.data_indices) {
        CHECK(k % 2 == 1);
    }
    CHECK(a.reference_scale == 0.5);

    CHECK_THROWS(SubcarrierPlan::make(Scheme::DCO, 7));
    CHECK_THROWS(SubcarrierPlan::make(Scheme::DCO, 2));
    CHECK_THROWS(SubcarrierPlan::make(Scheme::ACO, 18));  // N % 4 != 0
}

TEST_CASE("worked example: DCO arrangement, N=18")
{
    const auto plan = SubcarrierPlan::make(Scheme::DCO, 18);
    const auto f = map_symbols(plan, kTableSymbols);
    const ComplexVector want = {{0, 0},  {1, 1},  {1, -1}, {-1, -1}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1}, {1, -1},
                                {0, 0},  {1, 1},  {-1, 1}, {-1, -1}, {1, 1},  {1, -1}, {-1, 1}, {1, 1},   {1, -1}};
    for (std::size_t k = 0; k < 18; ++k) {
        CHECK(f.spectrum[k] == want[k]);
    }
    // Time signal is the real IDFT of the table spectrum.
    const auto slow = oracle::naive_dft(f.time);
    for (std::size_t k = 0; k < 18; ++k) {
        CHECK(std::abs(slow[k] - want[k]) < 1e-12);
    }
}

TEST_CASE("worked example: ACO arrangement, N=32, negative-half symmetry")
{
    const auto plan = SubcarrierPlan::make(Scheme::ACO, 32);
    const auto f = map_symbols(plan, kTableSymbols);
    const ComplexVector odd = {{1, 1},  {1, -1}, {-1, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {1, -1},
                               {1, 1},  {-1, 1}, {-1, -1}, {1, 1}, {1, -1}, {-1, 1}, {1, 1},   {1, -1}};
    for (std::size_t k = 0; k < 32; ++k) {
        if (k % 2 == 0) {
            CHECK(f.spectrum[k] == Complex(0.0, 0.0));
        } else {
            CHECK(f.spectrum[k] == odd[k / 2]);
        }
    }
    CHECK(has_negative_half_symmetry(f.time, 1e-10));
    for (std::size_t n = 0; n < 16; ++n) {
        CHECK(f.time[n + 16] == doctest::Approx(-f.time[n]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("map_symbols rejects bad input")
{
    const auto plan = SubcarrierPlan::make(Scheme::DCO, 18);
    CHECK_THROWS(map_symbols(plan, ComplexVector(7, {1, 1})));
    ComplexVector bad(8, {1, 1});
    bad[3] = {NAN, 0.0};
    CHECK_THROWS(map_symbols(plan, bad));
}

TEST_CASE("worked example: clip levels")
{
    const auto dco = SubcarrierPlan::make(Scheme::DCO, 18);
    const double sd = frame_sigma(dco, kQpskPower);
    CHECK(sd == doctest::Approx(std::sqrt(32.0 / 18.0)));
    const auto cd = ClipBiasConfig::make_for(Scheme::DCO, sd, 1.41, 0.45);
    CHECK(cd.upper() == doctest::Approx(2.07).epsilon(0.005));
    CHECK(cd.lower() == doctest::Approx(-1.70).epsilon(0.005));
    CHECK(cd.bias() == doctest::Approx(1.70).epsilon(0.005));

    const auto aco = SubcarrierPlan::make(Scheme::ACO, 32);
    const double sa = frame_sigma(aco, kQpskPower);
    CHECK(sa == doctest::Approx(1.0));
    const auto ca = ClipBiasConfig::make_for(Scheme::ACO, sa, 0.79, 0.0);
    CHECK(ca.upper() == doctest::Approx(1.59).epsilon(0.005));
    CHECK(ca.bias() == 0.0);
    CHECK_THROWS(ClipBiasConfig::make_for(Scheme::ACO, 1.0, 1.0, 0.2));
    CHECK_THROWS(ClipBiasConfig::make(0.0, 1.0, 0.5));
    CHECK_THROWS(ClipBiasConfig::make(1.0, -1.0, 0.5));
    CHECK_THROWS(ClipBiasConfig::make(1.0, 1.0, 1.5));
}

TEST_CASE("clip_and_bias range, pass-through and idempotence")
{
    std::mt19937_64 rng(11);
    const auto plan = SubcarrierPlan::make(Scheme::DCO, 64);
    const double sigma = frame_sigma(plan, kQpskPower);
    for (double g : {0.3, 1.0, 2.0}) {
        for (double s : {0.0, 0.3, 0.5, 0.9}) {
            const auto cfg = ClipBiasConfig::make(sigma, g, s);
            const auto f = random_qpsk_frame(plan, rng);
            const auto y = clip_and_bias(f.time, cfg);
            for (std::size_t n = 0; n < y.size(); ++n) {
                CHECK(y[n] >= 0.0);
                CHECK(y[n] <= cfg.dynamic_range() + 1e-12);
                if (f.time[n] >= cfg.lower() && f.time[n] <= cfg.upper()) {
                    CHECK(y[n] == doctest::Approx(f.time[n] - cfg.lower()));
                }
            }
            // Re-applying the clipper to the (un-biased) output changes nothing.
            const auto xbar = clip(f.time, cfg);
            CHECK(clip(xbar, cfg) == xbar);
        }
    }
    // gamma large: nothing is clipped.
    const auto f = random_qpsk_frame(plan, rng);
    const auto cfg = ClipBiasConfig::make(sigma, 1e6, 0.5);
    const auto y = clip_and_bias(f.time, cfg);
    for (std::size_t n = 0; n < y.size(); ++n) {
        CHECK(y[n] == doctest::Approx(f.time[n] + cfg.bias()));
    }
}

TEST_CASE("half-clip identity on odd subcarriers")
{
    std::mt19937_64 rng(5);
    for (std::size_t n : {16u, 32u, 64u}) {
        const auto plan = SubcarrierPlan::make(Scheme::ACO, n);
        for (int rep = 0; rep < 10; ++rep) {
            const auto f = random_qpsk_frame(plan, rng);
            const auto z = half_clip_spectrum_check(f);
            // Oracle: brute-force DFT of the zero-clipped waveform.
            RealVector pos(f.time);
            for (auto& v : pos) {
                v = std::max(v, 0.0);
            }
            const auto slow = oracle::naive_dft(pos);
            for (std::size_t k = 1; k < n; k += 2) {
                CHECK(std::abs(z[k] - slow[k]) < 1e-10);
                CHECK(std::abs(z[k] - 0.5 * f.spectrum[k]) < 1e-9);
            }
        }
    }
    const auto plan = SubcarrierPlan::make(Scheme::ACO, 32);
    const auto table = half_clip_spectrum_check(map_symbols(plan, kTableSymbols));
    CHECK(std::abs(table[1] - Complex(0.5, 0.5)) < 1e-12);
    CHECK(std::abs(table[3] - Complex(0.5, -0.5)) < 1e-12);

    SymbolFrame zero{ComplexVector(32), RealVector(32, 0.0)};
    for (const auto& v : half_clip_spectrum_check(zero)) {
        CHECK(std::abs(v) == 0.0);
    }
    const auto dplan = SubcarrierPlan::make(Scheme::DCO, 32);
    CHECK_THROWS(half_clip_spectrum_check(random_qpsk_frame(dplan, rng)));
}

TEST_CASE("additive frequency-domain model")
{
    std::mt19937_64 rng(9);
    const auto plan = SubcarrierPlan::make(Scheme::ACO, 64);
    const auto f = random_qpsk_frame(plan, rng);
    const auto cfg = ClipBiasConfig::make_for(Scheme::ACO, frame_sigma(plan, kQpskPower), 10.0, 0.0);
    // With no upper clipping, the ACO residual C_k vanishes on odd bins.
    const auto y = dft_real(clip_and_bias(f.time, cfg));
    for (std::size_t k = 1; k < 64; k += 2) {
        CHECK(std::abs(y[k] - 0.5 * f.spectrum[k]) < 1e-10);
    }
}

TEST_CASE("random frames are Hermitian and real")
{
    std::mt19937_64 rng(1);
    for (auto scheme : {Scheme::DCO, Scheme::ACO}) {
        const auto plan = SubcarrierPlan::make(scheme, 64);
        for (int rep = 0; rep < 20; ++rep) {
            const auto f = random_qpsk_frame(plan, rng);
            CHECK(is_hermitian(f.spectrum, 1e-12));
            CHECK(idft_imag_residue(f.spectrum) < 1e-10);
            if (scheme == Scheme::ACO) {
                CHECK(has_negative_half_symmetry(f.time, 1e-10));
            }
        }
    }
}
