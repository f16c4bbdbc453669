#include "clipofdm/bussgang.hpp"
#include "clipofdm/rate.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace clipofdm;

TEST_CASE("average optical power")
{
    for (double g : {0.5, 1.0, 2.0}) {
        for (double s : {0.0, 0.3, 0.5}) {
            const auto cfg = ClipBiasConfig::make(1.0, g, s);
            const double lo = -2 * g * s, hi = 2 * g * (1 - s);
            const double q = oracle::gauss_expect([&](double u) { return std::clamp(u, lo, hi) - lo; }, {lo, hi});
            CHECK(average_optical_power(cfg) == doctest::Approx(q).epsilon(1e-10));
            CHECK(power_metrics(cfg).dynamic == doctest::Approx(2 * g));
        }
    }
}

TEST_CASE("constraint activation")
{
    const auto cfg = ClipBiasConfig::make(1.0, 1.0, 0.5);
    const double oy = average_optical_power(cfg);
    ConstraintPair osnr_only;
    osnr_only.osnr = 10.0;
    CHECK(max_sigma_over_noise(1.0, 0.5, osnr_only) == doctest::Approx(10.0 / oy));
    ConstraintPair dsnr_only;
    dsnr_only.dsnr = 10.0;
    CHECK(max_sigma_over_noise(1.0, 0.5, dsnr_only) == doctest::Approx(10.0 / 2.0));
    ConstraintPair both{10.0, 10.0};
    CHECK(max_sigma_over_noise(1.0, 0.5, both) == doctest::Approx(std::min(10.0 / oy, 5.0)));
    CHECK(std::isinf(max_sigma_over_noise(0.0, 0.5, dsnr_only)));
    const auto c = ConstraintPair::from_db(20.0, 18.0);
    CHECK(*c.osnr == doctest::Approx(10.0));
    CHECK(*c.dsnr == doctest::Approx(std::pow(10.0, 38.0 / 20.0)));
    CHECK_FALSE(ConstraintPair::from_db(20.0, std::nullopt).dsnr.has_value());
    CHECK_FALSE(ConstraintPair::dsnr_only_db(20.0).osnr.has_value());
}

TEST_CASE("ceiling bounce channel")
{
    const auto taps = ceiling_bounce_taps(10e-9, 100e6);
    // Oracle: continuous-time response 6 a^6 / (t + a)^7 sampled at t = i / fs.
    const double a = 12.0 * std::sqrt(11.0 / 23.0) * 10e-9;
    for (std::size_t i = 1; i < std::min<std::size_t>(taps.size(), 20); ++i) {
        const double want = std::pow(a / (i / 100e6 + a), 7);
        CHECK(taps[i] / taps[0] == doctest::Approx(want).epsilon(1e-12));
    }
    // Truncation keeps 99.99% of the (long) sampled response energy.
    double kept = 0.0, total = 0.0;
    for (std::size_t i = 0; i < 200000; ++i) {
        const double v = std::pow(a / (i / 100e6 + a), 7);
        total += v * v;
        if (i < taps.size()) {
            kept += v * v;
        }
    }
    CHECK(kept / total >= 0.9999);
    CHECK(kept / total < 0.99999);
    for (std::size_t i = 1; i < taps.size(); ++i) {
        CHECK(taps[i] < taps[i - 1]);
    }
    const auto ch = ceiling_bounce_response(10e-9, 100e6, 512);
    REQUIRE(ch.h_mag2.size() == 512);
    CHECK(ch.h_mag2[0] == doctest::Approx(1.0));
    // Oracle: |DFT|^2 of the folded taps.
    RealVector folded(512, 0.0);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        folded[i % 512] += taps[i];
    }
    const auto spec = oracle::naive_dft(folded);
    for (std::size_t k = 0; k < 512; k += 37) {
        CHECK(ch.h_mag2[k] == doctest::Approx(std::norm(spec[k]) / std::norm(spec[0])).epsilon(1e-9));
    }
    for (std::size_t k = 1; k < 256; ++k) {
        CHECK(ch.h_mag2[k] == doctest::Approx(ch.h_mag2[512 - k]));
        CHECK(ch.h_mag2[k] <= 1.0 + 1e-12);
    }
    // Low-pass: the band edge is attenuated.
    CHECK(ch.h_mag2[256] < 0.5);
}

TEST_CASE("SNDR and rate on an AWGN channel")
{
    const auto plan = SubcarrierPlan::make(Scheme::DCO, 64);
    const auto chan = ChannelSpec::awgn(64);
    const auto c = ConstraintPair::from_db(20.0, 12.0);
    const double g = db_to_amplitude(4.0);
    const auto p = sndr_profile(plan, g, 0.5, c, chan);
    REQUIRE(p.sndr.size() == plan.data_indices.size());
    // Oracle: rebuild from the SDR profile and the constraint.
    const auto prof = sdr_per_subcarrier(plan, ClipBiasConfig::make(frame_sigma(plan, kQpskPower), g, 0.5));
    const double snr_scale = max_sigma_over_noise(g, 0.5, c);
    double rate = 0.0;
    for (std::size_t i = 0; i < p.sndr.size(); ++i) {
        const double noise = plan.data_indices.size() / (64.0 * prof.alpha * prof.alpha * snr_scale * snr_scale);
        const double want = 1.0 / (1.0 / prof.sdr[i] + noise);
        CHECK(p.sndr[i] == doctest::Approx(want).epsilon(1e-10));
        rate += std::log2(1.0 + want);
    }
    CHECK(p.rate == doctest::Approx(rate / 128.0).epsilon(1e-12));
    CHECK(sndr_profile(plan, 0.0, 0.5, c, chan).rate == 0.0);
}

TEST_CASE("rate surface optimum")
{
    const auto plan = SubcarrierPlan::make(Scheme::DCO, 64);
    const auto gam = [] {
        RealVector v;
        for (double d : linear_grid(-2.0, 10.0, 1.0)) {
            v.push_back(db_to_amplitude(d));
        }
        return v;
    }();
    const RealVector vs = linear_grid(0.0, 0.7, 0.05);
    const RateSurface surf(plan, gam, vs);
    const auto chan = ChannelSpec::awgn(64);
    const auto c = ConstraintPair::from_db(20.0, 12.0);
    const auto best = surf.optimize(c, chan);
    for (std::size_t gi = 0; gi < gam.size(); ++gi) {
        for (std::size_t si = 0; si < vs.size(); ++si) {
            CHECK(surf.rate(gi, si, c, chan) <= best.rate);
        }
    }
    const auto direct = optimize_operating_point(plan, c, chan, gam, vs);
    CHECK(direct.rate == best.rate);
    CHECK(direct.gamma == best.gamma);
    // Interior optimum in gamma.
    CHECK(best.gamma > gam.front());
    CHECK(best.gamma < gam.back());
    // DSNR-only: bias sits in the middle.
    CHECK(surf.optimize(ConstraintPair::dsnr_only_db(25.0), chan).varsigma == doctest::Approx(0.5));
}

TEST_CASE("higher OSNR gives nondecreasing rate and clipping ratio")
{
    const auto plan = SubcarrierPlan::make(Scheme::ACO, 64);
    RealVector gam;
    for (double d : linear_grid(-4.0, 12.0, 0.5)) {
        gam.push_back(db_to_amplitude(d));
    }
    const RateSurface surf(plan, gam, {0.0});
    const auto chan = ChannelSpec::awgn(64);
    double prev_rate = 0.0, prev_g = 0.0;
    for (int eta = 0; eta <= 25; eta += 5) {
        const auto op = surf.optimize(ConstraintPair::from_db(eta, 18.0), chan);
        CHECK(op.rate >= prev_rate);
        CHECK(op.gamma >= prev_g);
        prev_rate = op.rate;
        prev_g = op.gamma;
    }
}

TEST_CASE("grids")
{
    const auto g = linear_grid(0.3, 0.7, 0.02);
    CHECK(g.size() == 21);
    CHECK(g[10] == 0.5);
    CHECK(default_gamma_grid().size() == 65);
    CHECK(default_varsigma_grid(Scheme::ACO) == RealVector{0.0});
    CHECK(default_varsigma_grid(Scheme::DCO).size() == 71);
}
