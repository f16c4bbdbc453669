#include "clipofdm/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace clipofdm {

namespace {

// Plans are cached per (size, direction). FFTW planning is not thread safe, so
// each thread keeps its own cache.
class FftPlan {
public:
    FftPlan(std::size_t n, int sign) : n_(n)
    {
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, sign, FFTW_ESTIMATE);
        if (plan_ == nullptr) {
            throw std::runtime_error("fftw: plan creation failed");
        }
    }
    ~FftPlan()
    {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    ComplexVector run(std::span<const Complex> v)
    {
        for (std::size_t i = 0; i < n_; ++i) {
            in_[i][0] = v[i].real();
            in_[i][1] = v[i].imag();
        }
        fftw_execute(plan_);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
        ComplexVector out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = Complex(out_[i][0] * scale, out_[i][1] * scale);
        }
        return out;
    }

private:
    std::size_t n_;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

ComplexVector transform(std::span<const Complex> v, int sign)
{
    if (v.empty()) {
        throw std::invalid_argument("dft: zero-length input");
    }
    thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<FftPlan>> cache;
    auto& slot = cache[{v.size(), sign}];
    if (!slot) {
        slot = std::make_unique<FftPlan>(v.size(), sign);
    }
    return slot->run(v);
}

} // namespace

ComplexVector dft(std::span<const Complex> v) { return transform(v, FFTW_FORWARD); }

ComplexVector idft(std::span<const Complex> v) { return transform(v, FFTW_BACKWARD); }

ComplexVector dft_real(std::span<const double> v)
{
    ComplexVector c(v.begin(), v.end());
    return dft(c);
}

RealVector idft_real(std::span<const Complex> spectrum)
{
    const auto t = idft(spectrum);
    RealVector out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        out[i] = t[i].real();
    }
    return out;
}

double idft_imag_residue(std::span<const Complex> spectrum)
{
    double worst = 0.0;
    for (const auto& z : idft(spectrum)) {
        worst = std::max(worst, std::abs(z.imag()));
    }
    return worst;
}

double gauss_pdf(double x)
{
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double gauss_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double hermite_prob(int n, double t)
{
    if (n < 0) {
        throw std::invalid_argument("hermite_prob: negative order");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = t;
    for (int k = 1; k < n; ++k) {
        const double next = t * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

RealVector hermite_normalized(int n, double t)
{
    if (n < 0) {
        throw std::invalid_argument("hermite_normalized: negative order");
    }
    RealVector h(static_cast<std::size_t>(n) + 1);
    h[0] = 1.0;
    if (n >= 1) {
        h[1] = t;
    }
    // h_{k+1} = (t h_k - sqrt(k) h_{k-1}) / sqrt(k+1)
    for (int k = 1; k < n; ++k) {
        h[k + 1] = (t * h[k] - std::sqrt(static_cast<double>(k)) * h[k - 1])
                   / std::sqrt(static_cast<double>(k + 1));
    }
    return h;
}

GaussianStream::GaussianStream(std::uint64_t seed, double sigma)
    : engine_(seed), dist_(0.0, sigma), sigma_(sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("GaussianStream: sigma must be positive");
    }
}

double GaussianStream::next() { return dist_(engine_); }

void GaussianStream::fill(std::span<double> out)
{
    for (auto& v : out) {
        v = dist_(engine_);
    }
}

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

double amplitude_to_db(double ratio) { return 20.0 * std::log10(ratio); }

} // namespace clipofdm
