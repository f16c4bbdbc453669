#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace clipofdm {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Unitary DFT, X_k = N^{-1/2} sum_n x[n] exp(-j 2 pi k n / N).
/// Any length is accepted; non-power-of-two sizes go through FFTW's generic path.
ComplexVector dft(std::span<const Complex> v);

/// Unitary inverse DFT. dft(idft(v)) == v up to rounding.
ComplexVector idft(std::span<const Complex> v);

/// DFT of a real sequence, returned as the full length-N Hermitian spectrum.
ComplexVector dft_real(std::span<const double> v);

/// Inverse DFT of a spectrum assumed Hermitian; the imaginary residue is dropped.
RealVector idft_real(std::span<const Complex> spectrum);

/// Largest |Im| left over by idft of the given spectrum. Used to check realness.
double idft_imag_residue(std::span<const Complex> spectrum);

double gauss_pdf(double x);
double gauss_cdf(double x);

/// Probabilists' Hermite polynomial He_n(t) by forward recurrence.
double hermite_prob(int n, double t);

/// Normalized Hermite values h_k(t) = He_k(t) / sqrt(k!) for k = 0..n.
/// Stays finite for large n where He_n itself overflows.
RealVector hermite_normalized(int n, double t);

/// Reproducible N(0, sigma^2) samples. One instance per worker; never shared.
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, double sigma);

    double next();
    void fill(std::span<double> out);

    double sigma() const { return sigma_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_;
    double sigma_;
};

/// 20 log10 convention used for gamma and the eta constraints.
double db_to_amplitude(double db);
double amplitude_to_db(double ratio);

} // namespace clipofdm
