#pragma once

#include <complex>
#include <span>
#include <vector>

// Thin FFTW wrapper. Forward transforms carry the 1/N prefactor, inverse
// transforms carry none, so inverse_real(forward_real(x), n) == x.
namespace couplemap::fourier {

using Complex = std::complex<double>;

/// Non-redundant half spectrum (n/2 + 1 bins) of a real signal, scaled by 1/n.
std::vector<Complex> forward_real(std::span<const double> x);

/// Real signal of length n from its half spectrum, without any prefactor.
std::vector<double> inverse_real(std::span<const Complex> half, std::size_t n);

/// Unnormalized complex transform; sign = -1 for exp(-i...) and +1 for exp(+i...).
std::vector<Complex> transform(std::span<const Complex> x, int sign);

}  // namespace couplemap::fourier
