#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "couplemap/series.hpp"

namespace couplemap {

struct FgnSpec {
    double hurst = 0.5;
    std::size_t length = 2000;
    std::uint64_t seed = 0;

    void validate() const;  // 0 < hurst < 1, length >= 16
};

enum class FgnMethod { circulant, hosking };

/// Autocovariance of unit-variance fGn at integer lag k.
double fgn_autocovariance(double hurst, std::int64_t k);

/// Zero-mean, unit-variance (in expectation) fGn sample without the final
/// standardization pass. Circulant embedding falls back to the Hosking
/// recursion when an embedding eigenvalue is below -1e-8.
std::vector<double> fgn_sample(const FgnSpec& spec, FgnMethod method = FgnMethod::circulant);

/// Standardized fGn series indexed 0..length-1. Deterministic per seed.
TimeSeries generate_fgn(const FgnSpec& spec);

/// Amplitude/phase view of the full DFT (1/N forward normalization).
struct Spectrum {
    std::vector<double> amplitudes;
    std::vector<double> phases;  // in (-pi, pi]
    bool hermitian = false;

    std::size_t size() const noexcept { return amplitudes.size(); }
};

Spectrum spectrum_of(const TimeSeries& s);

/// Fourier phase-randomized surrogate. Keeps every DFT amplitude, the DC bin
/// and (for even length) the Nyquist bin; all other phases are redrawn
/// uniformly on (-pi, pi] with Hermitian symmetry.
TimeSeries surrogate(const TimeSeries& s, std::uint64_t seed);

/// Aggregated-variance Hurst estimate over block sizes 8..128.
double estimate_hurst(const TimeSeries& s);

/// Stable 64-bit seed derivation (splitmix64 chain).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts);

}  // namespace couplemap
