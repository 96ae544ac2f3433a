#include "couplemap/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "couplemap/error.hpp"
#include "couplemap/fourier.hpp"

namespace couplemap {

void FgnSpec::validate() const {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw Error(ErrorKind::InvalidArgument, "hurst must lie in (0, 1), got " + std::to_string(hurst));
    if (length < 16) throw Error(ErrorKind::LengthTooShort, "fGn length must be >= 16");
}

double fgn_autocovariance(double hurst, std::int64_t k) {
    const double a = std::abs(static_cast<double>(k));
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(a + 1.0, h2) - 2.0 * std::pow(a, h2) + std::pow(std::abs(a - 1.0), h2));
}

namespace {

constexpr double kEigenTolerance = -1e-8;

// Durbin-Levinson form of the Hosking recursion.
std::vector<double> hosking(const FgnSpec& spec, std::mt19937_64& rng) {
    const std::size_t n = spec.length;
    std::normal_distribution<double> normal;
    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(spec.hurst, static_cast<std::int64_t>(k));

    std::vector<double> x(n);
    std::vector<double> phi(n, 0.0);
    std::vector<double> prev(n, 0.0);
    double v = gamma[0];
    x[0] = std::sqrt(v) * normal(rng);
    for (std::size_t t = 1; t < n; ++t) {
        double num = gamma[t];
        for (std::size_t j = 1; j < t; ++j) num -= prev[j] * gamma[t - j];
        const double k = num / v;
        phi[t] = k;
        for (std::size_t j = 1; j < t; ++j) phi[j] = prev[j] - k * prev[t - j];
        v *= (1.0 - k * k);
        if (!(v > 0.0)) throw Error(ErrorKind::EmbeddingFailure, "Hosking innovation variance vanished");
        double m = 0.0;
        for (std::size_t j = 1; j <= t; ++j) m += phi[j] * x[t - j];
        x[t] = m + std::sqrt(v) * normal(rng);
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(t) + 1, prev.begin());
    }
    return x;
}

}  // namespace

std::vector<double> fgn_sample(const FgnSpec& spec, FgnMethod method) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    if (method == FgnMethod::hosking) return hosking(spec, rng);

    const std::size_t n = spec.length;
    const std::size_t m = 2 * n;
    std::vector<fourier::Complex> row(m);
    for (std::size_t j = 0; j <= n; ++j) row[j] = fgn_autocovariance(spec.hurst, static_cast<std::int64_t>(j));
    for (std::size_t j = 1; j < n; ++j) row[m - j] = row[j];
    const auto eig = fourier::transform(row, -1);

    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double l = eig[k].real();
        if (l < kEigenTolerance) return hosking(spec, rng);
        lambda[k] = std::max(l, 0.0);
    }

    // y = F(sqrt(lambda/m) * (z1 + i z2)) has real and imaginary parts that are
    // independent draws with the target covariance; keep the real part.
    std::normal_distribution<double> normal;
    std::vector<fourier::Complex> w(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double scale = std::sqrt(lambda[k] / static_cast<double>(m));
        const double re = normal(rng);
        const double im = normal(rng);
        w[k] = fourier::Complex(scale * re, scale * im);
    }
    const auto y = fourier::transform(w, -1);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = y[t].real();
    return x;
}

TimeSeries generate_fgn(const FgnSpec& spec) {
    return standardize(TimeSeries::indexed(fgn_sample(spec)));
}

Spectrum spectrum_of(const TimeSeries& s) {
    const auto v = s.values();
    const std::size_t n = v.size();
    const auto half = fourier::forward_real(v);
    Spectrum sp;
    sp.amplitudes.resize(n);
    sp.phases.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto c = k < half.size() ? half[k] : std::conj(half[n - k]);
        sp.amplitudes[k] = std::abs(c);
        double ph = std::arg(c);
        if (ph == -std::numbers::pi) ph = std::numbers::pi;
        sp.phases[k] = ph;
    }
    sp.hermitian = true;
    return sp;
}

TimeSeries surrogate(const TimeSeries& s, std::uint64_t seed) {
    const auto v = s.values();
    const std::size_t n = v.size();
    if (n < 4) throw Error(ErrorKind::LengthTooShort, "surrogate needs at least 4 points");
    std::vector<std::int64_t> ts(s.timestamps().begin(), s.timestamps().end());

    const auto [lo, hi] = std::ranges::minmax(v);
    if (lo == hi) return s;

    auto half = fourier::forward_real(v);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> turn(0.0, 2.0 * std::numbers::pi);
    // Bins strictly between DC and Nyquist; their mirrors follow by symmetry.
    const std::size_t last = (n % 2 == 0) ? n / 2 - 1 : n / 2;
    for (std::size_t k = 1; k <= last; ++k) {
        const double phase = std::numbers::pi - turn(rng);
        half[k] = std::polar(std::abs(half[k]), phase);
    }
    auto out = fourier::inverse_real(half, n);
    return TimeSeries(s.axis(), std::move(ts), std::move(out), s.kind());
}

double estimate_hurst(const TimeSeries& s) {
    const auto v = s.values();
    if (v.size() < 256) throw Error(ErrorKind::LengthTooShort, "Hurst estimate needs at least 256 points");
    constexpr std::array<std::size_t, 5> block_sizes{8, 16, 32, 64, 128};
    std::array<double, 5> lx{};
    std::array<double, 5> ly{};
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        const std::size_t m = block_sizes[b];
        const std::size_t blocks = v.size() / m;
        std::vector<double> means(blocks);
        for (std::size_t i = 0; i < blocks; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += v[i * m + j];
            means[i] = acc / static_cast<double>(m);
        }
        const double sd = population_std(means);
        if (!(sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "block means have zero variance");
        lx[b] = std::log(static_cast<double>(m));
        ly[b] = 2.0 * std::log(sd);
    }
    const double mx = mean(lx);
    const double my = mean(ly);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t b = 0; b < lx.size(); ++b) {
        sxy += (lx[b] - mx) * (ly[b] - my);
        sxx += (lx[b] - mx) * (lx[b] - mx);
    }
    return 1.0 + (sxy / sxx) / 2.0;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    return h;
}

}  // namespace couplemap
