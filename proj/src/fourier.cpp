#include "couplemap/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

#include "couplemap/error.hpp"

namespace couplemap::fourier {
namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

template <typename T>
struct FftwDeleter {
    void operator()(T* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

template <typename MakePlan>
Plan make_plan(MakePlan&& make) {
    std::lock_guard lock(planner_mutex());
    fftw_plan p = make();
    if (p == nullptr) throw Error(ErrorKind::InvalidArgument, "FFTW could not create a plan");
    return Plan(p);
}

}  // namespace

std::vector<Complex> forward_real(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t half = n / 2 + 1;
    auto in = allocate<double>(n);
    auto out = allocate<fftw_complex>(half);
    Plan plan = make_plan([&] { return fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE); });
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute(plan.get());
    std::vector<Complex> result(half);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < half; ++k) result[k] = Complex(out[k][0] * scale, out[k][1] * scale);
    return result;
}

std::vector<double> inverse_real(std::span<const Complex> half, std::size_t n) {
    if (n == 0) return {};
    if (half.size() != n / 2 + 1) throw Error(ErrorKind::InvalidArgument, "half spectrum has wrong length");
    auto in = allocate<fftw_complex>(half.size());
    auto out = allocate<double>(n);
    Plan plan = make_plan([&] { return fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE); });
    for (std::size_t k = 0; k < half.size(); ++k) {
        in[k][0] = half[k].real();
        in[k][1] = half[k].imag();
    }
    fftw_execute(plan.get());
    return std::vector<double>(out.get(), out.get() + n);
}

std::vector<Complex> transform(std::span<const Complex> x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    auto in = allocate<fftw_complex>(n);
    auto out = allocate<fftw_complex>(n);
    const int dir = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
    Plan plan = make_plan([&] { return fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), dir, FFTW_ESTIMATE); });
    for (std::size_t k = 0; k < n; ++k) {
        in[k][0] = x[k].real();
        in[k][1] = x[k].imag();
    }
    fftw_execute(plan.get());
    std::vector<Complex> result(n);
    for (std::size_t k = 0; k < n; ++k) result[k] = Complex(out[k][0], out[k][1]);
    return result;
}

}  // namespace couplemap::fourier
