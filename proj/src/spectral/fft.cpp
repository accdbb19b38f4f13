#include "kpb/spectral/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace kpb::spectral::fft {

namespace {

// Key: (kind, n0, n1, sign). kind 0 = 2D transform, 1 = strided batch.
using PlanKey = std::tuple<int, std::size_t, std::size_t, int>;

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const PlanKey& key) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const auto [kind, n0, n1, sign] = key;
        std::vector<cplx> scratch(n0 * n1);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = nullptr;
        if (kind == 0) {
            plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), buf, buf, sign, flags);
        } else {
            const int n[] = {static_cast<int>(n0)};
            plan = fftw_plan_many_dft(1, n, static_cast<int>(n1), buf, nullptr, static_cast<int>(n1), 1,
                                      buf, nullptr, static_cast<int>(n1), 1, sign, flags);
        }
        if (plan == nullptr) throw std::runtime_error("fft: FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

int fftw_sign(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void transform_2d(std::span<cplx> data, std::size_t nx, std::size_t ny, Direction dir) {
    if (data.size() != nx * ny) throw std::invalid_argument("fft::transform_2d: size mismatch");
    fftw_plan plan = cache().get({0, nx, ny, fftw_sign(dir)});
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

void transform_strided(std::span<cplx> data, std::size_t length, std::size_t stride, Direction dir) {
    if (data.size() != length * stride) {
        throw std::invalid_argument("fft::transform_strided: size mismatch");
    }
    fftw_plan plan = cache().get({1, length, stride, fftw_sign(dir)});
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace kpb::spectral::fft
