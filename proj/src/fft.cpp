#include "fmcw/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace fmcw {

namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft with
// distinct buffers is. Plans are cached per (size, direction) and created with
// FFTW_ESTIMATE so the chosen algorithm (and hence the bit pattern of results)
// does not depend on runtime measurements.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) {
            return it->second;
        }
        std::vector<cplx> scratch(n);
        auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan =
            fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) {
            throw std::runtime_error("fftw_plan_dft_1d failed");
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

std::vector<cplx> execute(std::span<const cplx> x, int sign) {
    if (x.empty()) {
        return {};
    }
    std::vector<cplx> out(x.begin(), x.end());
    fftw_plan plan = PlanCache::instance().get(out.size(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, ptr, ptr);
    return out;
}

} // namespace

std::vector<cplx> dft_forward(std::span<const cplx> x) { return execute(x, FFTW_FORWARD); }

std::vector<cplx> dft_inverse(std::span<const cplx> x) { return execute(x, FFTW_BACKWARD); }

} // namespace fmcw
