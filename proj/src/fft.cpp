#include "stf/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace stf::fft {

namespace {

// FFTW's planner is not thread-safe; executing distinct buffers through a
// cached plan is. Plans use FFTW_ESTIMATE so planning is deterministic, and
// FFTW_UNALIGNED so one plan serves any caller-owned buffer.
class PlanCache {
public:
    fftw_plan get(const Dims& dims, int sign, cplx* in, cplx* out) {
        std::scoped_lock lock(mu_);
        const auto key = std::make_pair(dims, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<int> n(dims.begin(), dims.end());
        fftw_plan p = fftw_plan_dft(static_cast<int>(n.size()), n.data(),
                                    reinterpret_cast<fftw_complex*>(in),
                                    reinterpret_cast<fftw_complex*>(out),
                                    sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::pair<Dims, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

} // namespace

void transform(const Dims& dims, const cplx* in, cplx* out, int sign) {
    const std::size_t count = element_count(dims);
    // Out-of-place c2c preserves the input; the const_cast never writes.
    cplx* in_mut = const_cast<cplx*>(in);
    std::vector<cplx> tmp;
    if (in == out) {
        tmp.assign(in, in + count);
        in_mut = tmp.data();
    }
    fftw_plan p = cache().get(dims, sign, in_mut, out);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in_mut), reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / std::sqrt(static_cast<double>(count));
    for (std::size_t i = 0; i < count; ++i) out[i] *= scale;
}

std::vector<cplx> forward(const ScalarField& f) {
    const std::size_t count = element_count(f.dims);
    std::vector<cplx> in(count), out(count);
    for (std::size_t i = 0; i < count; ++i) in[i] = cplx(f.values[i], 0.0);
    transform(f.dims, in.data(), out.data(), -1);
    return out;
}

ScalarField inverse_to_real(const Dims& dims, const std::vector<cplx>& spectrum, bool periodic) {
    const std::size_t count = element_count(dims);
    if (spectrum.size() != count) throw parameter_error("fft: spectrum size does not match dims");
    std::vector<cplx> out(count);
    transform(dims, spectrum.data(), out.data(), +1);
    ScalarField f(dims, periodic);
    for (std::size_t i = 0; i < count; ++i) f.values[i] = out[i].real();
    return f;
}

} // namespace stf::fft
