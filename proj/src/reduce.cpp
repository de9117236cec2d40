#include "stf/reduce.hpp"

namespace stf {

namespace {
constexpr std::size_t kBlock = 4096;
}

double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

std::vector<double> blocked_sum(std::size_t count, std::size_t nacc,
                                const std::function<void(std::size_t, double*)>& term) {
    const std::size_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<double> partials(nblocks * nacc, 0.0);

#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t ub = static_cast<std::size_t>(b);
        const std::size_t begin = ub * kBlock;
        const std::size_t end = (begin + kBlock < count) ? begin + kBlock : count;
        std::vector<double> t(nacc);
        double* acc = partials.data() + ub * nacc;
        for (std::size_t i = begin; i < end; ++i) {
            term(i, t.data());
            for (std::size_t a = 0; a < nacc; ++a) acc[a] += t[a];
        }
    }

    std::vector<double> out(nacc, 0.0);
    std::vector<double> column(nblocks);
    for (std::size_t a = 0; a < nacc; ++a) {
        for (std::size_t b = 0; b < nblocks; ++b) column[b] = partials[b * nacc + a];
        out[a] = pairwise_sum(column);
    }
    return out;
}

} // namespace stf
