#include "stf/grid.hpp"

#include <limits>
#include <sstream>

namespace stf {

std::size_t element_count(const Dims& dims) {
    if (dims.empty()) throw parameter_error("grid: empty dimension list");
    std::size_t n = 1;
    for (int d : dims) {
        if (d < 1) throw parameter_error("grid: non-positive extent " + std::to_string(d));
        const auto ud = static_cast<std::size_t>(d);
        if (n > std::numeric_limits<std::size_t>::max() / ud)
            throw parameter_error("grid: extent product overflows");
        n *= ud;
    }
    return n;
}

bool all_even(const Dims& dims) {
    for (int d : dims)
        if (d % 2 != 0) return false;
    return true;
}

std::string dims_to_string(const Dims& dims) {
    std::ostringstream os;
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (a) os << 'x';
        os << dims[a];
    }
    return os.str();
}

std::vector<std::size_t> row_major_strides(const Dims& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (int a = static_cast<int>(dims.size()) - 2; a >= 0; --a) {
        const auto ua = static_cast<std::size_t>(a);
        s[ua] = s[ua + 1] * static_cast<std::size_t>(dims[ua + 1]);
    }
    return s;
}

void flat_to_coords(std::size_t flat, const Dims& dims, int* coords) {
    for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
        const auto ua = static_cast<std::size_t>(a);
        const auto m = static_cast<std::size_t>(dims[ua]);
        coords[ua] = static_cast<int>(flat % m);
        flat /= m;
    }
}

std::size_t coords_to_flat(const int* coords, const Dims& dims) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dims.size(); ++a)
        flat = flat * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(coords[a]);
    return flat;
}

} // namespace stf
