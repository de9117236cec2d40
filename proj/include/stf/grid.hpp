#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "stf/errors.hpp"

namespace stf {

inline constexpr double kPi = std::numbers::pi;

/// Per-axis grid extents, outermost axis first. Storage is row-major with the
/// last axis fastest.
using Dims = std::vector<int>;

/// Product of extents with overflow/validity checks.
std::size_t element_count(const Dims& dims);

bool all_even(const Dims& dims);

std::string dims_to_string(const Dims& dims);

/// Signed DFT bin index for storage position i on an axis of extent m.
/// Bins run over [-m/2, m/2) for even m and [-(m-1)/2, (m-1)/2] for odd m.
inline int freq_bin(int i, int m) {
    return (i <= (m - 1) / 2) ? i : i - m;
}

/// Angular frequency in radians per sample for storage position i.
inline double freq_rad(int i, int m) {
    return 2.0 * kPi * static_cast<double>(freq_bin(i, m)) / static_cast<double>(m);
}

/// Row-major strides (last axis has stride 1).
std::vector<std::size_t> row_major_strides(const Dims& dims);

/// Mixed-radix increment of a coordinate vector; returns false after the last
/// coordinate wraps around to all zeros.
inline bool next_coord(std::vector<int>& c, const Dims& dims) {
    for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
        if (++c[static_cast<std::size_t>(a)] < dims[static_cast<std::size_t>(a)]) return true;
        c[static_cast<std::size_t>(a)] = 0;
    }
    return false;
}

/// Decomposes a flat row-major index into per-axis coordinates.
void flat_to_coords(std::size_t flat, const Dims& dims, int* coords);

std::size_t coords_to_flat(const int* coords, const Dims& dims);

} // namespace stf
