#pragma once

namespace stf {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRasterFormat = "STF1";
inline constexpr int kCsvFormatVersion = 1;

} // namespace stf
