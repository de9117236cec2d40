#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stf/field.hpp"

namespace stf {

// ---------------------------------------------------------------------------
// PGM (P5 binary, 8- or 16-bit). Values are scaled to [0,1] on read; writers
// clamp to [0,1] and quantize. 16-bit payloads are big-endian per the format.

ScalarField read_pgm(const std::string& path);
ScalarField parse_pgm(std::span<const std::uint8_t> bytes);
void write_pgm(const ScalarField& f, const std::string& path, int maxval = 255);

// ---------------------------------------------------------------------------
// STF1 raw raster: little-endian header
//   "STF1" | u8 dtype (0 = f32) | u8 ndims | u16 tag length | u32 planes |
//   u64 extent per axis | tag bytes
// followed by plane-major float32 little-endian payload. Round trips are
// bitwise exact at f32 precision; parsers validate sizes and reject rather
// than crash on malformed input.

struct RasterData {
    Dims dims;
    std::uint32_t planes = 0;
    std::string tag;
    std::vector<float> payload; // plane-major
};

RasterData read_raw(const std::string& path);
RasterData parse_raw(std::span<const std::uint8_t> bytes);
void write_raw(const RasterData& r, const std::string& path);
std::vector<std::uint8_t> serialize_raw(const RasterData& r);

RasterData to_raster(const ScalarField& f, const std::string& tag = "scalar");
RasterData to_raster(const TensorField& tf);
RasterData to_raster(std::span<const ResponseField> q, const std::string& tag);
RasterData to_raster(const VectorField& v, const std::string& tag);

ScalarField raster_to_scalar(const RasterData& r);
TensorField raster_to_tensor(const RasterData& r); // matrix order inferred from plane count
std::vector<ResponseField> raster_to_responses(const RasterData& r);

// ---------------------------------------------------------------------------
// Orientation visualization: P6 PPM with hue = 2*angle (orientation is
// pi-periodic), saturation 1, value = certainty.

void write_orientation_ppm(const ScalarField& angle, const ScalarField& certainty,
                           const std::string& path);

// ---------------------------------------------------------------------------
// CSV: RFC-4180 style rows, '.' decimal separator independent of locale.

std::string csv_escape(const std::string& field);
std::string format_double(double v); // shortest round-trip representation

class CsvWriter {
public:
    void row(std::span<const std::string> cells);
    void row(std::initializer_list<std::string> cells);
    const std::string& str() const { return out_; }
    void write(const std::string& path) const;

private:
    std::string out_;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
void write_file(const std::string& path, const std::string& text);

} // namespace stf
