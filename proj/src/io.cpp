#include "stf/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

namespace stf {

namespace {

[[noreturn]] void parse_fail(const std::string& what, std::size_t offset) {
    throw io_error(what + " (byte offset " + std::to_string(offset) + ")");
}

// Matches the raw format cap: u64 dims are accepted but the decoded raster
// must stay well under addressable memory.
constexpr std::uint64_t kMaxElements = 1ULL << 33;

} // namespace

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw io_error("read failure on " + path);
    return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failure on " + path);
}

void write_file(const std::string& path, const std::string& text) {
    write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// ---------------------------------------------------------------------------
// PGM

namespace {

struct PnmScanner {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            const std::uint8_t c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    }

    long long next_int(const char* what) {
        skip_space_and_comments();
        if (pos >= bytes.size()) parse_fail(std::string("pgm: missing ") + what, pos);
        if (bytes[pos] < '0' || bytes[pos] > '9')
            parse_fail(std::string("pgm: malformed ") + what, pos);
        long long v = 0;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + (bytes[pos] - '0');
            if (v > (1LL << 40)) parse_fail(std::string("pgm: absurd ") + what, pos);
            ++pos;
        }
        return v;
    }
};

} // namespace

ScalarField parse_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        parse_fail("pgm: not a P5 stream", 0);
    PnmScanner sc{bytes, 2};
    const long long w = sc.next_int("width");
    const long long h = sc.next_int("height");
    const long long maxval = sc.next_int("maxval");
    if (w < 1 || h < 1) parse_fail("pgm: non-positive dimensions", sc.pos);
    if (w * h > static_cast<long long>(kMaxElements)) parse_fail("pgm: dimensions overflow guard", sc.pos);
    if (maxval < 1 || maxval > 65535) parse_fail("pgm: maxval out of range", sc.pos);
    if (sc.pos >= bytes.size()) parse_fail("pgm: missing payload", sc.pos);
    const std::uint8_t sep = bytes[sc.pos];
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
        parse_fail("pgm: expected single whitespace before payload", sc.pos);
    ++sc.pos;

    const bool wide = maxval > 255;
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * (wide ? 2 : 1);
    if (bytes.size() - sc.pos < need) parse_fail("pgm: truncated payload", bytes.size());

    ScalarField f(Dims{static_cast<int>(h), static_cast<int>(w)});
    const double scale = 1.0 / static_cast<double>(maxval);
    const std::uint8_t* p = bytes.data() + sc.pos;
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::uint32_t raw;
        if (wide) {
            raw = (static_cast<std::uint32_t>(p[2 * i]) << 8) | p[2 * i + 1]; // big-endian
        } else {
            raw = p[i];
        }
        f.values[i] = raw * scale;
    }
    return f;
}

ScalarField read_pgm(const std::string& path) {
    const auto bytes = read_file(path);
    return parse_pgm(bytes);
}

void write_pgm(const ScalarField& f, const std::string& path, int maxval) {
    if (f.dims.size() != 2) throw parameter_error("write_pgm: 2-D fields only");
    if (maxval < 1 || maxval > 65535) throw parameter_error("write_pgm: maxval out of range");
    std::string header = "P5\n" + std::to_string(f.dims[1]) + " " + std::to_string(f.dims[0]) +
                         "\n" + std::to_string(maxval) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const bool wide = maxval > 255;
    for (double v : f.values) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        const auto raw = static_cast<std::uint32_t>(std::lround(clamped * maxval));
        if (wide) {
            out.push_back(static_cast<std::uint8_t>(raw >> 8));
            out.push_back(static_cast<std::uint8_t>(raw & 0xFF));
        } else {
            out.push_back(static_cast<std::uint8_t>(raw));
        }
    }
    write_file(path, out);
}

// ---------------------------------------------------------------------------
// STF1 raw

namespace {

template <typename T>
void append_le(std::vector<std::uint8_t>& out, T v) {
    for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<std::uint8_t>((v >> (8 * b)) & 0xFF));
}

template <typename T>
T read_le(std::span<const std::uint8_t> bytes, std::size_t& pos, const char* what) {
    if (bytes.size() - pos < sizeof(T)) parse_fail(std::string("raw: truncated ") + what, pos);
    T v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<T>(bytes[pos + b]) << (8 * b);
    pos += sizeof(T);
    return v;
}

static_assert(sizeof(float) == 4);

} // namespace

std::vector<std::uint8_t> serialize_raw(const RasterData& r) {
    if (r.dims.empty() || r.dims.size() > 8) throw parameter_error("raw: ndims must be 1..8");
    if (r.planes < 1) throw parameter_error("raw: planes must be >= 1");
    if (r.tag.size() > 4096) throw parameter_error("raw: tag too long");
    const std::size_t count = element_count(r.dims);
    if (r.payload.size() != count * r.planes) throw parameter_error("raw: payload size mismatch");

    std::vector<std::uint8_t> out{'S', 'T', 'F', '1'};
    out.push_back(0); // dtype f32
    out.push_back(static_cast<std::uint8_t>(r.dims.size()));
    append_le<std::uint16_t>(out, static_cast<std::uint16_t>(r.tag.size()));
    append_le<std::uint32_t>(out, r.planes);
    for (int d : r.dims) append_le<std::uint64_t>(out, static_cast<std::uint64_t>(d));
    out.insert(out.end(), r.tag.begin(), r.tag.end());
    const std::size_t payload_off = out.size();
    out.resize(payload_off + 4 * r.payload.size());
    for (std::size_t i = 0; i < r.payload.size(); ++i) {
        const auto bits = std::bit_cast<std::uint32_t>(r.payload[i]);
        for (std::size_t b = 0; b < 4; ++b)
            out[payload_off + 4 * i + b] = static_cast<std::uint8_t>((bits >> (8 * b)) & 0xFF);
    }
    return out;
}

RasterData parse_raw(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    if (bytes.size() < 4 || bytes[0] != 'S' || bytes[1] != 'T' || bytes[2] != 'F' || bytes[3] != '1')
        parse_fail("raw: bad magic", 0);
    pos = 4;
    const auto dtype = read_le<std::uint8_t>(bytes, pos, "dtype");
    if (dtype != 0) parse_fail("raw: unsupported dtype", pos - 1);
    const auto ndims = read_le<std::uint8_t>(bytes, pos, "ndims");
    if (ndims < 1 || ndims > 8) parse_fail("raw: ndims out of range", pos - 1);
    const auto taglen = read_le<std::uint16_t>(bytes, pos, "tag length");
    if (taglen > 4096) parse_fail("raw: tag length out of range", pos - 2);
    const auto planes = read_le<std::uint32_t>(bytes, pos, "planes");
    if (planes < 1 || planes > (1u << 20)) parse_fail("raw: planes out of range", pos - 4);

    RasterData r;
    r.planes = planes;
    std::uint64_t count = 1;
    for (int a = 0; a < ndims; ++a) {
        const auto d = read_le<std::uint64_t>(bytes, pos, "extent");
        if (d == 0 || d > kMaxElements) parse_fail("raw: extent out of range", pos - 8);
        if (count > kMaxElements / d) parse_fail("raw: extent product overflow guard", pos - 8);
        count *= d;
        r.dims.push_back(static_cast<int>(d));
    }
    if (count * planes > kMaxElements) parse_fail("raw: payload overflow guard", pos);

    if (bytes.size() - pos < taglen) parse_fail("raw: truncated tag", pos);
    r.tag.assign(reinterpret_cast<const char*>(bytes.data() + pos), taglen);
    pos += taglen;

    const std::uint64_t payload_count = count * planes;
    if (bytes.size() - pos != payload_count * 4) parse_fail("raw: payload length mismatch", pos);
    r.payload.resize(payload_count);
    for (std::size_t i = 0; i < payload_count; ++i) {
        std::uint32_t bits = 0;
        for (std::size_t b = 0; b < 4; ++b)
            bits |= static_cast<std::uint32_t>(bytes[pos + 4 * i + b]) << (8 * b);
        r.payload[i] = std::bit_cast<float>(bits);
    }
    return r;
}

RasterData read_raw(const std::string& path) {
    const auto bytes = read_file(path);
    return parse_raw(bytes);
}

void write_raw(const RasterData& r, const std::string& path) {
    const auto bytes = serialize_raw(r);
    write_file(path, bytes);
}

RasterData to_raster(const ScalarField& f, const std::string& tag) {
    RasterData r;
    r.dims = f.dims;
    r.planes = 1;
    r.tag = tag;
    r.payload.assign(f.values.begin(), f.values.end());
    return r;
}

RasterData to_raster(const TensorField& tf) {
    RasterData r;
    r.dims = tf.dims;
    r.planes = static_cast<std::uint32_t>(tf.plane_count());
    r.tag = tf.tag;
    r.payload.assign(tf.planes.begin(), tf.planes.end());
    return r;
}

RasterData to_raster(std::span<const ResponseField> q, const std::string& tag) {
    if (q.empty()) throw parameter_error("to_raster: empty response list");
    RasterData r;
    r.dims = q.front().dims;
    r.planes = static_cast<std::uint32_t>(q.size());
    r.tag = tag;
    r.payload.reserve(q.size() * q.front().values.size());
    for (const ResponseField& rf : q) {
        if (rf.dims != r.dims) throw parameter_error("to_raster: response grids differ");
        r.payload.insert(r.payload.end(), rf.values.begin(), rf.values.end());
    }
    return r;
}

RasterData to_raster(const VectorField& v, const std::string& tag) {
    RasterData r;
    r.dims = v.dims;
    r.planes = static_cast<std::uint32_t>(v.ncomp);
    r.tag = tag;
    r.payload.assign(v.planes.begin(), v.planes.end());
    return r;
}

ScalarField raster_to_scalar(const RasterData& r) {
    if (r.planes != 1) throw io_error("raster: expected a single plane, got " + std::to_string(r.planes));
    ScalarField f(r.dims);
    for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = r.payload[i];
    return f;
}

TensorField raster_to_tensor(const RasterData& r) {
    // planes = N(N+1)/2 determines the matrix order.
    int order = 0;
    while (SymMat::packed_size(order) < r.planes) ++order;
    if (SymMat::packed_size(order) != r.planes || order < 2)
        throw io_error("raster: plane count " + std::to_string(r.planes) + " is not a packed symmetric size");
    TensorField tf(r.dims, order, r.tag);
    for (std::size_t i = 0; i < tf.planes.size(); ++i) tf.planes[i] = r.payload[i];
    return tf;
}

std::vector<ResponseField> raster_to_responses(const RasterData& r) {
    const std::size_t npix = element_count(r.dims);
    std::vector<ResponseField> out(r.planes);
    for (std::uint32_t k = 0; k < r.planes; ++k) {
        out[k].dims = r.dims;
        out[k].label = "q" + std::to_string(k + 1);
        out[k].values.assign(r.payload.begin() + static_cast<std::ptrdiff_t>(k * npix),
                             r.payload.begin() + static_cast<std::ptrdiff_t>((k + 1) * npix));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orientation PPM

namespace {

void hsv_to_rgb(double h_deg, double s, double v, std::uint8_t rgb[3]) {
    h_deg = std::fmod(h_deg, 360.0);
    if (h_deg < 0.0) h_deg += 360.0;
    const double c = v * s;
    const double hp = h_deg / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1)
        r = c, g = x;
    else if (hp < 2)
        r = x, g = c;
    else if (hp < 3)
        g = c, b = x;
    else if (hp < 4)
        g = x, b = c;
    else if (hp < 5)
        r = x, b = c;
    else
        r = c, b = x;
    const double m = v - c;
    rgb[0] = static_cast<std::uint8_t>(std::lround(std::clamp(r + m, 0.0, 1.0) * 255.0));
    rgb[1] = static_cast<std::uint8_t>(std::lround(std::clamp(g + m, 0.0, 1.0) * 255.0));
    rgb[2] = static_cast<std::uint8_t>(std::lround(std::clamp(b + m, 0.0, 1.0) * 255.0));
}

} // namespace

void write_orientation_ppm(const ScalarField& angle, const ScalarField& certainty,
                           const std::string& path) {
    if (angle.dims.size() != 2) throw parameter_error("write_orientation_ppm: 2-D fields only");
    if (angle.dims != certainty.dims) throw parameter_error("write_orientation_ppm: field dims differ");
    std::string header = "P6\n" + std::to_string(angle.dims[1]) + " " + std::to_string(angle.dims[0]) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (std::size_t i = 0; i < angle.size(); ++i) {
        std::uint8_t rgb[3];
        // Orientation is pi-periodic: hue runs twice around per half turn.
        hsv_to_rgb(2.0 * angle.values[i] * 180.0 / kPi, 1.0, std::clamp(certainty.values[i], 0.0, 1.0), rgb);
        out.insert(out.end(), rgb, rgb + 3);
    }
    write_file(path, out);
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::row(std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += csv_escape(cells[i]);
    }
    out_ += "\r\n";
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
    row(std::span<const std::string>(cells.begin(), cells.size()));
}

void CsvWriter::write(const std::string& path) const {
    write_file(path, out_);
}

} // namespace stf
