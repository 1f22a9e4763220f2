#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "htensor/errors.hpp"
#include "htensor/tensor.hpp"

namespace htensor {

namespace detail {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view tok, const char* what) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError(std::string("malformed ") + what + ": '" + std::string(tok) + "'");
    return v;
}

inline void put_u32le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

inline std::uint32_t get_u32le(std::string_view in, std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[off + static_cast<std::size_t>(i)])) << (8 * i);
    return v;
}

inline void put_f64le(std::string& out, double d) {
    auto bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

inline double get_f64le(std::string_view in, std::size_t off) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[off + static_cast<std::size_t>(i)])) << (8 * i);
    return std::bit_cast<double>(bits);
}

inline void check_finite(const std::vector<double>& data, bool allow_nonfinite) {
    if (allow_nonfinite) return;
    for (double v : data)
        if (!std::isfinite(v)) throw ParseError("non-finite entry rejected (pass the permissive flag to accept)");
}

}  // namespace detail

inline constexpr std::string_view kBinaryMagic = "HTSR";
inline constexpr std::uint32_t kFormatVersion = 1;

/// Text form: header lines `htensor 1`, `order m`, `dims d1 .. dm`,
/// `layout row-major`, then one shortest-round-trip decimal per entry.
inline std::string encode_text(const DenseTensor& a) {
    std::string out;
    out += "htensor 1\n";
    out += "order " + std::to_string(a.order()) + "\n";
    out += "dims";
    for (int e : a.shape()) out += " " + std::to_string(e);
    out += "\nlayout row-major\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += detail::format_double(a[i]);
        out += '\n';
    }
    return out;
}

inline DenseTensor decode_text(std::string_view text, bool allow_nonfinite = false) {
    std::istringstream in{std::string(text)};
    std::string word;

    auto expect = [&](const char* token, const char* what) {
        if (!(in >> word) || word != token)
            throw ParseError(std::string("malformed header: expected '") + token + "' in " + what + " line");
    };

    expect("htensor", "magic");
    if (!(in >> word)) throw ParseError("malformed header: missing format version");
    if (word != "1") throw ParseError("unsupported format version '" + word + "'");

    expect("order", "order");
    int order = 0;
    if (!(in >> order) || order < 1) throw ParseError("malformed header: bad order");

    expect("dims", "dims");
    Shape shape(static_cast<std::size_t>(order));
    for (int& e : shape)
        if (!(in >> e) || e < 1) throw ParseError("malformed header: bad extent in dims line");

    expect("layout", "layout");
    expect("row-major", "layout");

    std::size_t count = detail::shape_size(shape);
    std::vector<double> data;
    data.reserve(count);
    while (in >> word) data.push_back(detail::parse_double(word, "entry"));
    if (data.size() != count)
        throw ParseError("entry count mismatch: expected " + std::to_string(count) + ", got " +
                         std::to_string(data.size()));
    detail::check_finite(data, allow_nonfinite);
    return DenseTensor(std::move(shape), std::move(data));
}

/// Binary form: magic "HTSR", u32 version, u32 order, extents, f64 entries,
/// all little-endian, row-major.
inline std::string encode_bin(const DenseTensor& a) {
    std::string out;
    out += kBinaryMagic;
    detail::put_u32le(out, kFormatVersion);
    detail::put_u32le(out, static_cast<std::uint32_t>(a.order()));
    for (int e : a.shape()) detail::put_u32le(out, static_cast<std::uint32_t>(e));
    for (std::size_t i = 0; i < a.size(); ++i) detail::put_f64le(out, a[i]);
    return out;
}

inline DenseTensor decode_bin(std::string_view bytes, bool allow_nonfinite = false) {
    if (bytes.size() < 12 || bytes.substr(0, 4) != kBinaryMagic)
        throw ParseError("malformed header: bad magic bytes");
    std::uint32_t version = detail::get_u32le(bytes, 4);
    if (version != kFormatVersion)
        throw ParseError("unsupported format version " + std::to_string(version));
    std::uint32_t order = detail::get_u32le(bytes, 8);
    if (order < 1 || order > 64) throw ParseError("malformed header: bad order");
    std::size_t off = 12;
    if (bytes.size() < off + 4u * order) throw ParseError("malformed header: truncated dims");
    Shape shape(order);
    for (std::uint32_t k = 0; k < order; ++k) {
        std::uint32_t e = detail::get_u32le(bytes, off);
        off += 4;
        if (e < 1 || e > (1u << 30)) throw ParseError("malformed header: bad extent");
        shape[k] = static_cast<int>(e);
    }
    std::size_t count = detail::shape_size(shape);
    if (bytes.size() != off + 8 * count)
        throw ParseError("entry count mismatch: expected " + std::to_string(count) + " entries, got " +
                         std::to_string((bytes.size() - off) / 8) + " (payload " +
                         std::to_string(bytes.size() - off) + " bytes)");
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) data[i] = detail::get_f64le(bytes, off + 8 * i);
    detail::check_finite(data, allow_nonfinite);
    return DenseTensor(std::move(shape), std::move(data));
}

/// True when the path names the binary flavor (.htb).
inline bool binary_path(std::string_view path) {
    return path.size() >= 4 && path.substr(path.size() - 4) == ".htb";
}

inline void write_tensor_file(const std::string& path, const DenseTensor& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    std::string bytes = binary_path(path) ? encode_bin(a) : encode_text(a);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for '" + path + "'");
}

/// Reads either flavor; binary is detected by the magic bytes regardless of
/// extension. Parse failures carry the path in the message.
inline DenseTensor read_tensor_file(const std::string& path, bool allow_nonfinite = false) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    try {
        if (bytes.size() >= 4 && std::string_view(bytes).substr(0, 4) == kBinaryMagic)
            return decode_bin(bytes, allow_nonfinite);
        return decode_text(bytes, allow_nonfinite);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace htensor
