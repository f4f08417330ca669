#include "rseg/npy.hpp"

#include <cstring>
#include <fstream>
#include <string>

namespace rseg {

namespace {

constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

std::string dtype_descr(NpyDtype dtype) {
    switch (dtype) {
        case NpyDtype::f32: return "<f4";
        case NpyDtype::u8: return "|u1";
        case NpyDtype::u16: return "<u2";
    }
    throw UsageError("unknown dtype");
}

NpyDtype parse_descr(const std::string& descr, const std::filesystem::path& path) {
    if (descr == "<f4") return NpyDtype::f32;
    if (descr == "|u1" || descr == "<u1") return NpyDtype::u8;
    if (descr == "<u2") return NpyDtype::u16;
    throw LoadError(path.string() + ": unsupported dtype '" + descr +
                    "' (expected little-endian float32 '<f4' or unsigned "
                    "integer '|u1'/'<u2')");
}

// Pulls one quoted or bare token that follows "'key':" in the header dict.
std::string dict_value(const std::string& header, const std::string& key,
                       const std::filesystem::path& path) {
    const std::string quoted = "'" + key + "'";
    std::size_t pos = header.find(quoted);
    if (pos == std::string::npos) {
        throw LoadError(path.string() + ": npy header missing key " + quoted);
    }
    pos = header.find(':', pos + quoted.size());
    if (pos == std::string::npos) {
        throw LoadError(path.string() + ": malformed npy header");
    }
    ++pos;
    while (pos < header.size() && header[pos] == ' ') ++pos;
    if (pos >= header.size()) throw LoadError(path.string() + ": malformed npy header");

    if (header[pos] == '\'') {
        const std::size_t end = header.find('\'', pos + 1);
        if (end == std::string::npos) throw LoadError(path.string() + ": malformed npy header");
        return header.substr(pos + 1, end - pos - 1);
    }
    if (header[pos] == '(') {
        const std::size_t end = header.find(')', pos);
        if (end == std::string::npos) throw LoadError(path.string() + ": malformed npy header");
        return header.substr(pos, end - pos + 1);
    }
    std::size_t end = pos;
    while (end < header.size() && header[end] != ',' && header[end] != '}' &&
           header[end] != ' ') {
        ++end;
    }
    return header.substr(pos, end - pos);
}

std::vector<std::size_t> parse_shape(const std::string& tuple,
                                     const std::filesystem::path& path) {
    std::vector<std::size_t> shape;
    std::size_t pos = 1; // skip '('
    while (pos < tuple.size()) {
        while (pos < tuple.size() && (tuple[pos] == ' ' || tuple[pos] == ',')) ++pos;
        if (pos >= tuple.size() || tuple[pos] == ')') break;
        std::size_t digits = 0;
        std::size_t value = 0;
        while (pos < tuple.size() && tuple[pos] >= '0' && tuple[pos] <= '9') {
            value = value * 10 + (tuple[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) throw LoadError(path.string() + ": malformed shape tuple in npy header");
        shape.push_back(value);
    }
    return shape;
}

} // namespace

std::size_t npy_item_size(NpyDtype dtype) {
    switch (dtype) {
        case NpyDtype::f32: return 4;
        case NpyDtype::u8: return 1;
        case NpyDtype::u16: return 2;
    }
    throw UsageError("unknown dtype");
}

std::size_t NpyArray::element_count() const {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

NpyArray read_npy(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open array file: " + path.string());

    char magic[6];
    std::uint8_t version[2];
    if (!in.read(magic, 6) || std::memcmp(magic, kMagic, 6) != 0) {
        throw LoadError(path.string() + ": not an npy file (bad magic)");
    }
    if (!in.read(reinterpret_cast<char*>(version), 2)) {
        throw LoadError(path.string() + ": truncated npy header");
    }
    if (version[0] != 1 || version[1] != 0) {
        throw LoadError(path.string() + ": unsupported npy version " +
                        std::to_string(version[0]) + "." + std::to_string(version[1]));
    }
    std::uint8_t len_bytes[2];
    if (!in.read(reinterpret_cast<char*>(len_bytes), 2)) {
        throw LoadError(path.string() + ": truncated npy header");
    }
    const std::size_t header_len = len_bytes[0] | (static_cast<std::size_t>(len_bytes[1]) << 8);
    std::string header(header_len, '\0');
    if (!in.read(header.data(), static_cast<std::streamsize>(header_len))) {
        throw LoadError(path.string() + ": truncated npy header");
    }

    NpyArray arr;
    arr.dtype = parse_descr(dict_value(header, "descr", path), path);
    const std::string fortran = dict_value(header, "fortran_order", path);
    if (fortran != "False") {
        throw LoadError(path.string() + ": Fortran-ordered arrays are not supported");
    }
    arr.shape = parse_shape(dict_value(header, "shape", path), path);

    const std::size_t bytes = arr.element_count() * npy_item_size(arr.dtype);
    arr.data.resize(bytes);
    if (!in.read(reinterpret_cast<char*>(arr.data.data()), static_cast<std::streamsize>(bytes))) {
        throw LoadError(path.string() + ": array payload truncated (expected " +
                        std::to_string(bytes) + " bytes)");
    }
    return arr;
}

void write_npy(const std::filesystem::path& path, NpyDtype dtype,
               const std::vector<std::size_t>& shape, const void* data) {
    std::string shape_str = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) shape_str += ", ";
        shape_str += std::to_string(shape[i]);
    }
    if (shape.size() == 1) shape_str += ",";
    shape_str += ")";

    std::string header = "{'descr': '" + dtype_descr(dtype) +
                         "', 'fortran_order': False, 'shape': " + shape_str + ", }";
    // Pad so that magic + version + length field + header is a multiple of 64.
    const std::size_t prefix = 6 + 2 + 2;
    std::size_t total = prefix + header.size() + 1;
    const std::size_t padded = (total + 63) / 64 * 64;
    header.append(padded - total, ' ');
    header += '\n';

    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot write array file: " + path.string());
    out.write(kMagic, 6);
    const std::uint8_t version[2] = {1, 0};
    out.write(reinterpret_cast<const char*>(version), 2);
    const std::size_t header_len = header.size();
    const std::uint8_t len_bytes[2] = {static_cast<std::uint8_t>(header_len & 0xff),
                                       static_cast<std::uint8_t>((header_len >> 8) & 0xff)};
    out.write(reinterpret_cast<const char*>(len_bytes), 2);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));

    std::size_t count = 1;
    for (std::size_t d : shape) count *= d;
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * npy_item_size(dtype)));
    if (!out) throw LoadError("failed writing array file: " + path.string());
}

} // namespace rseg
