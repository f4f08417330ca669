#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rseg/errors.hpp"

namespace rseg {

enum class NpyDtype { f32, u8, u16 };

std::size_t npy_item_size(NpyDtype dtype);

// One dense C-contiguous little-endian array, as stored in a .npy file
// (format version 1.0).
struct NpyArray {
    NpyDtype dtype = NpyDtype::f32;
    std::vector<std::size_t> shape;
    std::vector<std::uint8_t> data; // raw little-endian items

    std::size_t element_count() const;
    const float* as_f32() const { return reinterpret_cast<const float*>(data.data()); }
    const std::uint8_t* as_u8() const { return data.data(); }
    const std::uint16_t* as_u16() const {
        return reinterpret_cast<const std::uint16_t*>(data.data());
    }
};

// Throws LoadError on malformed headers, unsupported dtypes, Fortran order,
// or truncated payloads.
NpyArray read_npy(const std::filesystem::path& path);

void write_npy(const std::filesystem::path& path, NpyDtype dtype,
               const std::vector<std::size_t>& shape, const void* data);

} // namespace rseg
