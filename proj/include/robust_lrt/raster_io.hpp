#pragma once

#include <filesystem>
#include <vector>

#include "robust_lrt/raster.hpp"

namespace robust_lrt {

// "RLRT", u32 width, u32 height, then width*height float32, all little
// endian, row-major.
void write_raster(const std::filesystem::path& path, const Raster& raster);
Raster read_raster_binary(const std::filesystem::path& path);

// One image row per line, comma separated.
Raster read_raster_csv(const std::filesystem::path& path);
void write_raster_csv(const std::filesystem::path& path, const Raster& raster);

// Binary format when the file starts with the magic, CSV otherwise.
Raster read_raster(const std::filesystem::path& path);

// PGM P5 with maxval 1. Reading also accepts any maxval and thresholds at
// half of it.
void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask read_mask_pgm(const std::filesystem::path& path);

// One number per line; a non-numeric first line is taken as a header.
std::vector<double> read_column_csv(const std::filesystem::path& path);
void write_column_csv(const std::filesystem::path& path, const std::vector<double>& values, const char* header);

} // namespace robust_lrt
