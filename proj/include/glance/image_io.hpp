#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "glance/image.hpp"

namespace glance {

/// Reads a P2 (ASCII) or P5 (binary) graymap. Samples are rescaled to
/// [0, 255] when maxval differs from 255, rounding half away from zero.
/// 16-bit P5 samples are big-endian, as netpbm prescribes.
auto load_pgm(std::span<const std::byte> bytes) -> GrayImage;
auto load_pgm(std::string_view bytes) -> GrayImage;

/// Writes a binary P5 graymap with maxval 255.
auto to_pgm(const GrayImage &img) -> std::string;

/// Grid CSV: one image row per line, comma-separated integers in [0, 255].
auto load_grid_csv(std::string_view text) -> GrayImage;
auto to_grid_csv(const GrayImage &img) -> std::string;

auto read_file(const std::filesystem::path &path) -> std::string;
void write_file(const std::filesystem::path &path, std::string_view contents);

/// Dispatches on content: a leading 'P' selects the PGM reader, anything
/// else is parsed as grid CSV.
auto load_image(const std::filesystem::path &path) -> GrayImage;

} // namespace glance
