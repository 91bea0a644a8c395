#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seawake/frame.hpp"

namespace seawake::io {

// 8-bit PNG decode to a Frame (gray -> 1 channel, color -> 3, alpha dropped,
// 16-bit depth reduced). Throws Error(io) on missing/undecodable files.
flow::Frame read_png(const std::filesystem::path& path);

// 8-bit PNG encode; 1-channel frames become grayscale PNGs, 3-channel RGB.
// Samples are clamped to [0, 1] and quantized to round(v * 255).
void write_png(const flow::Frame& frame, const std::filesystem::path& path);

// frame_*.png files in dir, sorted by name. Throws Error(io) when the
// directory cannot be read.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace seawake::io
