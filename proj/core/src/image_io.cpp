#include "seawake/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "seawake/errors.hpp"

namespace seawake::io {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::io, "io: " + msg); }

struct FileHandle {
    FILE* fp = nullptr;
    explicit FileHandle(const std::filesystem::path& path, const char* mode)
        : fp(std::fopen(path.string().c_str(), mode)) {}
    ~FileHandle() {
        if (fp) std::fclose(fp);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

}  // namespace

flow::Frame read_png(const std::filesystem::path& path) {
    FileHandle file(path, "rb");
    if (!file.fp) fail("cannot open '" + path.string() + "' for reading");

    png_byte header[8];
    if (std::fread(header, 1, 8, file.fp) != 8 || png_sig_cmp(header, 0, 8) != 0)
        fail("'" + path.string() + "' is not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail("libpng read init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail("libpng info init failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> data;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("failed to decode '" + path.string() + "'");
    }

    png_init_io(png, file.fp);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = static_cast<int>(png_get_channels(png, info));
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("'" + path.string() + "' decoded to unsupported channel count " +
             std::to_string(channels));
    }

    const std::size_t row_bytes = png_get_rowbytes(png, info);
    data.resize(row_bytes * static_cast<std::size_t>(height));
    row_ptrs.resize(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) row_ptrs[static_cast<std::size_t>(y)] = &data[row_bytes * y];
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    flow::Frame frame = flow::Frame::make(width, height, channels);
    for (int y = 0; y < height; ++y) {
        const png_byte* row = &data[row_bytes * static_cast<std::size_t>(y)];
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < channels; ++c)
                frame.at(x, y, c) = row[x * channels + c] / 255.0;
    }
    return frame;
}

void write_png(const flow::Frame& frame, const std::filesystem::path& path) {
    if (frame.width <= 0 || frame.height <= 0 || (frame.channels != 1 && frame.channels != 3))
        fail("cannot write malformed frame to '" + path.string() + "'");

    FileHandle file(path, "wb");
    if (!file.fp) fail("cannot open '" + path.string() + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail("libpng write init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail("libpng info init failed");
    }
    std::vector<png_byte> data;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("failed to encode '" + path.string() + "'");
    }

    png_init_io(png, file.fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(frame.width),
                 static_cast<png_uint_32>(frame.height), 8,
                 frame.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

    const std::size_t row_bytes = static_cast<std::size_t>(frame.width) * frame.channels;
    data.resize(row_bytes * static_cast<std::size_t>(frame.height));
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x)
            for (int c = 0; c < frame.channels; ++c) {
                const double v = std::clamp(frame.at(x, y, c), 0.0, 1.0);
                data[row_bytes * y + static_cast<std::size_t>(x) * frame.channels + c] =
                    static_cast<png_byte>(std::lround(v * 255.0));
            }
    row_ptrs.resize(static_cast<std::size_t>(frame.height));
    for (int y = 0; y < frame.height; ++y) row_ptrs[static_cast<std::size_t>(y)] = &data[row_bytes * y];

    png_set_rows(png, info, row_ptrs.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        fail("'" + dir.string() + "' is not a readable directory");
    std::vector<std::filesystem::path> frames;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("frame_", 0) == 0 && entry.path().extension() == ".png")
            frames.push_back(entry.path());
    }
    if (ec) fail("cannot enumerate '" + dir.string() + "'");
    std::sort(frames.begin(), frames.end());
    return frames;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) fail("failed while reading '" + path.string() + "'");
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) fail("failed while writing '" + path.string() + "'");
}

}  // namespace seawake::io
