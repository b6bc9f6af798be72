#include "caustica/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace caustica {

void RasterImage::resize_fill(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    width = w;
    height = h;
    rgb.resize(size_t(3) * w * h);
    for (size_t i = 0; i < rgb.size(); i += 3) {
        rgb[i] = r;
        rgb[i + 1] = g;
        rgb[i + 2] = b;
    }
}

namespace {

bool has_suffix(const std::string& s, const char* suf) {
    const size_t n = std::strlen(suf);
    if (s.size() < n) return false;
    std::string tail = s.substr(s.size() - n);
    std::transform(tail.begin(), tail.end(), tail.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return tail == suf;
}

RasterImage load_png(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw ImageIoError("cannot open image: " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw ImageIoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw ImageIoError("failed to decode PNG: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    // Normalize everything to 8-bit RGB.
    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
        png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
        png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    RasterImage img;
    img.width = int(png_get_image_width(png, info));
    img.height = int(png_get_image_height(png, info));
    png_uint_32 res_x = 0, res_y = 0;
    int unit = 0;
    if (png_get_pHYs(png, info, &res_x, &res_y, &unit) && unit == PNG_RESOLUTION_METER &&
        res_x > 0)
        img.dpi = double(res_x) * 0.0254;
    img.rgb.resize(size_t(3) * img.width * img.height);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) rows[y] = img.rgb.data() + size_t(3) * img.width * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

RasterImage load_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ImageIoError("cannot open image: " + path);
    std::string magic;
    f >> magic;
    if (magic != "P6") throw ImageIoError("unsupported PPM (need P6): " + path);
    auto next_int = [&]() {
        int v;
        f >> std::ws;
        while (f.peek() == '#') {
            std::string line;
            std::getline(f, line);
            f >> std::ws;
        }
        f >> v;
        return v;
    };
    RasterImage img;
    img.width = next_int();
    img.height = next_int();
    const int maxval = next_int();
    if (maxval != 255) throw ImageIoError("unsupported PPM maxval: " + path);
    f.get();  // single whitespace after header
    img.rgb.resize(size_t(3) * img.width * img.height);
    f.read(reinterpret_cast<char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
    if (!f) throw ImageIoError("truncated PPM: " + path);
    return img;
}

void atomic_replace(const std::string& tmp, const std::string& path) {
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ImageIoError("cannot write " + path + ": " + ec.message());
    }
}

}  // namespace

RasterImage load_image(const std::string& path) {
    if (has_suffix(path, ".ppm")) return load_ppm(path);
    return load_png(path);
}

void save_png(const RasterImage& img, const std::string& path) {
    const std::string tmp = path + ".tmp";
    std::FILE* fp = std::fopen(tmp.c_str(), "wb");
    if (!fp) throw ImageIoError("cannot create " + tmp);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw ImageIoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        std::filesystem::remove(tmp);
        throw ImageIoError("failed to encode PNG: " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    const png_uint_32 ppm = png_uint_32(std::lround(img.dpi / 0.0254));
    png_set_pHYs(png, info, ppm, ppm, PNG_RESOLUTION_METER);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(img.rgb.data() + size_t(3) * img.width * y));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    atomic_replace(tmp, path);
}

void save_ppm(const RasterImage& img, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw ImageIoError("cannot create " + tmp);
        f << "P6\n" << img.width << " " << img.height << "\n255\n";
        f.write(reinterpret_cast<const char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
    }
    atomic_replace(tmp, path);
}

std::array<double, 3> bilinear_sample(const RasterImage& img, double px, double py) {
    const auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
    const double fx = std::floor(px), fy = std::floor(py);
    const double ax = px - fx, ay = py - fy;
    const int x0 = clampi(int(fx), 0, img.width - 1);
    const int x1 = clampi(int(fx) + 1, 0, img.width - 1);
    const int y0 = clampi(int(fy), 0, img.height - 1);
    const int y1 = clampi(int(fy) + 1, 0, img.height - 1);
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c) {
        const double v00 = img.px(x0, y0)[c], v10 = img.px(x1, y0)[c];
        const double v01 = img.px(x0, y1)[c], v11 = img.px(x1, y1)[c];
        out[c] = (1 - ay) * ((1 - ax) * v00 + ax * v10) + ay * ((1 - ax) * v01 + ax * v11);
    }
    return out;
}

}  // namespace caustica
