#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace caustica {

/// 8-bit RGB raster with a physical scale. Row-major from the top-left;
/// width/dpi x height/dpi is the print size in inches.
struct RasterImage {
    int width{0};
    int height{0};
    double dpi{300.0};
    std::vector<std::uint8_t> rgb;  // 3 * width * height

    void resize_fill(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);
    std::uint8_t* px(int x, int y) { return rgb.data() + 3 * (size_t(y) * width + x); }
    const std::uint8_t* px(int x, int y) const {
        return rgb.data() + 3 * (size_t(y) * width + x);
    }
    double width_m() const { return width / dpi * 0.0254; }
    double height_m() const { return height / dpi * 0.0254; }
};

struct ImageIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Load a PNG or PPM (P6) image; the PNG pHYs chunk sets dpi when present.
RasterImage load_image(const std::string& path);

/// Write PNG with the dpi embedded in the pHYs chunk (atomically:
/// write-temp-then-rename). Output bytes are deterministic for identical
/// pixels and dpi.
void save_png(const RasterImage& img, const std::string& path);

/// Write binary PPM (P6); carries no physical scale.
void save_ppm(const RasterImage& img, const std::string& path);

/// Bilinear sample at pixel coordinates (px, py) measured in pixel units
/// from the top-left pixel center; clamps to the image border.
std::array<double, 3> bilinear_sample(const RasterImage& img, double px, double py);

}  // namespace caustica
