#include "slovasc/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "slovasc/errors.hpp"

namespace slovasc {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

cv::Mat read_raw(const std::filesystem::path& path) {
    if (!is_supported_raster(path)) {
        throw Error(ErrorCode::UnsupportedFormat, path.string());
    }
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(ErrorCode::UnreadableFile, path.string());
    }
    cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (mat.empty()) throw Error(ErrorCode::UnreadableFile, path.string());
    if (mat.depth() != CV_8U) {
        throw Error(ErrorCode::UnsupportedFormat, "only 8-bit rasters are supported: " + path.string());
    }
    return mat;
}

GrayImage from_single(const cv::Mat& mat) {
    GrayImage out(mat.cols, mat.rows);
    for (int y = 0; y < mat.rows; ++y) {
        const auto* src = mat.ptr<std::uint8_t>(y);
        std::copy(src, src + mat.cols, out.row(y).begin());
    }
    return out;
}

void write_mat(const std::filesystem::path& path, const cv::Mat& mat) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    if (!cv::imwrite(path.string(), mat)) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace

bool is_supported_raster(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" || ext == ".tif" ||
           ext == ".tiff";
}

GrayImage read_gray(const std::filesystem::path& path) {
    const cv::Mat mat = read_raw(path);
    if (mat.channels() == 1) return from_single(mat);
    if (mat.channels() != 3 && mat.channels() != 4) {
        throw Error(ErrorCode::UnsupportedFormat, "unexpected channel count: " + path.string());
    }
    GrayImage out(mat.cols, mat.rows);
    const int ch = mat.channels();
    for (int y = 0; y < mat.rows; ++y) {
        const auto* src = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            const double b = src[x * ch + 0];
            const double g = src[x * ch + 1];
            const double r = src[x * ch + 2];
            out(x, y) = static_cast<std::uint8_t>(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
        }
    }
    return out;
}

GrayImage read_single_channel(const std::filesystem::path& path) {
    const cv::Mat mat = read_raw(path);
    if (mat.channels() != 1) {
        throw Error(ErrorCode::UnsupportedFormat, "mask must be single-channel: " + path.string());
    }
    return from_single(mat);
}

void write_gray(const std::filesystem::path& path, const GrayImage& img) {
    cv::Mat mat(img.height(), img.width(), CV_8UC1);
    for (int y = 0; y < img.height(); ++y) {
        auto row = img.row(y);
        std::copy(row.begin(), row.end(), mat.ptr<std::uint8_t>(y));
    }
    write_mat(path, mat);
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
    GrayImage img(mask.width(), mask.height());
    auto src = mask.pixels();
    auto dst = img.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
    write_gray(path, img);
}

void write_rgb(const std::filesystem::path& path, const RgbImage& img) {
    cv::Mat mat(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        auto* dst = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) {
            const Rgb& c = img(x, y);
            dst[3 * x + 0] = c[2];
            dst[3 * x + 1] = c[1];
            dst[3 * x + 2] = c[0];
        }
    }
    write_mat(path, mat);
}

RgbImage read_rgb(const std::filesystem::path& path) {
    const cv::Mat mat = read_raw(path);
    RgbImage out(mat.cols, mat.rows);
    const int ch = mat.channels();
    for (int y = 0; y < mat.rows; ++y) {
        const auto* src = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            if (ch == 1) {
                out(x, y) = {src[x], src[x], src[x]};
            } else {
                out(x, y) = {src[x * ch + 2], src[x * ch + 1], src[x * ch + 0]};
            }
        }
    }
    return out;
}

}  // namespace slovasc
