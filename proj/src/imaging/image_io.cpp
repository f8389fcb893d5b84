#include <algorithm>
#include <fstream>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "vprkit/error.hpp"
#include "vprkit/image.hpp"

namespace vprkit {

namespace {

template <typename T>
GrayImage to_luminance(const cv::Mat& mat, double scale) {
  const int channels = mat.channels();
  std::vector<float> pixels(static_cast<std::size_t>(mat.rows) * mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    const T* row = mat.ptr<T>(y);
    for (int x = 0; x < mat.cols; ++x) {
      const T* px = row + static_cast<std::ptrdiff_t>(x) * channels;
      double value;
      if (channels == 1 || channels == 2) {
        value = px[0] * scale;
      } else {
        // OpenCV stores colour as BGR(A); alpha is ignored.
        value = 0.299 * (px[2] * scale) + 0.587 * (px[1] * scale) + 0.114 * (px[0] * scale);
      }
      pixels[static_cast<std::size_t>(y) * mat.cols + x] =
          static_cast<float>(std::clamp(value, 0.0, 1.0));
    }
  }
  return GrayImage(mat.cols, mat.rows, std::move(pixels));
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe || std::filesystem::is_directory(path)) {
      throw IoError("cannot read image file: " + path.string());
    }
  }
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw FormatError("cannot decode image " + path.string() + ": " + e.what());
  }
  if (mat.empty()) throw FormatError("cannot decode image: " + path.string());

  switch (mat.depth()) {
    case CV_8U:
      return to_luminance<std::uint8_t>(mat, 1.0 / 255.0);
    case CV_16U:
      return to_luminance<std::uint16_t>(mat, 1.0 / 65535.0);
    case CV_32F:
      return to_luminance<float>(mat, 1.0);
    default:
      throw FormatError("unsupported pixel depth in " + path.string());
  }
}

void save_png(const GrayImage& image, const std::filesystem::path& path) {
  if (image.empty()) throw InvalidArgument("cannot save an empty image");
  std::vector<std::uint8_t> bytes = image.to_u8();
  cv::Mat mat(image.height(), image.width(), CV_8UC1, bytes.data());
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

}  // namespace vprkit
