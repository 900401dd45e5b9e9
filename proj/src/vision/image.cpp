#include "carbonforge/vision/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "carbonforge/core/error.hpp"

namespace carbonforge::vision {

ImageRef image_from_file(const std::filesystem::path& path, std::string doc_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data_error("cannot read image " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (doc_id.empty()) doc_id = path.filename().string();
  return {std::move(doc_id), ss.str(), path};
}

cv::Mat decode_gray(std::span<const char> bytes) {
  if (bytes.empty()) throw_data_error("empty image payload");
  const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<char*>(bytes.data()));
  cv::Mat img = cv::imdecode(buf, cv::IMREAD_GRAYSCALE);
  if (img.empty()) throw_data_error("image could not be decoded");
  return img;
}

cv::Mat decode_gray(const ImageRef& ref) {
  try {
    return decode_gray(std::span<const char>(ref.bytes.data(), ref.bytes.size()));
  } catch (const Error& e) {
    throw_data_error(ref.doc_id + ": " + e.what());
  }
}

cv::Mat normalize_for_scoring(const cv::Mat& gray) {
  if (gray.empty()) throw_data_error("empty image");
  cv::Mat g = gray;
  if (g.channels() != 1) cv::cvtColor(gray, g, cv::COLOR_BGR2GRAY);
  const int longest = std::max(g.cols, g.rows);
  cv::Mat sized;
  if (longest == kNormalizedSide) {
    sized = g;
  } else {
    const double f = static_cast<double>(kNormalizedSide) / longest;
    const int w = std::max(1, static_cast<int>(std::lround(g.cols * f)));
    const int h = std::max(1, static_cast<int>(std::lround(g.rows * f)));
    cv::resize(g, sized, cv::Size(w, h), 0, 0, f < 1.0 ? cv::INTER_AREA : cv::INTER_LINEAR);
  }
  cv::Mat out;
  sized.convertTo(out, CV_64F);
  return out;
}

}  // namespace carbonforge::vision
