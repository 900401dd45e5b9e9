#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <opencv2/core.hpp>

namespace carbonforge::vision {

inline constexpr int kNormalizedSide = 512;

/// A candidate image: encoded bytes and, when it lives on disk, its path.
struct ImageRef {
  std::string doc_id;
  std::string bytes;
  std::filesystem::path path;
};

ImageRef image_from_file(const std::filesystem::path& path, std::string doc_id = {});

/// Decodes to 8-bit grayscale at native resolution; throws a data error on
/// undecodable input.
cv::Mat decode_gray(std::span<const char> bytes);
cv::Mat decode_gray(const ImageRef& ref);

/// Grayscale CV_64F with the longer side resized to kNormalizedSide,
/// aspect preserved.
cv::Mat normalize_for_scoring(const cv::Mat& gray);

}  // namespace carbonforge::vision
