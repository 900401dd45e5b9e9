#pragma once

#include <optional>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "carbonforge/core/json.hpp"
#include "carbonforge/vision/image.hpp"

namespace carbonforge::vision {

struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const BBox&) const = default;
};

struct Detection {
  /// Component class: IC, passive or sensor for the built-in detector.
  std::string cls;
  BBox bbox;
  double confidence = 0.0;
  std::optional<std::string> label_text;

  bool operator==(const Detection&) const = default;
};

/// Throws a data error when the box leaves the image or confidence is
/// outside [0,1].
void check_detection(const Detection& d, int image_w, int image_h);

void to_json(json& j, const Detection& d);
void from_json(const json& j, Detection& d);

class ComponentDetector {
 public:
  virtual ~ComponentDetector() = default;
  /// Detections in native pixel coordinates of the decoded image.
  virtual std::vector<Detection> detect(const ImageRef& image) = 0;
};

struct BlobParams {
  /// Gaussian sigma of the local background, as a fraction of the longer
  /// side.
  double background_sigma = 1.0 / 24.0;
  /// Minimum darkness below the local background, in gray levels.
  double threshold = 25.0;
  /// Minimum blob area as a fraction of the image area.
  double min_area_fraction = 2e-4;
  /// Blobs whose box covers more than this fraction of the image are
  /// background, not components.
  double max_box_fraction = 0.5;
  /// Blobs at least this fraction of the image area are ICs.
  double ic_area_fraction = 3e-3;
};

/// Classical detector: components are connected regions darker than their
/// Gaussian-blurred surroundings. Class from size and elongation.
class BlobDetector final : public ComponentDetector {
 public:
  explicit BlobDetector(BlobParams params = {}) : params_(params) {}
  std::vector<Detection> detect(const ImageRef& image) override;
  std::vector<Detection> detect_gray(const cv::Mat& gray) const;

 private:
  BlobParams params_;
};

/// Bounding box of the largest bright region after Otsu thresholding; the
/// board is assumed lighter than the backdrop.
BBox find_board_bbox(const cv::Mat& gray);

}  // namespace carbonforge::vision
