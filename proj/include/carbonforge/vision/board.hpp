#pragma once

#include <span>
#include <string>
#include <vector>

#include "carbonforge/core/inventory.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/vision/detector.hpp"
#include "carbonforge/vision/hpf.hpp"

namespace carbonforge::vision {

struct ImageScore {
  std::string doc_id;
  double hf_energy = 0.0;
  /// hf_energy min-max normalized over the candidate set (0 if all equal).
  double hf_energy_normalized = 0.0;
  std::size_t component_count = 0;
  double lambda = 1.0;
  /// component_count + lambda · hf_energy_normalized.
  double combined = 0.0;
};

struct SkippedImage {
  std::string doc_id;
  std::string message;
};

struct Ranking {
  /// Descending combined score, ties by doc_id; front() is the board view.
  std::vector<ImageScore> scores;
  std::vector<SkippedImage> skipped;
};

/// Undecodable images are skipped and reported. Throws a usage error on an
/// empty candidate list.
Ranking rank_board_views(std::span<const ImageRef> images, ComponentDetector& detector,
                         double lambda = 1.0, double cutoff = kDefaultCutoff);

struct ScaleReference {
  std::string component_id;
  double known_w_mm = 0.0;
  double known_h_mm = 0.0;
  BBox bbox_px;
};

struct ScaleCalibration {
  double mm_per_px = 0.0;
  double ratio_w = 0.0;
  double ratio_h = 0.0;
  ScaleReference reference;
  /// Axis ratios differ by more than 10% (perspective distortion likely).
  bool anisotropy_warning = false;
};

/// mm_per_px = mean(known_w/bbox_w, known_h/bbox_h).
ScaleCalibration calibrate_scale(double known_w_mm, double known_h_mm, const BBox& bbox_px,
                                 std::string component_id = {});
/// 1 mm per pixel.
ScaleCalibration identity_calibration();

struct BoardDimensions {
  double w_mm = 0.0;
  double h_mm = 0.0;
  /// w·h under the rectangular-board assumption; irregular (e.g. L-shaped)
  /// boards are overestimated.
  double area_mm2 = 0.0;
};

BoardDimensions board_dimensions(const BBox& board_bbox_px, const ScaleCalibration& cal);

/// One count entry per detection with w_mm, h_mm, area_mm2 (and label_text
/// when known), then one PCB entry in mm2 for the board.
std::vector<InventoryEntry> inventory_from_detections(std::span<const Detection> detections,
                                                      const ScaleCalibration& cal,
                                                      const BBox& board_bbox_px);

/// Reference detection for calibration: the one whose label matches, or the
/// largest IC when `label` is empty. nullptr if none.
const Detection* find_reference(std::span<const Detection> detections, const std::string& label);

void to_json(json& j, const ImageScore& s);
void to_json(json& j, const ScaleCalibration& c);
void to_json(json& j, const BoardDimensions& d);

}  // namespace carbonforge::vision
