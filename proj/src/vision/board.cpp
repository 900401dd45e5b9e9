#include "carbonforge/vision/board.hpp"

#include <algorithm>
#include <cmath>

#include "carbonforge/core/error.hpp"

namespace carbonforge::vision {

Ranking rank_board_views(std::span<const ImageRef> images, ComponentDetector& detector,
                         double lambda, double cutoff) {
  if (images.empty()) throw_usage_error("no candidate images to rank");
  Ranking out;
  for (const auto& img : images) {
    try {
      const cv::Mat gray = decode_gray(img);
      ImageScore s;
      s.doc_id = img.doc_id;
      s.hf_energy = hpf_score(gray, cutoff);
      const auto dets = detector.detect(img);
      for (const auto& d : dets) check_detection(d, gray.cols, gray.rows);
      s.component_count = dets.size();
      s.lambda = lambda;
      out.scores.push_back(std::move(s));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::data) throw;
      out.skipped.push_back({img.doc_id, e.what()});
    }
  }
  if (out.scores.empty()) return out;

  const auto [lo_it, hi_it] = std::minmax_element(
      out.scores.begin(), out.scores.end(),
      [](const auto& a, const auto& b) { return a.hf_energy < b.hf_energy; });
  const double lo = lo_it->hf_energy;
  const double span = hi_it->hf_energy - lo;
  for (auto& s : out.scores) {
    s.hf_energy_normalized = span > 0.0 ? (s.hf_energy - lo) / span : 0.0;
    s.combined = static_cast<double>(s.component_count) + lambda * s.hf_energy_normalized;
  }
  std::sort(out.scores.begin(), out.scores.end(), [](const auto& a, const auto& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    return a.doc_id < b.doc_id;
  });
  return out;
}

ScaleCalibration calibrate_scale(double known_w_mm, double known_h_mm, const BBox& bbox_px,
                                 std::string component_id) {
  if (bbox_px.w <= 0 || bbox_px.h <= 0) throw_data_error("reference bbox has zero size");
  if (!(known_w_mm > 0.0) || !(known_h_mm > 0.0)) {
    throw_data_error("reference dimensions must be positive");
  }
  ScaleCalibration c;
  c.ratio_w = known_w_mm / bbox_px.w;
  c.ratio_h = known_h_mm / bbox_px.h;
  c.mm_per_px = (c.ratio_w + c.ratio_h) / 2.0;
  c.reference = {std::move(component_id), known_w_mm, known_h_mm, bbox_px};
  c.anisotropy_warning =
      std::abs(c.ratio_w - c.ratio_h) > 0.1 * std::min(c.ratio_w, c.ratio_h);
  if (!std::isfinite(c.mm_per_px)) throw_data_error("calibration is not finite");
  return c;
}

ScaleCalibration identity_calibration() {
  ScaleCalibration c;
  c.mm_per_px = c.ratio_w = c.ratio_h = 1.0;
  c.reference = {"identity", 1.0, 1.0, {0, 0, 1, 1}};
  return c;
}

BoardDimensions board_dimensions(const BBox& board_bbox_px, const ScaleCalibration& cal) {
  if (!(cal.mm_per_px > 0.0) || !std::isfinite(cal.mm_per_px)) {
    throw_data_error("invalid calibration");
  }
  BoardDimensions d;
  d.w_mm = board_bbox_px.w * cal.mm_per_px;
  d.h_mm = board_bbox_px.h * cal.mm_per_px;
  d.area_mm2 = d.w_mm * d.h_mm;
  return d;
}

std::vector<InventoryEntry> inventory_from_detections(std::span<const Detection> detections,
                                                      const ScaleCalibration& cal,
                                                      const BBox& board_bbox_px) {
  std::vector<InventoryEntry> out;
  for (const auto& det : detections) {
    const auto dims = board_dimensions(det.bbox, cal);
    InventoryEntry e;
    e.component_class = det.cls;
    e.description = det.label_text ? *det.label_text : det.cls + " component";
    e.quantity = 1.0;
    e.unit = Unit::count;
    e.attributes = {{"w_mm", dims.w_mm}, {"h_mm", dims.h_mm}, {"area_mm2", dims.area_mm2}};
    if (det.label_text) e.attributes.emplace("label_text", *det.label_text);
    out.push_back(std::move(e));
  }
  const auto board = board_dimensions(board_bbox_px, cal);
  out.push_back({"PCB",
                 "printed circuit board",
                 board.area_mm2,
                 Unit::mm2,
                 {{"w_mm", board.w_mm}, {"h_mm", board.h_mm}, {"area_mm2", board.area_mm2}}});
  return out;
}

const Detection* find_reference(std::span<const Detection> detections, const std::string& label) {
  const Detection* best = nullptr;
  for (const auto& d : detections) {
    if (!label.empty()) {
      if (d.label_text && *d.label_text == label) return &d;
      continue;
    }
    if (d.cls != "IC") continue;
    const long area = static_cast<long>(d.bbox.w) * d.bbox.h;
    if (!best || area > static_cast<long>(best->bbox.w) * best->bbox.h) best = &d;
  }
  return best;
}

void to_json(json& j, const ImageScore& s) {
  j = json{{"doc_id", s.doc_id},
           {"hf_energy", s.hf_energy},
           {"hf_energy_normalized", s.hf_energy_normalized},
           {"component_count", s.component_count},
           {"lambda", s.lambda},
           {"combined", s.combined}};
}

void to_json(json& j, const ScaleCalibration& c) {
  const auto& r = c.reference;
  j = json{{"mm_per_px", c.mm_per_px},
           {"ratio_w", c.ratio_w},
           {"ratio_h", c.ratio_h},
           {"anisotropy_warning", c.anisotropy_warning},
           {"reference",
            {{"component_id", r.component_id},
             {"known_w_mm", r.known_w_mm},
             {"known_h_mm", r.known_h_mm},
             {"bbox_px", {r.bbox_px.x, r.bbox_px.y, r.bbox_px.w, r.bbox_px.h}}}}};
}

void to_json(json& j, const BoardDimensions& d) {
  j = json{{"w_mm", d.w_mm}, {"h_mm", d.h_mm}, {"area_mm2", d.area_mm2}};
}

}  // namespace carbonforge::vision
