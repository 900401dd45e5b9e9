#include "carbonforge/vision/detector.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgproc.hpp>

#include "carbonforge/core/error.hpp"

namespace carbonforge::vision {

void check_detection(const Detection& d, int image_w, int image_h) {
  const auto& b = d.bbox;
  if (b.x < 0 || b.y < 0 || b.w < 0 || b.h < 0 || b.x + b.w > image_w || b.y + b.h > image_h) {
    throw_data_error("detection box outside the image");
  }
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
    throw_data_error("detection confidence outside [0,1]");
  }
}

void to_json(json& j, const Detection& d) {
  j = json{{"class", d.cls},
           {"bbox", {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h}},
           {"confidence", d.confidence},
           {"label_text", d.label_text ? json(*d.label_text) : json(nullptr)}};
}

void from_json(const json& j, Detection& d) {
  try {
    d.cls = j.at("class").get<std::string>();
    const auto& b = j.at("bbox");
    if (!b.is_array() || b.size() != 4) throw_data_error("bbox must be [x, y, w, h]");
    d.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
    d.confidence = j.value("confidence", 1.0);
    d.label_text.reset();
    if (j.contains("label_text") && !j.at("label_text").is_null()) {
      d.label_text = j.at("label_text").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw_data_error(std::string("detection: ") + e.what());
  }
}

std::vector<Detection> BlobDetector::detect(const ImageRef& image) {
  return detect_gray(decode_gray(image));
}

std::vector<Detection> BlobDetector::detect_gray(const cv::Mat& gray) const {
  cv::Mat g;
  gray.convertTo(g, CV_32F);
  const double longest = std::max(g.cols, g.rows);
  cv::Mat background;
  cv::GaussianBlur(g, background, cv::Size(0, 0), std::max(1.0, params_.background_sigma * longest));
  cv::Mat response = g - background;
  cv::Mat mask = response < -params_.threshold;

  cv::Mat labels, stats, centroids;
  const int n = cv::connectedComponentsWithStats(mask, labels, stats, centroids, 8, CV_32S);
  const double image_area = static_cast<double>(g.cols) * g.rows;

  std::vector<Detection> out;
  for (int i = 1; i < n; ++i) {
    const int x = stats.at<int>(i, cv::CC_STAT_LEFT);
    const int y = stats.at<int>(i, cv::CC_STAT_TOP);
    const int w = stats.at<int>(i, cv::CC_STAT_WIDTH);
    const int h = stats.at<int>(i, cv::CC_STAT_HEIGHT);
    const int area = stats.at<int>(i, cv::CC_STAT_AREA);
    if (area < params_.min_area_fraction * image_area) continue;
    if (static_cast<double>(w) * h > params_.max_box_fraction * image_area) continue;

    const double contrast = -cv::mean(response(cv::Rect(x, y, w, h)),
                                      labels(cv::Rect(x, y, w, h)) == i)[0];
    const double aspect = static_cast<double>(std::max(w, h)) / std::min(w, h);
    Detection d;
    if (area < params_.ic_area_fraction * image_area) {
      d.cls = "passive";
    } else if (aspect > 2.5) {
      d.cls = "sensor";
    } else {
      d.cls = "IC";
    }
    d.bbox = {x, y, w, h};
    d.confidence = std::clamp(contrast / 128.0, 0.0, 1.0);
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.bbox.y, a.bbox.x) < std::tie(b.bbox.y, b.bbox.x);
  });
  return out;
}

BBox find_board_bbox(const cv::Mat& gray) {
  if (gray.empty()) throw_data_error("empty image");
  cv::Mat g8;
  gray.convertTo(g8, CV_8U);
  cv::Mat mask;
  cv::threshold(g8, mask, 0, 255, cv::THRESH_BINARY | cv::THRESH_OTSU);
  cv::Mat labels, stats, centroids;
  const int n = cv::connectedComponentsWithStats(mask, labels, stats, centroids, 8, CV_32S);
  int best = -1;
  int best_area = 0;
  for (int i = 1; i < n; ++i) {
    const int area = stats.at<int>(i, cv::CC_STAT_AREA);
    if (area > best_area) {
      best_area = area;
      best = i;
    }
  }
  if (best < 0) throw_data_error("no board region found");
  return {stats.at<int>(best, cv::CC_STAT_LEFT), stats.at<int>(best, cv::CC_STAT_TOP),
          stats.at<int>(best, cv::CC_STAT_WIDTH), stats.at<int>(best, cv::CC_STAT_HEIGHT)};
}

}  // namespace carbonforge::vision
