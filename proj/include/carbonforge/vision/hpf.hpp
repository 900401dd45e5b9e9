#pragma once

#include <opencv2/core.hpp>

#include "carbonforge/vision/image.hpp"

namespace carbonforge::vision {

inline constexpr double kDefaultCutoff = 32.0;

/// H = 1 − exp(−D²/(2·cutoff²)), D in bins from the centred spectrum.
double gaussian_highpass(double d2, double cutoff);

/// High-passed spectral energy Σ|F|²·H / (MN)² of the 2D DFT of `image`
/// (single channel, scored as given, no resizing).
double hpf_score_raw(const cv::Mat& image, double cutoff = kDefaultCutoff);

/// Normalizes (grayscale, longer side 512) then scores.
double hpf_score(const cv::Mat& gray, double cutoff = kDefaultCutoff);
double hpf_score(const ImageRef& ref, double cutoff = kDefaultCutoff);

}  // namespace carbonforge::vision
