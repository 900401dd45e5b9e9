#include "carbonforge/vision/hpf.hpp"

#include <cmath>

#include "carbonforge/core/error.hpp"

namespace carbonforge::vision {

namespace {

// Signed offset of bin u from the centre after an fftshift.
int centred(int u, int n) { return (u + n / 2) % n - n / 2; }

}  // namespace

double gaussian_highpass(double d2, double cutoff) {
  return 1.0 - std::exp(-d2 / (2.0 * cutoff * cutoff));
}

double hpf_score_raw(const cv::Mat& image, double cutoff) {
  if (!(cutoff > 0.0)) throw_usage_error("cutoff must be positive");
  if (image.empty() || image.channels() != 1) throw_data_error("expected a single-channel image");
  cv::Mat f;
  image.convertTo(f, CV_64F);
  cv::Mat spectrum;
  cv::dft(f, spectrum, cv::DFT_COMPLEX_OUTPUT);

  const int rows = spectrum.rows;
  const int cols = spectrum.cols;
  double sum = 0.0;
  for (int v = 0; v < rows; ++v) {
    const auto* row = spectrum.ptr<cv::Vec2d>(v);
    const double dv = centred(v, rows);
    for (int u = 0; u < cols; ++u) {
      const double du = centred(u, cols);
      const double power = row[u][0] * row[u][0] + row[u][1] * row[u][1];
      sum += power * gaussian_highpass(du * du + dv * dv, cutoff);
    }
  }
  // Parseval scaling: the result is the mean squared high-passed intensity.
  const double n = static_cast<double>(rows) * cols;
  return sum / (n * n);
}

double hpf_score(const cv::Mat& gray, double cutoff) {
  return hpf_score_raw(normalize_for_scoring(gray), cutoff);
}

double hpf_score(const ImageRef& ref, double cutoff) { return hpf_score(decode_gray(ref), cutoff); }

}  // namespace carbonforge::vision
