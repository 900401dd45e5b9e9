#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <fstream>

#include <opencv2/imgcodecs.hpp>

#include "carbonforge/core/error.hpp"
#include "carbonforge/core/json.hpp"
#include "carbonforge/util/rng.hpp"
#include "carbonforge/vision/board.hpp"
#include "carbonforge/vision/hpf.hpp"
#include "carbonforge/vision/process_detector.hpp"
#include "oracles.hpp"

using namespace carbonforge;
using namespace carbonforge::vision;

namespace {

ImageRef fixture(const std::string& name) {
  return image_from_file(oracle::data_dir() / "images" / name, name);
}

cv::Mat checkerboard(int side, int block) {
  cv::Mat m(side, side, CV_8U);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) m.at<uchar>(y, x) = ((x / block + y / block) % 2) ? 255 : 0;
  }
  return m;
}

std::vector<double> pixels(const cv::Mat& gray) {
  std::vector<double> out;
  for (int y = 0; y < gray.rows; ++y) {
    for (int x = 0; x < gray.cols; ++x) out.push_back(gray.at<uchar>(y, x));
  }
  return out;
}

/// Area-averaged downsample by an integer factor, done by hand.
cv::Mat shrink(const cv::Mat& gray, int f) {
  cv::Mat out(gray.rows / f, gray.cols / f, CV_8U);
  for (int y = 0; y < out.rows; ++y) {
    for (int x = 0; x < out.cols; ++x) {
      int s = 0;
      for (int dy = 0; dy < f; ++dy) {
        for (int dx = 0; dx < f; ++dx) s += gray.at<uchar>(y * f + dy, x * f + dx);
      }
      out.at<uchar>(y, x) = static_cast<uchar>(s / (f * f));
    }
  }
  return out;
}

struct Fixed final : ComponentDetector {
  std::map<std::string, std::size_t> counts;
  std::vector<Detection> detect(const ImageRef& image) override {
    std::vector<Detection> out(counts.count(image.doc_id) ? counts.at(image.doc_id) : 0,
                               Detection{"IC", {0, 0, 1, 1}, 1.0, {}});
    return out;
  }
};

}  // namespace

TEST_SUITE("vision") {

TEST_CASE("hpf: constant image scores zero") {
  CHECK(hpf_score(cv::Mat(300, 200, CV_8U, cv::Scalar(137))) < 1e-12);
  CHECK(hpf_score(fixture("flat_panel.png")) < 1e-6);
}

TEST_CASE("hpf: frequency ordering") {
  const double fine = hpf_score(checkerboard(512, 1));
  const double coarse = hpf_score(checkerboard(512, 64));
  CHECK(fine > coarse);
  const double flat = hpf_score(fixture("flat_panel.png"));
  const double c = hpf_score(fixture("checker_coarse.png"));
  const double f = hpf_score(fixture("checker_fine.png"));
  CHECK(flat < c);
  CHECK(c < f);
}

TEST_CASE("hpf matches direct DFT summation") {
  Rng rng(3);
  cv::Mat m(24, 40, CV_8U);
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) m.at<uchar>(y, x) = static_cast<uchar>(rng.index(256));
  }
  for (double cutoff : {2.0, 5.0, 32.0}) {
    CHECK(oracle::close_rel(hpf_score_raw(m, cutoff), oracle::dft_highpass_energy(pixels(m), m.rows, m.cols, cutoff),
                            1e-9));
  }
}

TEST_CASE("dense texture vs flat panel ordering agrees with the DFT oracle") {
  const auto dense = decode_gray(fixture("dense_texture.png"));
  const auto flat = decode_gray(fixture("flat_panel.png"));
  // The oracle works on 64-px versions; ordering is what must agree.
  const double od = oracle::dft_highpass_energy(pixels(shrink(dense, 8)), 64, 64, 4.0);
  const double of = oracle::dft_highpass_energy(pixels(shrink(flat, 8)), 64, 64, 4.0);
  CHECK((hpf_score(dense) > hpf_score(flat)) == (od > of));
  CHECK(od > of);
}

TEST_CASE("hpf: brightness shift invariance") {
  const auto board = decode_gray(fixture("board_full.png"));
  cv::Mat base;
  cv::min(board, 195, base);
  cv::max(base, 60, base);
  cv::Mat shifted;
  base.convertTo(shifted, CV_8U, 1.0, 50.0);
  CHECK(oracle::close_rel(hpf_score(base), hpf_score(shifted), 1e-6));
}

TEST_CASE("hpf: scoring is fast at 512 px") {
  const auto img = decode_gray(fixture("dense_texture.png"));
  hpf_score(img);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 5; ++i) hpf_score(img);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / 5;
  CHECK(ms < 100.0);
}

TEST_CASE("undecodable image") {
  ImageRef bad{"bad", "not an image", {}};
  CHECK_THROWS_AS(hpf_score(bad), Error);
}

TEST_CASE("blob detector counts on fixtures") {
  BlobDetector det;
  std::ifstream meta(oracle::data_dir() / "images/board_full.json");
  const auto truth = json::parse(meta);
  CHECK(det.detect(fixture("board_full.png")).size() == truth["components"].get<std::size_t>());
  CHECK(det.detect(fixture("board_zoom.png")).size() == 3);
  CHECK(det.detect(fixture("battery.png")).empty());
  CHECK(det.detect(fixture("flat_panel.png")).empty());

  const auto a = det.detect(fixture("board_full.png"));
  CHECK(a == det.detect(fixture("board_full.png")));
  const auto img = decode_gray(fixture("board_full.png"));
  for (const auto& d : a) CHECK_NOTHROW(check_detection(d, img.cols, img.rows));
}

TEST_CASE("rank_board_views") {
  BlobDetector det;
  const std::vector<ImageRef> single = {fixture("board_zoom.png")};
  const auto one = rank_board_views(single, det);
  REQUIRE(one.scores.size() == 1);
  CHECK(one.scores[0].doc_id == "board_zoom.png");

  auto a = fixture("board_zoom.png");
  auto b = a;
  a.doc_id = "z-copy";
  b.doc_id = "a-copy";
  const std::vector<ImageRef> twins = {a, b};
  CHECK(rank_board_views(twins, det).scores[0].doc_id == "a-copy");

  std::vector<ImageRef> set = {fixture("battery.png"), fixture("board_zoom.png"), fixture("board_full.png")};
  const auto r = rank_board_views(set, det);
  REQUIRE(r.scores.size() == 3);
  CHECK(r.scores[0].doc_id == "board_full.png");
  CHECK(r.scores[0].component_count == 12);
  for (const auto& s : r.scores) CHECK(s.combined == doctest::Approx(s.component_count + s.lambda * s.hf_energy_normalized));

  std::reverse(set.begin(), set.end());
  CHECK(rank_board_views(set, det).scores[0].doc_id == "board_full.png");

  set.push_back({"broken", "xx", {}});
  const auto with_bad = rank_board_views(set, det);
  CHECK(with_bad.scores.size() == 3);
  REQUIRE(with_bad.skipped.size() == 1);
  CHECK(with_bad.skipped[0].doc_id == "broken");

  CHECK_THROWS_AS(rank_board_views(std::vector<ImageRef>{}, det), Error);
}

TEST_CASE("ranking combines counts and normalized energy") {
  Fixed det;
  det.counts = {{"checker_fine.png", 1}, {"checker_coarse.png", 1}, {"flat_panel.png", 2}};
  const std::vector<ImageRef> imgs = {fixture("flat_panel.png"), fixture("checker_coarse.png"),
                                      fixture("checker_fine.png")};
  const auto r = rank_board_views(imgs, det, 1.0);
  // flat: 2 + 0; fine: 1 + 1; coarse: 1 + something in (0,1). Tie goes by id.
  CHECK(r.scores[0].doc_id == "checker_fine.png");
  CHECK(r.scores[1].doc_id == "flat_panel.png");
  CHECK(r.scores[2].doc_id == "checker_coarse.png");
  // With a small lambda the extra component wins.
  const auto light = rank_board_views(imgs, det, 0.5);
  CHECK(light.scores[0].doc_id == "flat_panel.png");
}

TEST_CASE("calibrate_scale") {
  const auto c = calibrate_scale(10.0, 10.0, {0, 0, 100, 100});
  CHECK(c.mm_per_px == doctest::Approx(0.1));
  CHECK_FALSE(c.anisotropy_warning);
  const auto a = calibrate_scale(10.0, 5.0, {0, 0, 100, 40});
  CHECK(a.mm_per_px == doctest::Approx(0.1125));
  CHECK(a.ratio_w == doctest::Approx(0.1));
  CHECK(a.ratio_h == doctest::Approx(0.125));
  CHECK(a.anisotropy_warning);
  CHECK_THROWS_AS(calibrate_scale(10.0, 10.0, {0, 0, 0, 10}), Error);
  CHECK_THROWS_AS(calibrate_scale(-1.0, 10.0, {0, 0, 10, 10}), Error);
}

TEST_CASE("board_dimensions") {
  auto cal = calibrate_scale(10.0, 10.0, {0, 0, 100, 100});
  const auto fp = board_dimensions({0, 0, 1530, 670}, cal);
  CHECK(fp.w_mm == doctest::Approx(153.0).epsilon(1e-12));
  CHECK(fp.h_mm == doctest::Approx(67.0).epsilon(1e-12));

  const auto id = board_dimensions({5, 5, 50, 40}, identity_calibration());
  CHECK(id.w_mm == 50.0);
  CHECK(id.h_mm == 40.0);
  CHECK(id.area_mm2 == 2000.0);

  auto twice = cal;
  twice.mm_per_px *= 2.0;
  const auto d2 = board_dimensions({0, 0, 1530, 670}, twice);
  CHECK(d2.w_mm == 2.0 * fp.w_mm);
  CHECK(d2.h_mm == 2.0 * fp.h_mm);
  CHECK(d2.area_mm2 == 4.0 * fp.area_mm2);
}

TEST_CASE("rendered board dimensions are recovered") {
  std::ifstream meta(oracle::data_dir() / "images/calibration_board.json");
  const auto truth = json::parse(meta);
  const auto img = fixture("calibration_board.png");
  BlobDetector det;
  const auto found = det.detect(img);
  const auto* ref = find_reference(found, truth["reference"]["label"].get<std::string>());
  REQUIRE(ref != nullptr);
  const auto cal = calibrate_scale(truth["reference"]["known_w_mm"].get<double>(),
                                   truth["reference"]["known_h_mm"].get<double>(), ref->bbox);
  const auto dims = board_dimensions(find_board_bbox(decode_gray(img)), cal);
  const double w = truth["board_w_mm"].get<double>();
  const double h = truth["board_h_mm"].get<double>();
  CHECK(std::abs(dims.w_mm - w) / w <= 0.02);
  CHECK(std::abs(dims.h_mm - h) / h <= 0.02);
  CHECK(std::abs(dims.area_mm2 - w * h) / (w * h) <= 0.04);
}

TEST_CASE("inventory_from_detections") {
  const auto cal = identity_calibration();
  const BBox board{0, 0, 100, 50};
  const auto none = inventory_from_detections({}, cal, board);
  REQUIRE(none.size() == 1);
  CHECK(none[0].component_class == "PCB");
  CHECK(none[0].unit == Unit::mm2);
  CHECK(none[0].quantity == 5000.0);

  const std::vector<Detection> three = {{"IC", {0, 0, 10, 10}, 0.9, std::string("U1")},
                                        {"passive", {20, 0, 2, 1}, 0.8, {}},
                                        {"sensor", {30, 0, 3, 12}, 0.7, {}}};
  const auto four = inventory_from_detections(three, cal, board);
  CHECK(four.size() == 4);
  CHECK(std::get<std::string>(four[0].attributes.at("label_text")) == "U1");

  BlobDetector det;
  const auto img = fixture("board_full.png");
  const auto found = det.detect(img);
  const auto fcal = calibrate_scale(14.0, 14.0, find_reference(found, "")->bbox);
  const auto inv = inventory_from_detections(found, fcal, find_board_bbox(decode_gray(img)));
  REQUIRE(inv.size() == found.size() + 1);
  for (std::size_t i = 0; i < found.size(); ++i) {
    const double w = found[i].bbox.w * fcal.mm_per_px;
    const double h = found[i].bbox.h * fcal.mm_per_px;
    CHECK(inv[i].component_class == found[i].cls);
    CHECK(inv[i].quantity == 1.0);
    CHECK(std::get<double>(inv[i].attributes.at("area_mm2")) == doctest::Approx(w * h).epsilon(1e-12));
  }
}

TEST_CASE("board bbox of the full board fixture") {
  std::ifstream meta(oracle::data_dir() / "images/board_full.json");
  const auto truth = json::parse(meta);
  const auto box = find_board_bbox(decode_gray(fixture("board_full.png")));
  const auto& b = truth["board_bbox_px"];
  CHECK(std::abs(box.x - b[0].get<int>()) <= 2);
  CHECK(std::abs(box.y - b[1].get<int>()) <= 2);
  CHECK(std::abs(box.w - b[2].get<int>()) <= 4);
  CHECK(std::abs(box.h - b[3].get<int>()) <= 4);
}

TEST_CASE("detections must stay inside the image") {
  CHECK_THROWS_AS(check_detection({"IC", {90, 0, 20, 5}, 0.5, {}}, 100, 100), Error);
  CHECK_THROWS_AS(check_detection({"IC", {0, 0, 5, 5}, 1.5, {}}, 100, 100), Error);
  CHECK_NOTHROW(check_detection({"IC", {0, 0, 100, 100}, 1.0, {}}, 100, 100));
}

TEST_CASE("external process detector") {
  const std::string script = FAKE_DETECTOR;
  ProcessDetector det({"python3", script});
  const auto d = det.detect(fixture("board_zoom.png"));
  REQUIRE(d.size() == 2);
  CHECK(d[0].cls == "IC");
  CHECK(d[0].label_text == std::optional<std::string>("U1"));
  CHECK(det.detect(fixture("flat_panel.png")).empty());

  // In-memory images go through a temporary file.
  ImageRef mem = fixture("board_zoom.png");
  mem.path.clear();
  CHECK(det.detect(mem).size() == 2);

  ProcessDetector crash({"python3", script, "--crash"});
  try {
    crash.detect(fixture("board_zoom.png"));
    FAIL("expected a backend error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::backend);
  }
  ProcessDetector garbage({"python3", script, "--garbage"});
  CHECK_THROWS_AS(garbage.detect(fixture("board_zoom.png")), Error);
}

}
