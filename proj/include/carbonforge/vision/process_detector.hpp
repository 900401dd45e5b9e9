#pragma once

#include <cstdio>
#include <mutex>
#include <string>
#include <vector>

#include <sys/types.h>

#include "carbonforge/vision/detector.hpp"

namespace carbonforge::vision {

/// Runs an external detector as a child process speaking JSON lines:
/// {"image_path": ...} in, {"detections": [...]} out, one line each.
/// Calls are serialized. Failures of the child are backend errors.
class ProcessDetector final : public ComponentDetector {
 public:
  /// argv[0] is the executable; it is started on construction.
  explicit ProcessDetector(std::vector<std::string> argv);
  ~ProcessDetector() override;

  ProcessDetector(const ProcessDetector&) = delete;
  ProcessDetector& operator=(const ProcessDetector&) = delete;

  /// Images without a path are written to a temporary PNG first.
  std::vector<Detection> detect(const ImageRef& image) override;

 private:
  void shutdown() noexcept;

  std::mutex mu_;
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace carbonforge::vision
