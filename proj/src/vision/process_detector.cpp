#include "carbonforge/vision/process_detector.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <sys/wait.h>
#include <unistd.h>

#include "carbonforge/core/error.hpp"

namespace carbonforge::vision {

namespace fs = std::filesystem;

ProcessDetector::ProcessDetector(std::vector<std::string> argv) {
  if (argv.empty()) throw_usage_error("detector command is empty");
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw_backend_error("cannot create pipes");
  pid_ = fork();
  if (pid_ < 0) throw_backend_error("cannot fork detector process");
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::vector<char*> args;
    for (auto& a : argv) args.push_back(a.data());
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = fdopen(in_pipe[1], "w");
  from_child_ = fdopen(out_pipe[0], "r");
  if (!to_child_ || !from_child_) {
    shutdown();
    throw_backend_error("cannot open detector pipes");
  }
}

ProcessDetector::~ProcessDetector() { shutdown(); }

void ProcessDetector::shutdown() noexcept {
  if (to_child_) {
    std::fclose(to_child_);
    to_child_ = nullptr;
  }
  if (from_child_) {
    std::fclose(from_child_);
    from_child_ = nullptr;
  }
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::vector<Detection> ProcessDetector::detect(const ImageRef& image) {
  std::lock_guard lock(mu_);
  if (!to_child_) throw_backend_error("detector process is not running");

  fs::path path = image.path;
  fs::path temp;
  if (path.empty()) {
    temp = fs::temp_directory_path() /
           ("carbonforge-" + std::to_string(getpid()) + "-" + image.doc_id + ".img");
    std::ofstream(temp, std::ios::binary) << image.bytes;
    path = temp;
  }
  const std::string request = json{{"image_path", path.string()}}.dump() + "\n";
  // A dead child surfaces as EPIPE on write rather than killing us.
  std::signal(SIGPIPE, SIG_IGN);
  const bool sent = std::fputs(request.c_str(), to_child_) >= 0 && std::fflush(to_child_) == 0;

  std::string line;
  if (sent) {
    char buf[4096];
    while (std::fgets(buf, sizeof buf, from_child_)) {
      line += buf;
      if (!line.empty() && line.back() == '\n') break;
    }
  }
  if (!temp.empty()) fs::remove(temp);
  if (!sent || line.empty()) {
    shutdown();
    throw_backend_error("detector process closed the connection");
  }

  json response;
  try {
    response = json::parse(line);
  } catch (const json::exception& e) {
    throw_backend_error(std::string("detector sent invalid JSON: ") + e.what());
  }
  if (response.contains("error")) {
    throw_backend_error("detector error: " + response.at("error").dump());
  }
  if (!response.contains("detections") || !response.at("detections").is_array()) {
    throw_backend_error("detector response lacks a detections array");
  }
  std::vector<Detection> out;
  try {
    for (const auto& d : response.at("detections")) out.push_back(d.get<Detection>());
  } catch (const Error& e) {
    throw_backend_error(e.what());
  }
  return out;
}

}  // namespace carbonforge::vision
