#include "carbonforge/efgen/embedding.hpp"

#include <cctype>
#include <cmath>

#include "carbonforge/core/error.hpp"
#include "carbonforge/util/rng.hpp"

namespace carbonforge::efgen {

namespace {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

}  // namespace

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

HashingEmbedder::HashingEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw_usage_error("embedding dimension must be positive");
}

std::vector<double> HashingEmbedder::embed(std::string_view text) const {
  std::vector<double> v(dim_, 0.0);
  const auto add = [&](std::string_view feature, double weight) {
    const std::uint64_t h = mix64(fnv1a(feature) ^ seed_);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    v[(h & 0x7fffffffffffffffULL) % dim_] += sign * weight;
  };
  for (const auto& tok : tokenize(text)) {
    add("w:" + tok, 1.0);
    const std::string padded = "#" + tok + "#";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
      add("c:" + padded.substr(i, 3), 0.5);
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw_data_error("cosine of vectors with different lengths");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

RandomProjection::RandomProjection(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed)
    : in_dim_(in_dim), out_dim_(out_dim), matrix_(in_dim * out_dim) {
  if (in_dim == 0 || out_dim == 0) throw_usage_error("projection dimensions must be positive");
  const double scale = 1.0 / std::sqrt(static_cast<double>(out_dim));
  for (std::size_t i = 0; i < matrix_.size(); ++i) {
    matrix_[i] = (mix64(seed + i) & 1ULL) ? scale : -scale;
  }
}

std::vector<double> RandomProjection::apply(std::span<const double> v) const {
  if (v.size() != in_dim_) throw_data_error("projection input has the wrong dimension");
  std::vector<double> out(out_dim_, 0.0);
  for (std::size_t r = 0; r < out_dim_; ++r) {
    const double* row = &matrix_[r * in_dim_];
    double s = 0.0;
    for (std::size_t c = 0; c < in_dim_; ++c) s += row[c] * v[c];
    out[r] = s;
  }
  return out;
}

}  // namespace carbonforge::efgen
