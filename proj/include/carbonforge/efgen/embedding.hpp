#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace carbonforge::efgen {

/// Text embedding service. Implementations must be deterministic and safe
/// for concurrent embed() calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Feature-hashing embedder over lowercase word tokens and padded character
/// trigrams, L2-normalised. Empty text embeds to the zero vector.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dim = 256, std::uint64_t seed = 0x5eedULL);

  std::string name() const override { return "hashing-" + std::to_string(dim_); }
  std::size_t dim() const override { return dim_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Cosine similarity; 0 when either vector is zero.
double cosine(std::span<const double> a, std::span<const double> b);

/// Fixed dense ±1/sqrt(out_dim) projection generated from a seed.
class RandomProjection {
 public:
  RandomProjection(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed = 0x9a0dULL);

  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<double> matrix_;  // out_dim × in_dim, row-major
};

std::uint64_t fnv1a(std::string_view s);

}  // namespace carbonforge::efgen
