#pragma once

#include <cstdint>
#include <vector>

namespace wavedesign {

/// FSK firing order: a permutation of {1..N} with the Costas property.
class CostasCode {
 public:
  /// Throws InvalidInput unless `sequence` is a Costas permutation.
  explicit CostasCode(std::vector<int> sequence);

  const std::vector<int>& sequence() const noexcept { return sequence_; }
  int order() const noexcept { return static_cast<int>(sequence_.size()); }

 private:
  std::vector<int> sequence_;
};

bool is_prime(std::int64_t n);
bool is_primitive_root(std::int64_t g, std::int64_t p);
/// All primitive roots of prime p, ascending.
std::vector<std::int64_t> primitive_roots(std::int64_t p);

/// Exponential Welch construction: f_i = g^i mod p, i = 1..p-1.
CostasCode generate_welch_costas(std::int64_t p, std::int64_t g);

/// True iff every row of the difference triangle has distinct entries.
/// Throws InvalidInput if `code` is not a permutation of {1..N}.
bool verify_costas(const std::vector<int>& code);

}  // namespace wavedesign
