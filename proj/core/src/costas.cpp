#include "wavedesign/costas.hpp"

#include <string>
#include <unordered_set>

#include "wavedesign/error.hpp"

namespace wavedesign {

using detail::require;

namespace {

bool is_permutation_of_1_to_n(const std::vector<int>& code) {
  const auto n = static_cast<int>(code.size());
  std::vector<bool> seen(code.size() + 1, false);
  for (int v : code) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

// Double-and-add so a * b never overflows for moduli below 2^62.
std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  std::int64_t r = 0;
  a %= m;
  while (b > 0) {
    if (b & 1) r = (r + a) % m;
    a = (a * 2) % m;
    b >>= 1;
  }
  return r;
}

std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t m) {
  std::int64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

CostasCode::CostasCode(std::vector<int> sequence) : sequence_(std::move(sequence)) {
  require(!sequence_.empty(), "Costas code must be nonempty");
  require(verify_costas(sequence_), "sequence does not satisfy the Costas property");
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_primitive_root(std::int64_t g, std::int64_t p) {
  if (!is_prime(p) || g <= 0 || g % p == 0) return false;
  const std::int64_t order = p - 1;
  // g is primitive iff g^((p-1)/q) != 1 for every prime factor q of p-1
  std::int64_t rest = order;
  for (std::int64_t q = 2; q * q <= rest; ++q) {
    if (rest % q != 0) continue;
    while (rest % q == 0) rest /= q;
    if (powmod(g, order / q, p) == 1) return false;
  }
  if (rest > 1 && powmod(g, order / rest, p) == 1) return false;
  return true;
}

std::vector<std::int64_t> primitive_roots(std::int64_t p) {
  std::vector<std::int64_t> roots;
  for (std::int64_t g = 1; g < p; ++g) {
    if (is_primitive_root(g, p)) roots.push_back(g);
  }
  return roots;
}

CostasCode generate_welch_costas(std::int64_t p, std::int64_t g) {
  require(is_prime(p), std::to_string(p) + " is not prime");
  require(is_primitive_root(g, p),
          std::to_string(g) + " is not a primitive root modulo " + std::to_string(p));
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(p - 1));
  std::int64_t v = 1;
  for (std::int64_t i = 1; i < p; ++i) {
    v = mulmod(v, g, p);
    seq.push_back(static_cast<int>(v));
  }
  return CostasCode(std::move(seq));
}

bool verify_costas(const std::vector<int>& code) {
  require(!code.empty(), "empty Costas code");
  require(is_permutation_of_1_to_n(code), "code is not a permutation of 1..N");
  const std::size_t n = code.size();
  std::unordered_set<int> row;
  for (std::size_t h = 1; h < n; ++h) {
    row.clear();
    for (std::size_t i = 0; i + h < n; ++i) {
      if (!row.insert(code[i + h] - code[i]).second) return false;
    }
  }
  return true;
}

}  // namespace wavedesign
