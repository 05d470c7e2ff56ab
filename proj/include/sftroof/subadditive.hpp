#pragma once

// Sub-additive sequences b_{i+j} <= b_i + b_j and the block inequality
//
//   n (b_1 + ... + b_{n-1}) + k b_n >= n b_{n(n-1)/2 + k},   1 <= k <= n.
//
// Sequences are 1-indexed in the math and stored 0-indexed: b_n is values[n-1].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sftroof {

inline constexpr double kSubadditiveRelTol = 1e-12;

struct SubadditivityCheck {
  bool holds = true;
  // First (i, j), i <= j, in lexicographic order with b_{i+j} > b_i + b_j.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

SubadditivityCheck check_subadditive(std::span<const double> b);
SubadditivityCheck check_subadditive(std::span<const std::int64_t> b);

class SubadditiveSeq {
 public:
  // Throws if the values are not sub-additive.
  explicit SubadditiveSeq(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator()(std::size_t n) const { return values_.at(n - 1); }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

template <typename T>
struct LemmaResult {
  T lhs;
  T rhs;
  bool holds;
};

// Floating-point form; holds iff lhs >= rhs - 1e-12 max(1, |lhs|).
LemmaResult<double> lemma_inequality(std::span<const double> b, std::size_t n,
                                     std::size_t k);
// Exact form for integer-valued sequences.
LemmaResult<boost::multiprecision::cpp_int> lemma_inequality(
    std::span<const std::int64_t> b, std::size_t n, std::size_t k);

// Deterministic in the seed: candidates c_n in (0, 1], b_1 = c_1 and
// b_n = min(c_n + n c_1, min_{i<n} b_i + b_{n-i}).
SubadditiveSeq random_subadditive(std::size_t length, std::uint64_t seed);

}  // namespace sftroof
