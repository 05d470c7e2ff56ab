#include "sftroof/subadditive.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sftroof/error.hpp"

namespace sftroof {

namespace {

bool exceeds(double lhs, double rhs) {
  return lhs > rhs + kSubadditiveRelTol * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

template <typename T, typename Exceeds>
SubadditivityCheck check_impl(std::span<const T> b, Exceeds&& exceeds_fn) {
  SubadditivityCheck out;
  const std::size_t n = b.size();
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i; i + j <= n; ++j) {
      if (exceeds_fn(b[i + j - 1], b[i - 1] + b[j - 1])) {
        out.holds = false;
        out.witness = std::make_pair(i, j);
        return out;
      }
    }
  }
  return out;
}

void check_lemma_indices(std::size_t size, std::size_t n, std::size_t k) {
  if (n == 0 || k == 0 || k > n) {
    throw Error(ErrorKind::kInvalidArgument, "lemma needs 1 <= k <= n");
  }
  if (n * (n - 1) / 2 + k > size) {
    throw Error(ErrorKind::kInvalidArgument,
                "sequence too short: needs index " + std::to_string(n * (n - 1) / 2 + k));
  }
}

}  // namespace

SubadditivityCheck check_subadditive(std::span<const double> b) {
  return check_impl(b, [](double lhs, double rhs) { return exceeds(lhs, rhs); });
}

SubadditivityCheck check_subadditive(std::span<const std::int64_t> b) {
  return check_impl(b, [](std::int64_t lhs, std::int64_t rhs) { return lhs > rhs; });
}

SubadditiveSeq::SubadditiveSeq(std::vector<double> values) : values_(std::move(values)) {
  const auto check = check_subadditive(std::span<const double>(values_));
  if (!check.holds) {
    throw Error(ErrorKind::kInvalidArgument,
                "sequence is not sub-additive at (" + std::to_string(check.witness->first) +
                    ", " + std::to_string(check.witness->second) + ")");
  }
}

LemmaResult<double> lemma_inequality(std::span<const double> b, std::size_t n,
                                     std::size_t k) {
  check_lemma_indices(b.size(), n, k);
  long double head = 0.0L;
  for (std::size_t i = 1; i < n; ++i) head += b[i - 1];
  const long double nn = static_cast<long double>(n);
  const double lhs = static_cast<double>(nn * head + static_cast<long double>(k) * b[n - 1]);
  const double rhs = static_cast<double>(nn * b[n * (n - 1) / 2 + k - 1]);
  const bool holds = lhs >= rhs - kSubadditiveRelTol * std::max(1.0, std::fabs(lhs));
  return {lhs, rhs, holds};
}

LemmaResult<boost::multiprecision::cpp_int> lemma_inequality(
    std::span<const std::int64_t> b, std::size_t n, std::size_t k) {
  using boost::multiprecision::cpp_int;
  check_lemma_indices(b.size(), n, k);
  cpp_int head = 0;
  for (std::size_t i = 1; i < n; ++i) head += b[i - 1];
  cpp_int lhs = cpp_int(n) * head + cpp_int(k) * b[n - 1];
  cpp_int rhs = cpp_int(n) * b[n * (n - 1) / 2 + k - 1];
  const bool holds = lhs >= rhs;
  return {std::move(lhs), std::move(rhs), holds};
}

SubadditiveSeq random_subadditive(std::size_t length, std::uint64_t seed) {
  if (length == 0) throw Error(ErrorKind::kInvalidArgument, "length must be >= 1");
  std::mt19937_64 rng(seed);
  // Open at 0: 1 - U[0,1) lies in (0, 1].
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> b(length);
  const double c1 = 1.0 - unit(rng);
  b[0] = c1;
  for (std::size_t n = 2; n <= length; ++n) {
    double value = (1.0 - unit(rng)) + static_cast<double>(n) * c1;
    for (std::size_t i = 1; i < n; ++i) value = std::min(value, b[i - 1] + b[n - i - 1]);
    b[n - 1] = value;
  }
  return SubadditiveSeq(std::move(b));
}

}  // namespace sftroof
