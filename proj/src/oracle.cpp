#include "sftroof/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sftroof::oracle {

void for_each_ambient_word(const TransitionMatrix& ambient, std::size_t n,
                           const std::function<void(const Word&)>& visit) {
  if (n == 0) return;
  Word w;
  w.reserve(n);
  std::function<void()> grow = [&]() {
    if (w.size() == n) {
      visit(w);
      return;
    }
    for (std::size_t s = 0; s < ambient.size(); ++s) {
      if (!w.empty() && !ambient(w.back(), s)) continue;
      w.push_back(static_cast<Symbol>(s));
      grow();
      w.pop_back();
    }
  };
  grow();
}

std::uint64_t ambient_word_count(const TransitionMatrix& ambient, std::size_t n) {
  std::uint64_t count = 0;
  for_each_ambient_word(ambient, n, [&](const Word&) { ++count; });
  return count;
}

namespace {

// Plain sum of positive terms relative to the first term's scale.
class LogSum {
 public:
  void add(double log_term) {
    if (terms_.empty() || log_term > peak_) peak_ = log_term;
    terms_.push_back(log_term);
  }
  double value() const {
    if (terms_.empty()) return -std::numeric_limits<double>::infinity();
    long double sum = 0.0L;
    for (double t : terms_) sum += std::exp(static_cast<long double>(t - peak_));
    return peak_ + static_cast<double>(std::log(sum));
  }

 private:
  std::vector<double> terms_;
  double peak_ = 0.0;
};

}  // namespace

double log_partition_sum(const RoofSpec& spec, std::size_t n, double scale) {
  LogSum sum;
  for_each_ambient_word(spec.ambient(), n, [&](const Word& w) {
    const Lasso point = spec.is_live(w.back()) ? extend_into_target(spec, w)
                                               : extend_ambient(spec, w);
    sum.add(birkhoff_exact(spec, point, n, scale));
  });
  return sum.value();
}

double log_q(const RoofSpec& spec, std::size_t r, const BetaMap& beta, double scale) {
  LogSum sum;
  for_each_ambient_word(spec.ambient(), r, [&](const Word& w) {
    const Symbol last = w.back();
    if (last >= beta.successor.size() || !beta.successor[last]) return;
    Word head = w;
    head.push_back(*beta.successor[last]);
    sum.add(birkhoff_exact(spec, extend_ambient(spec, head), r, scale));
  });
  return sum.value();
}

}  // namespace sftroof::oracle
