#include "sftroof/roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sftroof {

double default_c(std::size_t ambient_alphabet) {
  if (ambient_alphabet < 2) {
    throw Error(ErrorKind::kInvalidArgument, "ambient alphabet needs >= 2 symbols");
  }
  return std::max(2.0, std::log(static_cast<double>(ambient_alphabet))) + 0.5;
}

void validate_c(double c, std::size_t ambient_alphabet) {
  const double floor =
      std::max(2.0, std::log(static_cast<double>(ambient_alphabet)));
  if (!(c > floor)) {
    throw Error(ErrorKind::kInvalidArgument,
                "c must exceed max{2, log d} = " + std::to_string(floor));
  }
}

std::size_t block_of(std::size_t j) {
  if (j == 0) throw Error(ErrorKind::kInvalidArgument, "a_j is indexed from 1");
  // Smallest n with n(n+1)/2 >= j.
  auto n = static_cast<std::size_t>(
      std::floor((std::sqrt(8.0 * static_cast<double>(j) + 1.0) - 1.0) / 2.0));
  while (n * (n + 1) / 2 < j) ++n;
  while (n > 1 && (n - 1) * n / 2 >= j) --n;
  return n;
}

// ---------------------------------------------------------------------------
// AjTable

AjTable::AjTable(double c, const LanguageTable& language, std::size_t blocks)
    : c_(c), blocks_(blocks) {
  if (blocks == 0) throw Error(ErrorKind::kInvalidArgument, "need at least one block");
  if (language.max_n() < blocks) {
    throw Error(ErrorKind::kInvalidArgument, "language table too short for a_j table");
  }
  const std::size_t size = blocks * (blocks + 1) / 2;
  values_.reserve(size);
  for (std::size_t n = 1; n <= blocks; ++n) {
    const long double rate = language.log_count(n) / static_cast<long double>(n);
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t j = values_.size() + 1;
      values_.push_back(rate + static_cast<long double>(c) /
                                   std::sqrt(static_cast<long double>(j)));
    }
  }
  prefix_.assign(size + 1, 0.0L);
  for (std::size_t j = 1; j <= size; ++j) prefix_[j] = prefix_[j - 1] + values_[j - 1];

  // For n > N write n = qk + r with 0 <= r < k <= N; sub-additivity gives
  // log|L_n|/n <= log|L_k|/k + log|L_r|/(N+1).
  tail_rate_ = std::numeric_limits<long double>::infinity();
  long double worst_rest = 0.0L;
  for (std::size_t k = 1; k <= blocks; ++k) {
    worst_rest = std::max(worst_rest, language.log_count(k - 1));
    tail_rate_ = std::min(tail_rate_, language.log_count(k) / static_cast<long double>(k) +
                                          worst_rest / static_cast<long double>(blocks + 1));
  }

  suffix_max_.assign(size + 1, -std::numeric_limits<long double>::infinity());
  for (std::size_t m = size; m-- > 0;) {
    suffix_max_[m] = std::max(suffix_max_[m + 1], values_[m]);
  }
}

double AjTable::value(std::size_t j) const {
  if (j == 0 || j > values_.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "a_j requested outside the table: j = " + std::to_string(j));
  }
  return static_cast<double>(values_[j - 1]);
}

long double AjTable::prefix_sum_extended(std::size_t l) const {
  if (l >= prefix_.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "a_j prefix sum outside the table: l = " + std::to_string(l));
  }
  return prefix_[l];
}

double AjTable::prefix_sum(std::size_t l) const {
  return static_cast<double>(prefix_sum_extended(l));
}

double AjTable::sup_after(std::size_t m) const {
  const std::size_t size = values_.size();
  const std::size_t first_untabulated = std::max(m, size) + 1;
  const long double tail =
      tail_rate_ + static_cast<long double>(c_) /
                       std::sqrt(static_cast<long double>(first_untabulated));
  if (m >= size) return static_cast<double>(tail);
  return static_cast<double>(std::max(suffix_max_[m], tail));
}

double a_value(const AjTable& aj, std::size_t j) { return aj.value(j); }

// ---------------------------------------------------------------------------
// beta

std::vector<Symbol> BetaMap::domain() const {
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < successor.size(); ++i) {
    if (successor[i]) out.push_back(static_cast<Symbol>(i));
  }
  return out;
}

std::vector<std::vector<Symbol>> beta_alternatives(const TransitionMatrix& ambient,
                                                   const TransitionMatrix& target) {
  const std::size_t d = ambient.size();
  std::vector<std::vector<Symbol>> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (ambient(i, j) && !target(i, j)) out[i].push_back(static_cast<Symbol>(j));
    }
  }
  return out;
}

BetaMap beta_choice(const TransitionMatrix& ambient, const TransitionMatrix& target) {
  BetaMap beta;
  const auto alternatives = beta_alternatives(ambient, target);
  beta.successor.resize(alternatives.size());
  for (std::size_t i = 0; i < alternatives.size(); ++i) {
    if (!alternatives[i].empty()) beta.successor[i] = alternatives[i].front();
  }
  return beta;
}

// ---------------------------------------------------------------------------
// RoofSpec

RoofSpec::RoofSpec(TransitionMatrix ambient, TransitionMatrix target,
                   const RoofOptions& options)
    : ambient_(std::move(ambient)), alpha_(options.alpha) {
  if (target.size() != ambient_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "target and ambient sizes differ");
  }
  if (!target.is_subset_of(ambient_)) {
    throw Error(ErrorKind::kInvalidArgument, "target is not inside the ambient shift");
  }
  if (ambient_.is_zero() || !(essentialize(ambient_) == ambient_)) {
    throw Error(ErrorKind::kInvalidArgument, "ambient matrix must be essential");
  }
  if (!(alpha_ > 0.0 && alpha_ < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  target_ = essentialize(target);
  if (target_.is_zero()) {
    throw Error(ErrorKind::kEmptyShift, "target shift Y is empty");
  }
  spectral_ = entropy_spectral(target_, options.spectral);
  h_y_ = spectral_.entropy();
  if (!(h_y_ > 1e-12)) {
    throw Error(ErrorKind::kZeroEntropy,
                "target shift Y has zero entropy; the construction needs h(Y) > 0");
  }
  double c = default_c(ambient_.size());
  if (options.c) {
    validate_c(*options.c, ambient_.size());
    c = *options.c;
  }
  const std::size_t blocks = block_of(std::max<std::size_t>(options.min_j, 1));
  language_ = language_table(target_, std::max(options.language_n, blocks),
                             options.exact_threshold);
  perron_ = perron_bounds(language_, spectral_.lambda, language_.max_n());
  aj_ = AjTable(c, language_, blocks);
  beta_ = beta_choice(ambient_, target_);
}

RoofSpec build_roof(const Sft& y, const RoofOptions& options) {
  if (y.step() > 1) {
    Recoding rec = higher_block_recode(y);
    RoofSpec spec(rec.ambient, rec.target, options);
    spec.set_recoding(std::move(rec));
    return spec;
  }
  return build_roof(to_matrix(y), options);
}

RoofSpec build_roof(const TransitionMatrix& y, const RoofOptions& options) {
  return RoofSpec(TransitionMatrix::full(y.size()), y, options);
}

// ---------------------------------------------------------------------------
// Evaluation on words

namespace {

void check_word(const RoofSpec& spec, std::span<const Symbol> w) {
  if (w.empty()) throw Error(ErrorKind::kInvalidArgument, "empty word");
  for (Symbol s : w) {
    if (s >= spec.alphabet_size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "symbol " + std::to_string(s) + " outside the ambient alphabet");
    }
  }
}

}  // namespace

std::optional<std::size_t> first_violation(const RoofSpec& spec,
                                           std::span<const Symbol> w) {
  check_word(spec, w);
  const TransitionMatrix& a = spec.target();
  for (std::size_t t = 1; t < w.size(); ++t) {
    if (!a(w[t - 1], w[t])) return t;
  }
  if (!spec.is_live(w.back())) return w.size();
  return std::nullopt;
}

PotentialEval g_eval(const RoofSpec& spec, std::span<const Symbol> w) {
  if (const auto t = first_violation(spec, w)) {
    const double v = -spec.aj().value(*t);
    return {PotentialEval::Kind::kViolation, *t, v, v};
  }
  const std::size_t m = w.size() - 1;
  return {PotentialEval::Kind::kAdmissiblePrefix, m, -spec.aj().sup_after(m),
          -spec.h_y()};
}

PotentialEval roof_eval(const RoofSpec& spec, std::span<const Symbol> forward) {
  PotentialEval g = g_eval(spec, forward);
  return {g.kind, g.position, -g.hi, -g.lo};
}

// ---------------------------------------------------------------------------
// Eventually periodic points

Symbol Lasso::at(std::size_t position) const {
  if (position == 0) throw Error(ErrorKind::kInvalidArgument, "positions are 1-based");
  if (position <= prefix.size()) return prefix[position - 1];
  if (cycle.empty()) throw Error(ErrorKind::kInvalidArgument, "lasso without cycle");
  return cycle[(position - prefix.size() - 1) % cycle.size()];
}

double g_exact(const RoofSpec& spec, const Lasso& point, std::size_t i) {
  const TransitionMatrix& a = spec.target();
  // Past max(i, |prefix|+1) one full period covers every remaining transition.
  const std::size_t start = std::max(i, point.prefix.size() + 1);
  const std::size_t last = start + point.cycle.size() - 1;
  for (std::size_t t = i; t <= last; ++t) {
    if (!a(point.at(t), point.at(t + 1))) return -spec.aj().value(t - i + 1);
  }
  return -spec.h_y();
}

double birkhoff_exact(const RoofSpec& spec, const Lasso& point, std::size_t n,
                      double scale) {
  long double sum = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) sum += g_exact(spec, point, i);
  return static_cast<double>(static_cast<long double>(scale) * sum);
}

bool is_ambient_point(const RoofSpec& spec, const Lasso& point) {
  if (point.cycle.empty()) return false;
  const std::size_t end = point.prefix.size() + point.cycle.size();
  for (std::size_t t = 1; t <= end; ++t) {
    if (!spec.ambient()(point.at(t), point.at(t + 1))) return false;
  }
  return true;
}

namespace {

template <typename Choose>
Lasso close_lasso(const Word& w, Choose&& choose) {
  Word seq{w.back()};
  std::map<Symbol, std::size_t> seen{{w.back(), 0}};
  while (true) {
    const Symbol next = choose(seq.back());
    if (const auto it = seen.find(next); it != seen.end()) {
      Lasso out;
      out.prefix = w;
      const std::size_t idx = it->second;
      if (idx == 0) {
        out.cycle.assign(seq.begin() + 1, seq.end());
        out.cycle.push_back(seq.front());
      } else {
        out.prefix.insert(out.prefix.end(), seq.begin() + 1,
                          seq.begin() + static_cast<std::ptrdiff_t>(idx));
        out.cycle.assign(seq.begin() + static_cast<std::ptrdiff_t>(idx), seq.end());
      }
      return out;
    }
    seen.emplace(next, seq.size());
    seq.push_back(next);
  }
}

Symbol least_successor(const TransitionMatrix& m, Symbol s) {
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m(s, j)) return static_cast<Symbol>(j);
  }
  throw Error(ErrorKind::kInvalidArgument,
              "symbol " + std::to_string(s) + " has no successor");
}

}  // namespace

Lasso extend_into_target(const RoofSpec& spec, const Word& w) {
  check_word(spec, w);
  if (!spec.is_live(w.back())) {
    throw Error(ErrorKind::kInvalidArgument, "word ends outside L_1(Y)");
  }
  return close_lasso(w, [&](Symbol s) { return least_successor(spec.target(), s); });
}

Lasso extend_ambient(const RoofSpec& spec, const Word& w) {
  check_word(spec, w);
  return close_lasso(w, [&](Symbol s) { return least_successor(spec.ambient(), s); });
}

Lasso extend_ambient_random(const RoofSpec& spec, const Word& w,
                            std::mt19937_64& rng, std::size_t max_walk) {
  check_word(spec, w);
  const TransitionMatrix& b = spec.ambient();
  auto random_successor = [&](Symbol s) {
    std::vector<Symbol> options;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b(s, j)) options.push_back(static_cast<Symbol>(j));
    }
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    return options[pick(rng)];
  };
  Word walk = w;
  std::uniform_int_distribution<std::size_t> length(0, max_walk);
  for (std::size_t k = length(rng); k > 0; --k) walk.push_back(random_successor(walk.back()));
  return close_lasso(walk, random_successor);
}

}  // namespace sftroof
