#pragma once

// The explicit potential g and roof rho = -g.
//
// g is -a_n at a point whose first transition outside the target shift Y
// happens at position n, and -h(Y) on Y itself. The sequence a_j runs through
// blocks: block n holds the n indices n(n-1)/2 < j <= n(n+1)/2 and
//
//   a_j = (1/n) log |L_n(Y)| + c / sqrt(j).

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sftroof/sft_core.hpp"

namespace sftroof {

// max{2, log d} + 1/2.
double default_c(std::size_t ambient_alphabet);
// Throws unless c > max{2, log d}.
void validate_c(double c, std::size_t ambient_alphabet);

// Smallest block count N with N(N+1)/2 >= j.
std::size_t block_of(std::size_t j);

class AjTable {
 public:
  AjTable() = default;
  // Tabulates a_j for every j in the first `blocks` blocks. The language table
  // must reach n = blocks.
  AjTable(double c, const LanguageTable& language, std::size_t blocks);

  double c() const { return c_; }
  std::size_t blocks() const { return blocks_; }
  // Largest tabulated index, blocks(blocks()+1)/2.
  std::size_t size() const { return values_.size(); }

  double value(std::size_t j) const;
  // sum_{i=1}^{l} a_i, l <= size().
  double prefix_sum(std::size_t l) const;
  long double prefix_sum_extended(std::size_t l) const;
  // Certified upper bound on sup_{j > m} a_j, valid for every m including
  // m >= size().
  double sup_after(std::size_t m) const;
  // Bound used for indices past the table; see sup_after.
  double tail_rate_bound() const { return static_cast<double>(tail_rate_); }

 private:
  double c_ = 0.0;
  std::size_t blocks_ = 0;
  std::vector<long double> values_;
  std::vector<long double> prefix_;      // prefix_[l] = sum of first l
  std::vector<long double> suffix_max_;  // suffix_max_[m] = max_{j>m} a_j
  long double tail_rate_ = 0.0L;
};

double a_value(const AjTable& aj, std::size_t j);

// For each symbol of A0 = {i : some ambient successor j has A_ij = 0}, the
// chosen successor beta(i).
struct BetaMap {
  std::vector<std::optional<Symbol>> successor;  // indexed by symbol

  std::vector<Symbol> domain() const;
  bool empty() const { return domain().empty(); }
};

// Least ambient successor outside the target for every symbol of A0.
BetaMap beta_choice(const TransitionMatrix& ambient,
                    const TransitionMatrix& target);
// Every admissible successor per symbol of A0 (the choices beta ranges over).
std::vector<std::vector<Symbol>> beta_alternatives(const TransitionMatrix& ambient,
                                                   const TransitionMatrix& target);

struct RoofOptions {
  std::optional<double> c;
  double alpha = 0.5;
  // a_j is tabulated at least up to this index.
  std::size_t min_j = 1024;
  // |L_n| is tabulated at least up to this length.
  std::size_t language_n = 300;
  std::size_t exact_threshold = kDefaultExactThreshold;
  SpectralOptions spectral;
};

inline constexpr const char* kBlockConvention = "n(n-1)/2 < j <= n(n+1)/2";

class RoofSpec {
 public:
  // Target Y inside a one-step ambient shift; target must be entrywise below
  // the ambient matrix. The target is essentialized here.
  RoofSpec(TransitionMatrix ambient, TransitionMatrix target,
           const RoofOptions& options = {});

  const TransitionMatrix& ambient() const { return ambient_; }
  const TransitionMatrix& target() const { return target_; }
  std::size_t alphabet_size() const { return ambient_.size(); }
  double alpha() const { return alpha_; }
  double c() const { return aj_.c(); }
  const AjTable& aj() const { return aj_; }
  double h_y() const { return h_y_; }
  const BetaMap& beta() const { return beta_; }
  const LanguageTable& language() const { return language_; }
  const SpectralData& spectral() const { return spectral_; }
  const PerronBounds& perron() const { return perron_; }
  // Symbol is in L_1(Y).
  bool is_live(Symbol s) const { return target_.is_live(s); }

  // Set by build_roof when the target came from an M-step shift.
  const std::optional<Recoding>& recoding() const { return recoding_; }
  void set_recoding(Recoding r) { recoding_ = std::move(r); }

 private:
  TransitionMatrix ambient_;
  TransitionMatrix target_;
  double alpha_;
  double h_y_ = 0.0;
  SpectralData spectral_;
  LanguageTable language_;
  PerronBounds perron_;
  AjTable aj_;
  BetaMap beta_;
  std::optional<Recoding> recoding_;
};

// Full pipeline: recode M-step targets, essentialize, reject empty and
// zero-entropy targets, tabulate a_j.
RoofSpec build_roof(const Sft& y, const RoofOptions& options = {});
// Target given directly as a matrix inside the full shift on its alphabet.
RoofSpec build_roof(const TransitionMatrix& y, const RoofOptions& options = {});

// Least t <= len-1 with A(w_t, w_{t+1}) = 0; a dead final symbol counts as a
// violation at len. Positions are 1-based.
std::optional<std::size_t> first_violation(const RoofSpec& spec,
                                           std::span<const Symbol> w);

struct PotentialEval {
  enum class Kind { kViolation, kAdmissiblePrefix };
  Kind kind;
  // Violation position n, or admissible depth m = len - 1.
  std::size_t position;
  double lo;
  double hi;

  bool exact() const { return kind == Kind::kViolation; }
};

PotentialEval g_eval(const RoofSpec& spec, std::span<const Symbol> w);
// rho = -g on forward coordinates of a two-sided point.
PotentialEval roof_eval(const RoofSpec& spec, std::span<const Symbol> forward);

// Eventually periodic one-sided point: prefix followed by cycle repeated.
struct Lasso {
  Word prefix;
  Word cycle;

  Symbol at(std::size_t position) const;  // 1-based
};

// Exact g at sigma^(i-1) of the point.
double g_exact(const RoofSpec& spec, const Lasso& point, std::size_t i = 1);
// scale * S_n g at the point.
double birkhoff_exact(const RoofSpec& spec, const Lasso& point, std::size_t n,
                      double scale = 1.0);
// Checks the point is admissible for the ambient shift.
bool is_ambient_point(const RoofSpec& spec, const Lasso& point);

// Extends w by a path that stays in Y forever (w must end at a live symbol).
Lasso extend_into_target(const RoofSpec& spec, const Word& w);
// Deterministic least-successor ambient extension.
Lasso extend_ambient(const RoofSpec& spec, const Word& w);
// Random ambient extension: random walk of random length, closed into a cycle.
Lasso extend_ambient_random(const RoofSpec& spec, const Word& w,
                            std::mt19937_64& rng, std::size_t max_walk = 32);

}  // namespace sftroof
