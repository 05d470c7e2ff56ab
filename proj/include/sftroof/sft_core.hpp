#pragma once

// Finite alphabets, 0/1 transition matrices and subshifts of finite type.
//
// Symbols are the integers 0..d-1. A one-step shift is described by a d x d
// matrix; symbols that do not occur in the shift have all-zero rows and
// columns once the matrix has been essentialized, so every shift lives inside
// the full alphabet of its ambient shift.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sftroof/error.hpp"

namespace sftroof {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using BigCount = boost::multiprecision::cpp_int;

std::string format_word(std::span<const Symbol> word);

class Alphabet {
 public:
  explicit Alphabet(std::size_t size);

  std::size_t size() const { return size_; }
  bool contains(Symbol s) const { return s < size_; }

  bool operator==(const Alphabet&) const = default;

 private:
  std::size_t size_;
};

class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  // All-zero d x d matrix.
  explicit TransitionMatrix(std::size_t d);

  static TransitionMatrix full(std::size_t d);
  static TransitionMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t size() const { return d_; }
  bool operator()(std::size_t i, std::size_t j) const {
    return entries_[i * d_ + j] != 0;
  }
  void set(std::size_t i, std::size_t j, bool allowed) {
    entries_[i * d_ + j] = allowed ? 1 : 0;
  }

  // A symbol is live when its row has at least one 1.
  bool is_live(std::size_t i) const;
  bool is_zero() const;
  std::size_t edge_count() const;
  // Entrywise A <= other.
  bool is_subset_of(const TransitionMatrix& other) const;
  TransitionMatrix submatrix(std::span<const Symbol> symbols) const;
  std::vector<std::vector<int>> rows() const;

  bool operator==(const TransitionMatrix&) const = default;

 private:
  std::size_t d_ = 0;
  std::vector<std::uint8_t> entries_;
};

// A subshift of finite type over a finite alphabet, described either by a
// transition matrix (one-step) or by forbidden words of uniform length step+1.
class Sft {
 public:
  static Sft from_forbidden_words(Alphabet alphabet,
                                  const std::vector<Word>& forbidden);
  static Sft from_matrix(TransitionMatrix matrix);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t step() const { return step_; }
  // Normalized forbidden words, sorted, all of length step()+1. Empty when
  // the shift was given by a matrix.
  const std::vector<Word>& forbidden() const { return forbidden_; }
  const std::optional<TransitionMatrix>& matrix() const { return matrix_; }

  bool is_forbidden(std::span<const Symbol> word) const;

 private:
  Sft(Alphabet alphabet, std::size_t step) : alphabet_(alphabet), step_(step) {}

  Alphabet alphabet_;
  std::size_t step_;
  std::vector<Word> forbidden_;
  std::vector<std::uint8_t> forbidden_lookup_;  // indexed by base-d code
  std::optional<TransitionMatrix> matrix_;
};

TransitionMatrix to_matrix(const Sft& sft);

// Repeatedly removes edges into symbols without successors until every edge
// ends at a live symbol. The shift space is unchanged.
TransitionMatrix essentialize(const TransitionMatrix& a);

// Exact |L_n| for an essentialized matrix: walks with n symbols that start at a
// live symbol.
BigCount language_count(const TransitionMatrix& a, std::size_t n);
BigCount language_count(const Sft& sft, std::size_t n);

long double log_big(const BigCount& value);

class LanguageTable {
 public:
  LanguageTable() = default;
  LanguageTable(std::vector<BigCount> counts, std::vector<long double> log_counts);

  // Largest n covered by the table.
  std::size_t max_n() const { return log_counts_.size(); }
  // Largest n for which an exact count is stored.
  std::size_t exact_max_n() const { return counts_.size(); }
  const BigCount& count(std::size_t n) const;
  long double log_count(std::size_t n) const;
  // inf over the table of (1/n) log |L_n|.
  long double entropy_estimate() const { return entropy_estimate_; }

 private:
  std::vector<BigCount> counts_;
  std::vector<long double> log_counts_;
  long double entropy_estimate_ = 0.0L;
};

inline constexpr std::size_t kDefaultExactThreshold = 300;

LanguageTable language_table(const TransitionMatrix& a, std::size_t n_max,
                             std::size_t exact_threshold = kDefaultExactThreshold);
LanguageTable language_table(const Sft& sft, std::size_t n_max,
                             std::size_t exact_threshold = kDefaultExactThreshold);

struct SpectralOptions {
  long double tolerance = 1e-13L;
  std::size_t max_iterations = 1'000'000;
};

struct SpectralData {
  long double lambda = 0.0L;
  std::vector<long double> left;   // sums to 1
  std::vector<long double> right;  // sums to 1
  long double residual = 0.0L;
  bool converged = false;
  // Set when power iteration stalled and lambda came from the components.
  bool from_components = false;

  double entropy() const;
};

SpectralData entropy_spectral(const TransitionMatrix& a,
                              const SpectralOptions& options = {});

// C1 = min, C2 = max of |L_n| / lambda^n over the table.
struct PerronBounds {
  long double c1 = 0.0L;
  long double c2 = 0.0L;
};

PerronBounds perron_bounds(const LanguageTable& table, long double lambda,
                           std::size_t n_max);

struct Component {
  std::vector<Symbol> symbols;  // ascending
  TransitionMatrix submatrix;
  long double lambda = 0.0L;
  double entropy = 0.0;
};

// Strongly connected components carrying at least one internal edge, sorted
// by entropy descending, then by smallest symbol.
std::vector<Component> irreducible_components(const TransitionMatrix& a);

bool is_irreducible(const TransitionMatrix& a);

// Stationary Markov measure on a finite alphabet.
struct MarkovMeasure {
  std::vector<double> stationary;
  std::vector<std::vector<double>> kernel;  // row-stochastic on used rows

  std::size_t size() const { return stationary.size(); }
  double entropy() const;
  // max |(pi P)_j - pi_j|
  double stationarity_residual() const;
  // Same measure on a larger alphabet; symbols[i] is the image of state i.
  MarkovMeasure embed(std::span<const Symbol> symbols, std::size_t d) const;
};

struct ParryMeasure : MarkovMeasure {
  long double lambda = 0.0L;
};

ParryMeasure parry_measure(const TransitionMatrix& irreducible,
                           const SpectralOptions& options = {});

// M-th higher block presentation of an M-step shift as a one-step shift over
// the d^M blocks of length M. Block index is the base-d value of the block,
// first symbol most significant.
struct Recoding {
  std::size_t step = 1;
  std::size_t base_alphabet = 0;
  TransitionMatrix ambient;  // overlap shift (full shift when step == 1)
  TransitionMatrix target;   // essentialized, entrywise <= ambient
  std::vector<Word> blocks;
};

Recoding higher_block_recode(const Sft& sft);

}  // namespace sftroof
