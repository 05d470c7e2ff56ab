#include "sftroof/sft_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace sftroof {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kEmptyShift: return "empty shift";
    case ErrorKind::kZeroEntropy: return "zero entropy";
    case ErrorKind::kReducible: return "reducible matrix";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kNumerical: return "numerical failure";
  }
  return "unknown";
}

namespace {

// Upper limit on d^(M+1) for forbidden-word lookup and on recoded alphabets.
constexpr std::size_t kMaxCodeSpace = std::size_t{1} << 22;

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (result > kMaxCodeSpace / base) {
      throw Error(ErrorKind::kInvalidArgument,
                  "alphabet^step too large for block recoding");
    }
    result *= base;
  }
  return result;
}

std::size_t encode(std::span<const Symbol> word, std::size_t d) {
  std::size_t code = 0;
  for (Symbol s : word) code = code * d + s;
  return code;
}

Word decode(std::size_t code, std::size_t length, std::size_t d) {
  Word word(length);
  for (std::size_t i = length; i-- > 0;) {
    word[i] = static_cast<Symbol>(code % d);
    code /= d;
  }
  return word;
}

}  // namespace

std::string format_word(std::span<const Symbol> word) {
  std::ostringstream out;
  bool wide = false;
  for (Symbol s : word) wide = wide || s > 9;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (wide && i > 0) out << '.';
    out << word[i];
  }
  return out.str();
}

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size == 0) throw Error(ErrorKind::kInvalidArgument, "empty alphabet");
}

// ---------------------------------------------------------------------------
// TransitionMatrix

TransitionMatrix::TransitionMatrix(std::size_t d) : d_(d), entries_(d * d, 0) {}

TransitionMatrix TransitionMatrix::full(std::size_t d) {
  TransitionMatrix m(d);
  std::fill(m.entries_.begin(), m.entries_.end(), std::uint8_t{1});
  return m;
}

TransitionMatrix TransitionMatrix::from_rows(
    const std::vector<std::vector<int>>& rows) {
  const std::size_t d = rows.size();
  if (d == 0) throw Error(ErrorKind::kInvalidArgument, "empty matrix");
  TransitionMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) {
      throw Error(ErrorKind::kInvalidArgument,
                  "matrix row " + std::to_string(i) + " has length " +
                      std::to_string(rows[i].size()) + ", expected " +
                      std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1) {
        throw Error(ErrorKind::kInvalidArgument,
                    "matrix entries must be 0 or 1");
      }
      m.set(i, j, v == 1);
    }
  }
  return m;
}

bool TransitionMatrix::is_live(std::size_t i) const {
  const auto row = entries_.begin() + static_cast<std::ptrdiff_t>(i * d_);
  return std::any_of(row, row + static_cast<std::ptrdiff_t>(d_),
                     [](std::uint8_t v) { return v != 0; });
}

bool TransitionMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](std::uint8_t v) { return v == 0; });
}

std::size_t TransitionMatrix::edge_count() const {
  return static_cast<std::size_t>(
      std::count(entries_.begin(), entries_.end(), std::uint8_t{1}));
}

bool TransitionMatrix::is_subset_of(const TransitionMatrix& other) const {
  if (other.d_ != d_) return false;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k] > other.entries_[k]) return false;
  }
  return true;
}

TransitionMatrix TransitionMatrix::submatrix(
    std::span<const Symbol> symbols) const {
  TransitionMatrix sub(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    for (std::size_t j = 0; j < symbols.size(); ++j) {
      sub.set(i, j, (*this)(symbols[i], symbols[j]));
    }
  }
  return sub;
}

std::vector<std::vector<int>> TransitionMatrix::rows() const {
  std::vector<std::vector<int>> out(d_, std::vector<int>(d_));
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j < d_; ++j) out[i][j] = (*this)(i, j) ? 1 : 0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sft

Sft Sft::from_forbidden_words(Alphabet alphabet,
                              const std::vector<Word>& forbidden) {
  const std::size_t d = alphabet.size();
  std::size_t max_len = 0;
  for (const Word& w : forbidden) {
    if (w.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "empty forbidden word");
    }
    for (Symbol s : w) {
      if (!alphabet.contains(s)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "symbol " + std::to_string(s) + " outside alphabet of size " +
                        std::to_string(d));
      }
    }
    max_len = std::max(max_len, w.size());
  }
  Sft sft(alphabet, std::max<std::size_t>(1, max_len == 0 ? 1 : max_len - 1));
  const std::size_t len = sft.step_ + 1;
  const std::size_t space = checked_power(d, len);
  sft.forbidden_lookup_.assign(space, 0);
  // A length-(M+1) word is forbidden iff it contains a forbidden subword.
  for (std::size_t code = 0; code < space; ++code) {
    const Word w = decode(code, len, d);
    for (const Word& f : forbidden) {
      const auto hit = std::search(w.begin(), w.end(), f.begin(), f.end());
      if (hit != w.end()) {
        sft.forbidden_lookup_[code] = 1;
        sft.forbidden_.push_back(w);
        break;
      }
    }
  }
  return sft;
}

Sft Sft::from_matrix(TransitionMatrix matrix) {
  Sft sft(Alphabet(matrix.size()), 1);
  sft.matrix_ = std::move(matrix);
  return sft;
}

bool Sft::is_forbidden(std::span<const Symbol> word) const {
  if (word.size() != step_ + 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "is_forbidden expects a word of length step+1");
  }
  if (matrix_) return !(*matrix_)(word[0], word[1]);
  return forbidden_lookup_[encode(word, alphabet_.size())] != 0;
}

TransitionMatrix to_matrix(const Sft& sft) {
  if (sft.matrix()) return *sft.matrix();
  if (sft.step() != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "to_matrix needs a one-step shift; recode first");
  }
  const std::size_t d = sft.alphabet().size();
  TransitionMatrix a = TransitionMatrix::full(d);
  for (const Word& f : sft.forbidden()) a.set(f[0], f[1], false);
  return a;
}

TransitionMatrix essentialize(const TransitionMatrix& a) {
  TransitionMatrix m = a;
  const std::size_t d = m.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < d; ++j) {
      if (m.is_live(j)) continue;
      for (std::size_t i = 0; i < d; ++i) {
        if (m(i, j)) {
          m.set(i, j, false);
          changed = true;
        }
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Language counts

long double log_big(const BigCount& value) {
  if (value <= 0) return -std::numeric_limits<long double>::infinity();
  const std::size_t msb = boost::multiprecision::msb(value);
  if (msb < 63) {
    return std::log(static_cast<long double>(value.convert_to<std::uint64_t>()));
  }
  const std::size_t shift = msb - 62;
  const BigCount top = value >> shift;
  return std::log(static_cast<long double>(top.convert_to<std::uint64_t>())) +
         static_cast<long double>(shift) * std::log(2.0L);
}

namespace {

std::vector<BigCount> step_counts(const TransitionMatrix& a,
                                  const std::vector<BigCount>& v) {
  const std::size_t d = a.size();
  std::vector<BigCount> next(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (a(i, j)) next[j] += v[i];
    }
  }
  return next;
}

}  // namespace

BigCount language_count(const TransitionMatrix& a, std::size_t n) {
  if (n == 0) return 1;
  const TransitionMatrix e = essentialize(a);
  std::vector<BigCount> v(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) v[i] = e.is_live(i) ? 1 : 0;
  for (std::size_t k = 1; k < n; ++k) v = step_counts(e, v);
  return std::accumulate(v.begin(), v.end(), BigCount{0});
}

LanguageTable::LanguageTable(std::vector<BigCount> counts,
                             std::vector<long double> log_counts)
    : counts_(std::move(counts)), log_counts_(std::move(log_counts)) {
  entropy_estimate_ = std::numeric_limits<long double>::infinity();
  for (std::size_t n = 1; n <= log_counts_.size(); ++n) {
    entropy_estimate_ = std::min(entropy_estimate_,
                                 log_counts_[n - 1] / static_cast<long double>(n));
  }
  if (log_counts_.empty()) entropy_estimate_ = 0.0L;
}

const BigCount& LanguageTable::count(std::size_t n) const {
  if (n == 0 || n > counts_.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "no exact count stored for n = " + std::to_string(n));
  }
  return counts_[n - 1];
}

long double LanguageTable::log_count(std::size_t n) const {
  if (n == 0) return 0.0L;
  if (n > log_counts_.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "language table does not reach n = " + std::to_string(n));
  }
  return log_counts_[n - 1];
}

LanguageTable language_table(const TransitionMatrix& a, std::size_t n_max,
                             std::size_t exact_threshold) {
  const TransitionMatrix e = essentialize(a);
  const std::size_t d = e.size();
  std::vector<BigCount> counts;
  std::vector<long double> logs;
  std::vector<BigCount> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = e.is_live(i) ? 1 : 0;
  const std::size_t exact_n = std::min(n_max, std::max<std::size_t>(exact_threshold, 1));
  for (std::size_t n = 1; n <= exact_n; ++n) {
    if (n > 1) v = step_counts(e, v);
    counts.push_back(std::accumulate(v.begin(), v.end(), BigCount{0}));
    logs.push_back(log_big(counts.back()));
  }
  if (n_max > exact_n) {
    // Continue in scaled extended precision: x * exp(offset) is the walk vector.
    BigCount largest = *std::max_element(v.begin(), v.end());
    long double offset = log_big(largest);
    std::vector<long double> x(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = v[i] == 0 ? 0.0L : std::exp(log_big(v[i]) - offset);
    }
    for (std::size_t n = exact_n + 1; n <= n_max; ++n) {
      std::vector<long double> y(d, 0.0L);
      for (std::size_t i = 0; i < d; ++i) {
        if (x[i] == 0.0L) continue;
        for (std::size_t j = 0; j < d; ++j) {
          if (e(i, j)) y[j] += x[i];
        }
      }
      const long double peak = *std::max_element(y.begin(), y.end());
      if (peak == 0.0L) {
        logs.push_back(-std::numeric_limits<long double>::infinity());
        x = std::move(y);
        continue;
      }
      for (long double& value : y) value /= peak;
      offset += std::log(peak);
      x = std::move(y);
      logs.push_back(offset + std::log(std::accumulate(x.begin(), x.end(), 0.0L)));
    }
  }
  return LanguageTable(std::move(counts), std::move(logs));
}

LanguageTable language_table(const Sft& sft, std::size_t n_max,
                             std::size_t exact_threshold) {
  if (sft.matrix()) return language_table(*sft.matrix(), n_max, exact_threshold);
  const Recoding rec = higher_block_recode(sft);
  const std::size_t m = sft.step();
  if (m == 1) return language_table(rec.target, n_max, exact_threshold);

  // |L_n(Y)| = |L_{n-M+1}(recoded)| for n >= M; shorter words are prefixes of
  // live blocks.
  const std::size_t block_n = n_max >= m ? n_max - m + 1 : 0;
  const LanguageTable blocks =
      language_table(rec.target, std::max<std::size_t>(block_n, 1),
                     exact_threshold >= m ? exact_threshold - m + 1 : 1);
  std::vector<BigCount> counts;
  std::vector<long double> logs;
  for (std::size_t n = 1; n <= std::min(n_max, m - 1); ++n) {
    std::set<Word> prefixes;
    for (std::size_t b = 0; b < rec.blocks.size(); ++b) {
      if (!rec.target.is_live(b)) continue;
      prefixes.emplace(rec.blocks[b].begin(),
                       rec.blocks[b].begin() + static_cast<std::ptrdiff_t>(n));
    }
    counts.emplace_back(prefixes.size());
    logs.push_back(log_big(counts.back()));
  }
  for (std::size_t n = m; n <= n_max; ++n) {
    const std::size_t k = n - m + 1;
    if (k <= blocks.exact_max_n() && counts.size() == n - 1 &&
        n <= exact_threshold) {
      counts.push_back(blocks.count(k));
    }
    logs.push_back(blocks.log_count(k));
  }
  return LanguageTable(std::move(counts), std::move(logs));
}

BigCount language_count(const Sft& sft, std::size_t n) {
  if (n == 0) return 1;
  return language_table(sft, n, n).count(n);
}

// ---------------------------------------------------------------------------
// Spectral data

double SpectralData::entropy() const {
  return lambda > 0.0L ? static_cast<double>(std::log(lambda))
                       : -std::numeric_limits<double>::infinity();
}

namespace {

struct PowerResult {
  std::vector<long double> vec;
  long double lambda = 0.0L;
  long double residual = 0.0L;
  bool converged = false;
};

// Power iteration on A + I (aperiodic, same Perron vector). transpose selects
// the left eigenvector.
PowerResult power_iterate(const TransitionMatrix& a, bool transpose,
                          const SpectralOptions& options) {
  const std::size_t d = a.size();
  auto entry = [&](std::size_t i, std::size_t j) {
    return transpose ? a(j, i) : a(i, j);
  };
  auto apply = [&](const std::vector<long double>& x) {
    std::vector<long double> y(d, 0.0L);
    for (std::size_t i = 0; i < d; ++i) {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < d; ++j) {
        if (entry(i, j)) acc += x[j];
      }
      y[i] = acc;
    }
    return y;
  };

  PowerResult out;
  std::vector<long double> x(d, 1.0L / static_cast<long double>(d));
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    std::vector<long double> ax = apply(x);
    const long double lambda = std::accumulate(ax.begin(), ax.end(), 0.0L);
    long double residual = 0.0L;
    for (std::size_t i = 0; i < d; ++i) {
      residual = std::max(residual, std::fabs(ax[i] - lambda * x[i]));
    }
    out.lambda = lambda;
    out.residual = residual;
    if (residual <= options.tolerance) {
      out.converged = true;
      break;
    }
    long double total = 0.0L;
    for (std::size_t i = 0; i < d; ++i) {
      ax[i] += x[i];
      total += ax[i];
    }
    for (long double& v : ax) v /= total;
    x = std::move(ax);
  }
  out.vec = std::move(x);
  return out;
}

long double eigen_residual(const TransitionMatrix& a, bool transpose,
                           const std::vector<long double>& x, long double lambda) {
  long double residual = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (transpose ? a(j, i) : a(i, j)) acc += x[j];
    }
    residual = std::max(residual, std::fabs(acc - lambda * x[i]));
  }
  return residual;
}

}  // namespace

SpectralData entropy_spectral(const TransitionMatrix& a,
                              const SpectralOptions& options) {
  if (a.size() == 0 || a.is_zero()) {
    throw Error(ErrorKind::kEmptyShift, "spectral radius of an empty shift");
  }
  SpectralData out;
  const PowerResult right = power_iterate(a, false, options);
  const PowerResult left = power_iterate(a, true, options);
  out.right = right.vec;
  out.left = left.vec;
  out.lambda = right.lambda;
  out.residual = std::max(right.residual, left.residual);
  out.converged = right.converged && left.converged;
  if (out.converged || is_irreducible(a)) return out;

  // Stalled on a reducible matrix (Jordan blocks between components of equal
  // radius): take lambda and vectors from the dominant component.
  const std::vector<Component> comps = irreducible_components(a);
  out.from_components = true;
  if (comps.empty()) {
    out.lambda = 0.0L;
    return out;
  }
  const Component& top = comps.front();
  out.lambda = top.lambda;
  const SpectralData sub = entropy_spectral(top.submatrix, options);
  std::fill(out.right.begin(), out.right.end(), 0.0L);
  std::fill(out.left.begin(), out.left.end(), 0.0L);
  for (std::size_t k = 0; k < top.symbols.size(); ++k) {
    out.right[top.symbols[k]] = sub.right[k];
    out.left[top.symbols[k]] = sub.left[k];
  }
  out.residual = std::max(eigen_residual(a, false, out.right, out.lambda),
                          eigen_residual(a, true, out.left, out.lambda));
  return out;
}

PerronBounds perron_bounds(const LanguageTable& table, long double lambda,
                           std::size_t n_max) {
  PerronBounds b;
  b.c1 = std::numeric_limits<long double>::infinity();
  b.c2 = 0.0L;
  const long double log_lambda = std::log(lambda);
  for (std::size_t n = 1; n <= std::min(n_max, table.max_n()); ++n) {
    const long double ratio = std::exp(table.log_count(n) -
                                       static_cast<long double>(n) * log_lambda);
    b.c1 = std::min(b.c1, ratio);
    b.c2 = std::max(b.c2, ratio);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Components

namespace {

std::vector<std::vector<Symbol>> strongly_connected(const TransitionMatrix& a) {
  const std::size_t d = a.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(d, kUnvisited), low(d, 0);
  std::vector<bool> on_stack(d, false);
  std::vector<Symbol> stack;
  std::vector<std::vector<Symbol>> out;
  std::size_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(static_cast<Symbol>(v));
    on_stack[v] = true;
    for (std::size_t w = 0; w < d; ++w) {
      if (!a(v, w)) continue;
      if (index[w] == kUnvisited) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<Symbol> comp;
      Symbol w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < d; ++v) {
    if (index[v] == kUnvisited) visit(v);
  }
  return out;
}

bool has_internal_edge(const TransitionMatrix& a,
                       const std::vector<Symbol>& comp) {
  if (comp.size() > 1) return true;
  return a(comp[0], comp[0]);
}

}  // namespace

bool is_irreducible(const TransitionMatrix& a) {
  if (a.size() == 0) return false;
  const auto sccs = strongly_connected(a);
  return sccs.size() == 1 && has_internal_edge(a, sccs[0]);
}

std::vector<Component> irreducible_components(const TransitionMatrix& a) {
  std::vector<Component> out;
  for (auto& symbols : strongly_connected(a)) {
    if (!has_internal_edge(a, symbols)) continue;
    Component c;
    c.submatrix = a.submatrix(symbols);
    c.symbols = std::move(symbols);
    c.lambda = entropy_spectral(c.submatrix).lambda;
    c.entropy = static_cast<double>(std::log(c.lambda));
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Component& x, const Component& y) {
    if (x.entropy != y.entropy) return x.entropy > y.entropy;
    return x.symbols.front() < y.symbols.front();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Markov and Parry measures

double MarkovMeasure::entropy() const {
  long double h = 0.0L;
  for (std::size_t i = 0; i < stationary.size(); ++i) {
    long double row = 0.0L;
    for (double p : kernel[i]) {
      if (p > 0.0) row -= static_cast<long double>(p) * std::log(static_cast<long double>(p));
    }
    h += stationary[i] * row;
  }
  return static_cast<double>(h);
}

double MarkovMeasure::stationarity_residual() const {
  const std::size_t d = stationary.size();
  double residual = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < d; ++i) acc += static_cast<long double>(stationary[i]) * kernel[i][j];
    residual = std::max(residual, static_cast<double>(std::fabs(acc - stationary[j])));
  }
  return residual;
}

MarkovMeasure MarkovMeasure::embed(std::span<const Symbol> symbols,
                                   std::size_t d) const {
  if (symbols.size() != size()) {
    throw Error(ErrorKind::kInvalidArgument, "embedding size mismatch");
  }
  MarkovMeasure out;
  out.stationary.assign(d, 0.0);
  out.kernel.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out.stationary[symbols[i]] = stationary[i];
    for (std::size_t j = 0; j < symbols.size(); ++j) {
      out.kernel[symbols[i]][symbols[j]] = kernel[i][j];
    }
  }
  return out;
}

ParryMeasure parry_measure(const TransitionMatrix& irreducible,
                           const SpectralOptions& options) {
  if (!is_irreducible(irreducible)) {
    throw Error(ErrorKind::kReducible, "Parry measure needs an irreducible matrix");
  }
  const SpectralData sd = entropy_spectral(irreducible, options);
  const std::size_t d = irreducible.size();
  ParryMeasure mu;
  mu.lambda = sd.lambda;
  mu.kernel.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (irreducible(i, j)) {
        mu.kernel[i][j] =
            static_cast<double>(sd.right[j] / (sd.lambda * sd.right[i]));
      }
    }
  }
  long double total = 0.0L;
  for (std::size_t i = 0; i < d; ++i) total += sd.left[i] * sd.right[i];
  mu.stationary.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    mu.stationary[i] = static_cast<double>(sd.left[i] * sd.right[i] / total);
  }
  return mu;
}

// ---------------------------------------------------------------------------
// Higher block recoding

Recoding higher_block_recode(const Sft& sft) {
  Recoding rec;
  rec.step = sft.step();
  rec.base_alphabet = sft.alphabet().size();
  const std::size_t d = rec.base_alphabet;
  if (sft.step() == 1) {
    rec.ambient = TransitionMatrix::full(d);
    rec.target = essentialize(to_matrix(sft));
    for (std::size_t s = 0; s < d; ++s) rec.blocks.push_back({static_cast<Symbol>(s)});
    return rec;
  }
  const std::size_t m = sft.step();
  const std::size_t blocks = checked_power(d, m);
  for (std::size_t b = 0; b < blocks; ++b) rec.blocks.push_back(decode(b, m, d));
  rec.ambient = TransitionMatrix(blocks);
  TransitionMatrix target(blocks);
  Word joined(m + 1);
  for (std::size_t u = 0; u < blocks; ++u) {
    // Successors of u share its last M-1 symbols: v = u[1..] + s.
    const std::size_t shifted = (u * d) % blocks;
    for (std::size_t s = 0; s < d; ++s) {
      const std::size_t v = shifted + s;
      rec.ambient.set(u, v, true);
      std::copy(rec.blocks[u].begin(), rec.blocks[u].end(), joined.begin());
      joined[m] = static_cast<Symbol>(s);
      target.set(u, v, !sft.is_forbidden(joined));
    }
  }
  rec.target = essentialize(target);
  if (rec.target.is_zero()) {
    throw Error(ErrorKind::kEmptyShift, "recoded target shift is empty");
  }
  return rec;
}

}  // namespace sftroof
