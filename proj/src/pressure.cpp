#include "sftroof/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sftroof {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite(double x, const char* what) {
  if (std::isnan(x)) throw Error(ErrorKind::kNumerical, std::string("NaN in ") + what);
}

}  // namespace

double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(std::span<const double> terms) {
  double peak = kNegInf;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == kNegInf) return kNegInf;
  long double sum = 0.0L;
  for (double t : terms) {
    if (t != kNegInf) sum += std::exp(static_cast<long double>(t - peak));
  }
  return peak + static_cast<double>(std::log(sum));
}

// ---------------------------------------------------------------------------
// Cylinder suprema

BirkhoffSupResult birkhoff_sup(const RoofSpec& spec, std::span<const Symbol> w,
                               double scale) {
  if (w.empty()) throw Error(ErrorKind::kInvalidArgument, "empty word");
  const TransitionMatrix& a = spec.target();
  const std::size_t n = w.size();
  BirkhoffSupResult out;
  std::size_t previous = 0;
  long double total = 0.0L;
  auto close_run = [&](std::size_t t) {
    out.runs.push_back({t, t - previous});
    total += spec.aj().prefix_sum_extended(t - previous);
    previous = t;
  };
  for (std::size_t t = 1; t < n; ++t) {
    if (w[t - 1] >= spec.alphabet_size() || w[t] >= spec.alphabet_size()) {
      throw Error(ErrorKind::kInvalidArgument, "symbol outside the ambient alphabet");
    }
    if (!a(w[t - 1], w[t])) close_run(t);
  }
  if (!spec.is_live(w.back())) {
    close_run(n);
    out.tail = TailRecipe::kForcedViolation;
  } else {
    total += static_cast<long double>(n - previous) * spec.h_y();
    out.tail = TailRecipe::kExtendIntoTarget;
  }
  out.last_violation = previous;
  out.value = static_cast<double>(-static_cast<long double>(scale) * total);
  return out;
}

Lasso sup_witness(const RoofSpec& spec, const Word& w) {
  if (spec.is_live(w.back())) return extend_into_target(spec, w);
  return extend_ambient(spec, w);
}

// ---------------------------------------------------------------------------
// Run-length dynamic program

namespace {

// Log weights of ambient words of the current length, split by last symbol
// and the length of the run since the last violation.
class RunDp {
 public:
  RunDp(const RoofSpec& spec, double scale, std::size_t n_max)
      : spec_(spec),
        d_(spec.alphabet_size()),
        n_max_(n_max),
        scale_(scale),
        weights_(d_ * (n_max + 1), kNegInf),
        next_(d_ * (n_max + 1), kNegInf),
        closed_(d_, kNegInf),
        buffer_(std::max(d_, n_max + 1)) {
    if (n_max == 0) throw Error(ErrorKind::kInvalidArgument, "n must be >= 1");
    if (!(scale >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "scale must be >= 0");
    if (spec.aj().size() < n_max) {
      throw Error(ErrorKind::kInvalidArgument,
                  "a_j table shorter than the requested length; raise min_j");
    }
    run_cost_.assign(n_max + 1, 0.0);
    for (std::size_t l = 1; l <= n_max; ++l) {
      run_cost_[l] = static_cast<double>(static_cast<long double>(scale) *
                                         spec.aj().prefix_sum_extended(l));
    }
    for (std::size_t s = 0; s < d_; ++s) at(weights_, s, 1) = 0.0;
    layer_ = 1;
    refresh_closed();
  }

  std::size_t layer() const { return layer_; }

  void advance() {
    if (layer_ >= n_max_) throw Error(ErrorKind::kInvalidArgument, "DP past n_max");
    const TransitionMatrix& a = spec_.target();
    const TransitionMatrix& b = spec_.ambient();
    std::fill(next_.begin(), next_.end(), kNegInf);
    for (std::size_t t = 0; t < d_; ++t) {
      for (std::size_t l = 1; l <= layer_; ++l) {
        std::size_t k = 0;
        for (std::size_t s = 0; s < d_; ++s) {
          if (a(s, t)) buffer_[k++] = at(weights_, s, l);
        }
        at(next_, t, l + 1) = log_sum_exp({buffer_.data(), k});
      }
      std::size_t k = 0;
      for (std::size_t s = 0; s < d_; ++s) {
        if (b(s, t) && !a(s, t)) buffer_[k++] = closed_[s];
      }
      at(next_, t, 1) = log_sum_exp({buffer_.data(), k});
    }
    std::swap(weights_, next_);
    ++layer_;
    refresh_closed();
  }

  // Words ending at s with a violation right after s.
  double closed(std::size_t s) const { return closed_[s]; }

  // Words continued inside Y after the last violation.
  double live_end() const {
    std::vector<double> terms;
    terms.reserve(d_ * layer_);
    for (std::size_t s = 0; s < d_; ++s) {
      if (!spec_.is_live(static_cast<Symbol>(s))) continue;
      for (std::size_t l = 1; l <= layer_; ++l) {
        terms.push_back(at(weights_, s, l) -
                        scale_ * static_cast<double>(l) * spec_.h_y());
      }
    }
    return log_sum_exp(terms);
  }

  // Words whose last symbol is outside L_1(Y).
  double dead_end() const {
    std::vector<double> terms;
    for (std::size_t s = 0; s < d_; ++s) {
      if (!spec_.is_live(static_cast<Symbol>(s))) terms.push_back(closed_[s]);
    }
    return log_sum_exp(terms);
  }

 private:
  double& at(std::vector<double>& v, std::size_t s, std::size_t l) {
    return v[s * (n_max_ + 1) + l];
  }
  double at(const std::vector<double>& v, std::size_t s, std::size_t l) const {
    return v[s * (n_max_ + 1) + l];
  }

  void refresh_closed() {
    for (std::size_t s = 0; s < d_; ++s) {
      for (std::size_t l = 1; l <= layer_; ++l) {
        buffer_[l - 1] = at(weights_, s, l) - run_cost_[l];
      }
      closed_[s] = log_sum_exp({buffer_.data(), layer_});
      require_finite(closed_[s], "partition DP");
    }
  }

  const RoofSpec& spec_;
  std::size_t d_;
  std::size_t n_max_;
  double scale_;
  std::size_t layer_ = 0;
  std::vector<double> weights_;
  std::vector<double> next_;
  std::vector<double> closed_;
  std::vector<double> run_cost_;
  std::vector<double> buffer_;
};

// Per-layer log Z and dead-end part for n = 1..n_max.
struct Layers {
  std::vector<double> log_z;
  std::vector<double> log_dead;
};

Layers partition_layers(const RoofSpec& spec, std::size_t n_max, double scale) {
  RunDp dp(spec, scale, n_max);
  Layers out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) dp.advance();
    const double dead = dp.dead_end();
    const double log_z = log_add(dp.live_end(), dead);
    require_finite(log_z, "partition sum");
    out.log_z.push_back(log_z);
    out.log_dead.push_back(dead);
  }
  return out;
}

}  // namespace

double log_partition_sum(const RoofSpec& spec, std::size_t n, double scale) {
  return partition_layers(spec, n, scale).log_z.back();
}

double constant_roof_pressure(const TransitionMatrix& ambient, std::size_t n,
                              double c) {
  const LanguageTable words = language_table(ambient, n);
  return static_cast<double>(words.log_count(n) / static_cast<long double>(n)) - c;
}

PartitionTable pressure_estimate(const RoofSpec& spec, std::size_t n_max,
                                 double scale) {
  const Layers layers = partition_layers(spec, n_max, scale);
  const Layers at_one = scale == 1.0 ? layers : partition_layers(spec, n_max, 1.0);
  const LanguageTable ambient_words = language_table(spec.ambient(), n_max);
  const double c2 = static_cast<double>(
      perron_bounds(spec.language(), spec.spectral().lambda, n_max).c2);
  const double h = spec.h_y();
  const double a1 = spec.aj().value(1);

  PartitionTable table;
  table.scale = scale;
  table.c2 = c2;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    PartitionRow row;
    row.n = n;
    row.scale = scale;
    row.log_z = layers.log_z[n - 1];
    row.pressure = row.log_z / nn;
    row.log_dead_end = layers.log_dead[n - 1];
    row.lower_bound =
        static_cast<double>(spec.language().log_count(n) / static_cast<long double>(n)) -
        scale * h;
    const double dead = at_one.log_dead[n - 1];
    const double upper_one =
        log_add(std::log(nn * c2), dead) / nn;
    const double shifted = scale >= 1.0 ? upper_one - (scale - 1.0) * h
                                        : upper_one + (1.0 - scale) * a1;
    const double trivial =
        static_cast<double>(ambient_words.log_count(n) / static_cast<long double>(n)) -
        scale * h;
    row.upper_bound = std::min(shifted, trivial);
    table.rows.push_back(row);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Q(r)

namespace {

void check_beta(const RoofSpec& spec, const BetaMap& beta) {
  const auto expected = spec.beta().domain();
  if (beta.successor.size() != spec.alphabet_size() || beta.domain() != expected) {
    throw Error(ErrorKind::kInvalidArgument, "beta map must be defined exactly on A0");
  }
  for (Symbol s : expected) {
    const Symbol b = *beta.successor[s];
    if (b >= spec.alphabet_size() || !spec.ambient()(s, b) || spec.target()(s, b)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "beta(" + std::to_string(s) + ") must be an ambient successor outside Y");
    }
  }
}

}  // namespace

double exp_sqrt_series_bound(double c) {
  constexpr std::size_t kHead = 10000;
  long double sum = 0.0L;
  for (std::size_t s = 2; s <= kHead; ++s) {
    sum += std::exp(-static_cast<long double>(c) * std::sqrt(static_cast<long double>(s)));
  }
  // sum_{s>S} e^{-c sqrt s} <= int_S^inf e^{-c sqrt x} dx = 2 e^{-c sqrt S}(sqrt S/c + 1/c^2)
  const long double root = std::sqrt(static_cast<long double>(kHead));
  const long double cc = c;
  sum += 2.0L * std::exp(-cc * root) * (root / cc + 1.0L / (cc * cc));
  return static_cast<double>(sum);
}

QTable q_table(const RoofSpec& spec, std::size_t r_max, double scale,
               const BetaMap* beta) {
  QTable table;
  table.c = spec.c();
  table.scale = scale;
  table.beta = beta ? *beta : spec.beta();
  check_beta(spec, table.beta);
  const std::vector<Symbol> domain = table.beta.domain();

  RunDp dp(spec, scale, r_max);
  double sup_q = 1.0;  // sup over no earlier r
  long double series = 0.0L;
  for (std::size_t r = 1; r <= r_max; ++r) {
    if (r > 1) {
      dp.advance();
      series += std::exp(-static_cast<long double>(spec.c()) *
                         std::sqrt(static_cast<long double>(r)));
    }
    // The point (w_1..w_r, beta(w_r), ...) leaves Y right after w_r, closing
    // the final run whatever beta(w_r) is.
    std::vector<double> terms;
    for (Symbol s : domain) {
      const Symbol next = *table.beta.successor[s];
      if (!spec.target()(s, next)) terms.push_back(dp.closed(s));
    }
    QRow row;
    row.r = r;
    row.log_q = log_sum_exp(terms);
    row.q = std::exp(row.log_q);
    row.recursion_rhs = scale == 1.0
                            ? static_cast<double>(series) + 0.5 * sup_q
                            : std::numeric_limits<double>::quiet_NaN();
    sup_q = r == 1 ? row.q : std::max(sup_q, row.q);
    table.rows.push_back(row);
  }
  return table;
}

double q_value(const RoofSpec& spec, std::size_t r, double scale) {
  if (r == 0) throw Error(ErrorKind::kInvalidArgument, "Q(r) needs r >= 1");
  return q_table(spec, r, scale).rows.back().q;
}

double z_decomposition_bound(const RoofSpec& spec, std::size_t n) {
  std::vector<double> terms;
  for (std::size_t m = 1; m <= n; ++m) {
    terms.push_back(static_cast<double>(spec.language().log_count(m)) -
                    static_cast<double>(m) * spec.h_y());
  }
  return log_sum_exp(terms);
}

// ---------------------------------------------------------------------------
// Root finding

RootResult bisect_decreasing(const std::function<double(double)>& f,
                             Bracket bracket, double residual_tol,
                             std::size_t max_iter) {
  if (!(bracket.lo <= bracket.hi) || !(residual_tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "invalid bracket or tolerance");
  }
  double lo = bracket.lo;
  double hi = bracket.hi;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo < 0.0 || f_hi > 0.0) {
    throw Error(ErrorKind::kInvalidArgument,
                "bracket does not straddle the root: f(lo) = " + std::to_string(f_lo) +
                    ", f(hi) = " + std::to_string(f_hi));
  }
  RootResult out;
  out.trace.push_back({0, lo, hi});
  if (std::fabs(f_lo) <= residual_tol) return {lo, f_lo, out.trace};
  if (std::fabs(f_hi) <= residual_tol) return {hi, f_hi, out.trace};
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    out.root = mid;
    out.residual = f_mid;
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    out.trace.push_back({it, lo, hi});
    if (std::fabs(f_mid) <= residual_tol) break;
  }
  return out;
}

PressureRoot pressure_root(const RoofSpec& spec, std::size_t n, double tol,
                           std::optional<Bracket> bracket) {
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tol must be > 0");
  auto pressure = [&](double c) { return log_partition_sum(spec, n, c) / static_cast<double>(n); };
  PressureRoot out;
  out.n = n;
  out.pressure_at_one = pressure(1.0);
  out.enclosure_lo = 1.0;
  out.enclosure_hi = 1.0 + std::max(0.0, out.pressure_at_one) / spec.h_y();
  const Bracket b = bracket.value_or(Bracket{out.enclosure_lo, out.enclosure_hi});
  out.result = bisect_decreasing(pressure, b, tol * spec.h_y());
  return out;
}

// ---------------------------------------------------------------------------
// Variational principle on Y

std::vector<VariationalEntry> variational_check(const RoofSpec& spec,
                                                std::span<const Component> components) {
  std::vector<VariationalEntry> out;
  for (const Component& comp : components) {
    VariationalEntry e;
    e.symbols = comp.symbols;
    e.entropy = comp.entropy;
    e.parry_entropy = parry_measure(comp.submatrix).entropy();
    e.integral_g = -spec.h_y();
    e.value = e.parry_entropy + e.integral_g;
    e.residual = std::fabs(e.entropy - spec.h_y());
    e.maximal = e.residual <= kMaximalEntropyTol;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace sftroof
