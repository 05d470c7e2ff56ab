#pragma once

// Partition sums Z_n(scale * g), the quantity Q(r) and the pressure root.
//
// Every word's cylinder supremum is known in closed form: each position
// contributes -a_l where l is the distance to the next transition leaving Y
// (inclusive), or -h(Y) when the word can be continued inside Y. A dynamic
// program over (last symbol, length of the current run) therefore sums all
// d^n words exactly in O(d^2 n^2), in the log domain.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sftroof/roof.hpp"

namespace sftroof {

double log_add(double x, double y);
// Max-shifted sum in the given order; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> terms);

struct Run {
  std::size_t violation;  // position closing the run
  std::size_t length;
};

enum class TailRecipe {
  kExtendIntoTarget,  // continue inside Y after the last violation
  kForcedViolation,   // last symbol is outside L_1(Y); any continuation
};

struct BirkhoffSupResult {
  double value = 0.0;
  std::size_t last_violation = 0;  // 0 iff the word is in L_n(Y)
  std::vector<Run> runs;
  TailRecipe tail = TailRecipe::kExtendIntoTarget;
};

// sup of scale * S_n g over the cylinder of w.
BirkhoffSupResult birkhoff_sup(const RoofSpec& spec, std::span<const Symbol> w,
                               double scale = 1.0);
// A point of the cylinder attaining the supremum.
Lasso sup_witness(const RoofSpec& spec, const Word& w);

double log_partition_sum(const RoofSpec& spec, std::size_t n, double scale);

struct PartitionRow {
  std::size_t n = 0;
  double scale = 0.0;
  double log_z = 0.0;
  double pressure = 0.0;  // log_z / n
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  // Contribution of words ending outside L_1(Y), log domain (-inf if none).
  double log_dead_end = 0.0;
};

struct PartitionTable {
  double scale = 0.0;
  double c2 = 0.0;  // max_{m <= n_max} |L_m| / lambda^m
  std::vector<PartitionRow> rows;
};

// Rows n = 1..n_max. lower_bound = log|L_n|/n - scale*h(Y). At scale 1 the
// upper bound is log(n*C2 + D_n)/n, D_n the dead-end contribution (zero when
// every symbol occurs in Y); other scales shift it by the slope bounds.
PartitionTable pressure_estimate(const RoofSpec& spec, std::size_t n_max,
                                 double scale);

struct QRow {
  std::size_t r = 0;
  double log_q = 0.0;
  double q = 0.0;
  // sum_{s=2}^{r} exp(-c sqrt s) + sup_{s<r} Q(s)/2, with sup over nothing = 1.
  double recursion_rhs = 0.0;
};

struct QTable {
  double c = 0.0;
  double scale = 1.0;
  BetaMap beta;
  std::vector<QRow> rows;
};

// Q(r) for r = 1..r_max. When beta is null the spec's beta is used; an explicit
// map must send every symbol of A0 to an ambient successor outside Y.
QTable q_table(const RoofSpec& spec, std::size_t r_max, double scale = 1.0,
               const BetaMap* beta = nullptr);
double q_value(const RoofSpec& spec, std::size_t r, double scale = 1.0);

// Upper bound on sum_{s>=2} exp(-c sqrt s): exact head plus integral tail.
double exp_sqrt_series_bound(double c);

// log( sum_{r=0}^{n-1} |L_{n-r}| exp(-(n-r) h) ), the grouped bound on Z_n(g).
double z_decomposition_bound(const RoofSpec& spec, std::size_t n);

struct Bracket {
  double lo;
  double hi;
};

struct RootStep {
  std::size_t iteration;
  double lo;
  double hi;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // f(root)
  std::vector<RootStep> trace;
};

inline constexpr std::size_t kMaxBisections = 60;

// Bisection for a continuous strictly decreasing f with f(lo) >= 0 >= f(hi).
// Stops when |f(mid)| <= residual_tol or after max_iter halvings.
RootResult bisect_decreasing(const std::function<double(double)>& f,
                             Bracket bracket, double residual_tol,
                             std::size_t max_iter = kMaxBisections);

struct PressureRoot {
  RootResult result;
  std::size_t n = 0;
  // A-priori enclosure [1, 1 + P_n(1)/h(Y)].
  double enclosure_lo = 1.0;
  double enclosure_hi = 1.0;
  double pressure_at_one = 0.0;
};

// Root of c -> P_n(c). Without a bracket the a-priori enclosure is used.
// Converges to |P_n(root)| <= tol * h(Y).
PressureRoot pressure_root(const RoofSpec& spec, std::size_t n, double tol,
                           std::optional<Bracket> bracket = std::nullopt);

// P_n for the constant roof 1 over the ambient shift: log|L_n(B)|/n - c.
double constant_roof_pressure(const TransitionMatrix& ambient, std::size_t n,
                              double c);

struct VariationalEntry {
  std::vector<Symbol> symbols;
  double entropy = 0.0;        // log lambda of the component
  double parry_entropy = 0.0;  // h_mu of its Parry measure
  double integral_g = 0.0;     // -h(Y): g is constant on Y
  // h_mu + integral of g; zero for maximal components, negative slack otherwise.
  double value = 0.0;
  double residual = 0.0;  // |entropy - h(Y)|
  bool maximal = false;
};

inline constexpr double kMaximalEntropyTol = 1e-9;

std::vector<VariationalEntry> variational_check(const RoofSpec& spec,
                                                std::span<const Component> components);

}  // namespace sftroof
