#pragma once

// Measures of maximal entropy for the suspension flow, handled through the
// base: a shift-invariant measure mu lifts to a flow-invariant measure of
// entropy h_mu / integral(rho dmu).

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "sftroof/pressure.hpp"

namespace sftroof {

// h_mu / roof_integral.
double abramov(double h_mu, double roof_integral);

struct RoofIntegral {
  // Integral with the mass still undecided after `depth` steps counted at
  // h(Y); the true value lies in [value, value + remainder_bound].
  double value = 0.0;
  double remainder_bound = 0.0;
  // mu(no violation in the first depth positions and not yet trapped in Y).
  double undecided_mass = 0.0;
  std::size_t depth = 0;
};

// Integral of rho against a stationary Markov measure on the ambient alphabet,
// by recursion on the distribution of the first violation time.
RoofIntegral roof_integral_markov(const RoofSpec& spec, const MarkovMeasure& mu,
                                  std::size_t m_max);

struct LiftedMeasure {
  std::string label;
  std::vector<Symbol> symbols;
  double component_entropy = 0.0;  // log lambda of the component
  double parry_entropy = 0.0;      // h_mu computed from the kernel
  bool maximal = false;
  bool full_support = false;
  RoofIntegral integral;
  // abramov(h, integral) with h = h(Y) for maximal components.
  double lifted_entropy = 0.0;
  double lifted_entropy_numeric = 0.0;  // parry_entropy / integral
};

struct FlowEntropy {
  std::size_t n = 0;
  double root = 0.0;
  double residual = 0.0;
  double enclosure_lo = 1.0;
  double enclosure_hi = 1.0;
};

struct SuspensionReport {
  double h_y = 0.0;
  double c = 0.0;
  double alpha = 0.5;
  std::size_t ambient_alphabet = 0;
  std::size_t step = 1;
  FlowEntropy flow;
  std::vector<LiftedMeasure> components;  // every irreducible component of Y
  // Parry measure of the ambient shift: full support, strictly below the
  // flow entropy.
  LiftedMeasure reference;
  std::size_t multiplicity = 0;
};

struct ReportOptions {
  std::size_t n = 60;
  std::size_t m_max = 200;
  double tol = 1e-10;
};

SuspensionReport mme_report(const RoofSpec& spec, const ReportOptions& options = {});

nlohmann::json to_json(const SuspensionReport& report);
std::string format_report(const SuspensionReport& report);

}  // namespace sftroof
