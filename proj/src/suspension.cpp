#include "sftroof/suspension.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace sftroof {

double abramov(double h_mu, double roof_integral) {
  if (!(roof_integral > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "roof integral must be positive");
  }
  return h_mu / roof_integral;
}

namespace {

constexpr double kStationarityTol = 1e-9;

// States from which the chain can never leave Y.
std::vector<bool> trapped_states(const TransitionMatrix& a, const MarkovMeasure& mu) {
  const std::size_t d = mu.size();
  std::vector<bool> unsafe(d, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (unsafe[i]) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (mu.kernel[i][j] > 0.0 && (!a(i, j) || unsafe[j])) {
          unsafe[i] = true;
          changed = true;
          break;
        }
      }
    }
  }
  std::vector<bool> trapped(d);
  for (std::size_t i = 0; i < d; ++i) trapped[i] = !unsafe[i];
  return trapped;
}

}  // namespace

RoofIntegral roof_integral_markov(const RoofSpec& spec, const MarkovMeasure& mu,
                                  std::size_t m_max) {
  const std::size_t d = spec.alphabet_size();
  if (mu.size() != d || mu.kernel.size() != d) {
    throw Error(ErrorKind::kInvalidArgument, "measure lives on a different alphabet");
  }
  if (m_max == 0) throw Error(ErrorKind::kInvalidArgument, "m_max must be >= 1");
  if (mu.stationarity_residual() > kStationarityTol) {
    throw Error(ErrorKind::kInvalidArgument, "measure is not stationary");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (mu.kernel[i][j] > 0.0 && !spec.ambient()(i, j)) {
        throw Error(ErrorKind::kInvalidArgument, "kernel leaves the ambient shift");
      }
    }
  }
  const TransitionMatrix& a = spec.target();
  const std::vector<bool> trapped = trapped_states(a, mu);

  RoofIntegral out;
  out.depth = m_max;
  bool any_unsafe = false;
  for (std::size_t i = 0; i < d; ++i) any_unsafe = any_unsafe || (!trapped[i] && mu.stationary[i] > 0.0);
  if (!any_unsafe) {
    // rho == h(Y) on the support.
    out.value = spec.h_y();
    return out;
  }

  // alive[s] = mu(no violation before position m, x_m = s), restricted to
  // states that can still leave Y.
  std::vector<long double> alive(mu.stationary.begin(), mu.stationary.end());
  long double never = 0.0L;
  long double sum = 0.0L;
  for (std::size_t m = 1; m <= m_max; ++m) {
    std::vector<long double> next(d, 0.0L);
    long double violating = 0.0L;
    for (std::size_t s = 0; s < d; ++s) {
      if (alive[s] == 0.0L) continue;
      if (trapped[s]) {
        never += alive[s];
        continue;
      }
      for (std::size_t t = 0; t < d; ++t) {
        const long double flow = alive[s] * mu.kernel[s][t];
        if (a(s, t)) {
          next[t] += flow;
        } else {
          violating += flow;
        }
      }
    }
    sum += violating * spec.aj().value(m);
    alive = std::move(next);
  }
  long double undecided = 0.0L;
  for (std::size_t s = 0; s < d; ++s) {
    if (trapped[s]) {
      never += alive[s];
    } else {
      undecided += alive[s];
    }
  }
  const long double h = spec.h_y();
  out.value = static_cast<double>(sum + h * (never + undecided));
  out.undecided_mass = static_cast<double>(undecided);
  out.remainder_bound =
      static_cast<double>((static_cast<long double>(spec.aj().sup_after(m_max)) - h) * undecided);
  return out;
}

namespace {

std::string block_label(const RoofSpec& spec, Symbol s) {
  if (spec.recoding()) return format_word(spec.recoding()->blocks[s]);
  return std::to_string(s);
}

std::string symbols_label(const RoofSpec& spec, const std::vector<Symbol>& symbols) {
  std::string out = "{";
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (k > 0) out += ",";
    out += block_label(spec, symbols[k]);
  }
  return out + "}";
}

}  // namespace

SuspensionReport mme_report(const RoofSpec& spec, const ReportOptions& options) {
  SuspensionReport report;
  report.h_y = spec.h_y();
  report.c = spec.c();
  report.alpha = spec.alpha();
  report.ambient_alphabet = spec.alphabet_size();
  report.step = spec.recoding() ? spec.recoding()->step : 1;

  const PressureRoot root = pressure_root(spec, options.n, options.tol);
  report.flow = {options.n, root.result.root, root.result.residual,
                 root.enclosure_lo, root.enclosure_hi};

  const std::size_t d = spec.alphabet_size();
  for (const Component& comp : irreducible_components(spec.target())) {
    LiftedMeasure lm;
    lm.symbols = comp.symbols;
    lm.label = symbols_label(spec, comp.symbols);
    lm.component_entropy = comp.entropy;
    const ParryMeasure parry = parry_measure(comp.submatrix);
    lm.parry_entropy = parry.entropy();
    lm.maximal = std::fabs(comp.entropy - spec.h_y()) <= kMaximalEntropyTol;
    lm.full_support = comp.symbols.size() == d && comp.submatrix == spec.ambient();
    lm.integral = roof_integral_markov(spec, parry.embed(comp.symbols, d), options.m_max);
    lm.lifted_entropy =
        abramov(lm.maximal ? spec.h_y() : comp.entropy, lm.integral.value);
    lm.lifted_entropy_numeric = abramov(lm.parry_entropy, lm.integral.value);
    if (lm.maximal) ++report.multiplicity;
    report.components.push_back(std::move(lm));
  }

  const ParryMeasure ambient_parry = parry_measure(spec.ambient());
  LiftedMeasure& ref = report.reference;
  ref.label = "ambient Parry measure";
  ref.symbols.resize(d);
  std::iota(ref.symbols.begin(), ref.symbols.end(), Symbol{0});
  ref.component_entropy = static_cast<double>(std::log(ambient_parry.lambda));
  ref.parry_entropy = ambient_parry.entropy();
  ref.full_support = true;
  ref.integral = roof_integral_markov(spec, ambient_parry, options.m_max);
  ref.lifted_entropy = abramov(ref.parry_entropy, ref.integral.value);
  ref.lifted_entropy_numeric = ref.lifted_entropy;
  return report;
}

namespace {

nlohmann::json measure_json(const LiftedMeasure& m) {
  return {
      {"label", m.label},
      {"symbols", m.symbols},
      {"component_entropy", m.component_entropy},
      {"parry_entropy", m.parry_entropy},
      {"maximal", m.maximal},
      {"full_support", m.full_support},
      {"roof_integral", m.integral.value},
      {"roof_integral_remainder", m.integral.remainder_bound},
      {"roof_integral_depth", m.integral.depth},
      {"lifted_entropy", m.lifted_entropy},
      {"lifted_entropy_numeric", m.lifted_entropy_numeric},
  };
}

}  // namespace

nlohmann::json to_json(const SuspensionReport& report) {
  nlohmann::json components = nlohmann::json::array();
  for (const auto& m : report.components) components.push_back(measure_json(m));
  return {
      {"h_y", report.h_y},
      {"c", report.c},
      {"alpha", report.alpha},
      {"ambient_alphabet", report.ambient_alphabet},
      {"step", report.step},
      {"multiplicity", report.multiplicity},
      {"flow_entropy",
       {{"n", report.flow.n},
        {"root", report.flow.root},
        {"residual", report.flow.residual},
        {"enclosure", {report.flow.enclosure_lo, report.flow.enclosure_hi}}}},
      {"components", components},
      {"reference", measure_json(report.reference)},
  };
}

std::string format_report(const SuspensionReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  out << "h(Y)                 " << report.h_y << "\n";
  out << "c                    " << report.c << "\n";
  out << "flow entropy (n=" << report.flow.n << ")  " << report.flow.root
      << "  enclosure [" << report.flow.enclosure_lo << ", "
      << report.flow.enclosure_hi << "]\n";
  out << "MME multiplicity     " << report.multiplicity << "\n";
  out << "components:\n";
  for (const auto& m : report.components) {
    out << "  " << m.label << "  h=" << m.component_entropy
        << (m.maximal ? "  maximal" : "  non-maximal")
        << "  int(rho)=" << m.integral.value << "  lifted=" << m.lifted_entropy
        << (m.full_support ? "  full support" : "  not fully supported") << "\n";
  }
  out << "reference: " << report.reference.label
      << "  int(rho)=" << report.reference.integral.value
      << " (+" << std::scientific << std::setprecision(2)
      << report.reference.integral.remainder_bound << std::fixed
      << std::setprecision(6) << ")  lifted=" << report.reference.lifted_entropy
      << "\n";
  return out.str();
}

}  // namespace sftroof
