#include "sftroof/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "sftroof/io.hpp"
#include "sftroof/oracle.hpp"
#include "sftroof/pressure.hpp"
#include "sftroof/subadditive.hpp"
#include "sftroof/suspension.hpp"

namespace sftroof::cli {

namespace {

constexpr double kCompareRelTol = 1e-12;
constexpr double kOracleRelTol = 1e-12;
constexpr std::uint64_t kOracleWordCap = 200'000;
constexpr std::size_t kSumChainMax = 200;

bool le_tol(double lhs, double rhs) {
  return lhs <= rhs + kCompareRelTol * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

RoofOptions roof_options(const RunConfig& config) {
  RoofOptions options;
  options.c = config.c;
  options.alpha = config.alpha;
  options.language_n = std::max<std::size_t>({options.language_n, config.n_max, kSumChainMax});
  return options;
}

std::string checks_csv(const std::vector<Check>& checks) {
  std::ostringstream out;
  out << "check,passed,detail\n";
  for (const Check& c : checks) {
    out << c.name << "," << (c.passed ? 1 : 0) << "," << c.detail << "\n";
  }
  return out.str();
}

Check check_q(const QTable& table) {
  Check c{"q_below_one", true, ""};
  double worst = 0.0;
  for (const QRow& row : table.rows) {
    worst = std::max(worst, row.q);
    if (!(row.q < 1.0)) {
      c.passed = false;
      c.detail = "Q(" + std::to_string(row.r) + ") = " + io::format_double(row.q);
      return c;
    }
  }
  c.detail = "max Q = " + io::format_double(worst);
  return c;
}

Check check_recursion(const QTable& table) {
  Check c{"q_recursion", true, ""};
  for (const QRow& row : table.rows) {
    if (!le_tol(row.q, row.recursion_rhs)) {
      c.passed = false;
      c.detail = "r = " + std::to_string(row.r);
      return c;
    }
  }
  c.detail = "r <= " + std::to_string(table.rows.size());
  return c;
}

Check check_sandwich(const PartitionTable& table) {
  Check c{"pressure_sandwich", true, ""};
  for (const PartitionRow& row : table.rows) {
    if (!le_tol(row.lower_bound, row.pressure) || !le_tol(row.pressure, row.upper_bound)) {
      c.passed = false;
      c.detail = "n = " + std::to_string(row.n);
      return c;
    }
  }
  c.detail = "n <= " + std::to_string(table.rows.size());
  return c;
}

Check check_monotone(const PartitionTable& at_one, const PartitionTable& at_larger) {
  Check c{"pressure_decreasing", true, ""};
  for (std::size_t i = 0; i < at_one.rows.size(); ++i) {
    if (!(at_larger.rows[i].pressure < at_one.rows[i].pressure)) {
      c.passed = false;
      c.detail = "n = " + std::to_string(at_one.rows[i].n);
      return c;
    }
  }
  c.detail = "scale " + io::format_double(at_larger.scale) + " vs 1";
  return c;
}

Check check_decomposition(const RoofSpec& spec, const PartitionTable& table) {
  Check c{"z_decomposition", true, ""};
  for (const PartitionRow& row : table.rows) {
    const double bound = log_add(z_decomposition_bound(spec, row.n), row.log_dead_end);
    if (!le_tol(row.log_z, bound)) {
      c.passed = false;
      c.detail = "n = " + std::to_string(row.n);
      return c;
    }
  }
  return c;
}

Check check_sum_chain(const RoofSpec& spec) {
  Check c{"aj_sum_chain", true, ""};
  const std::size_t s_max = std::min(kSumChainMax, spec.aj().size());
  long double harmonic = 0.0L;
  for (std::size_t s = 1; s <= s_max; ++s) {
    harmonic += 1.0L / std::sqrt(static_cast<long double>(s));
    const double lhs = static_cast<double>(spec.aj().prefix_sum_extended(s));
    const double rhs = static_cast<double>(spec.language().log_count(s) +
                                           static_cast<long double>(spec.c()) * harmonic);
    if (!le_tol(rhs, lhs)) {
      c.passed = false;
      c.detail = "s = " + std::to_string(s);
      return c;
    }
  }
  c.detail = "s <= " + std::to_string(s_max);
  return c;
}

Check check_block_sums(const RoofSpec& spec) {
  Check c{"aj_block_sums", true, ""};
  const AjTable& aj = spec.aj();
  long double whole_blocks = 0.0L;
  long double harmonic = 0.0L;
  std::size_t s = 0;
  for (std::size_t n = 1; n <= aj.blocks(); ++n) {
    const long double log_n = spec.language().log_count(n);
    for (std::size_t k = 1; k <= n; ++k) {
      ++s;
      harmonic += 1.0L / std::sqrt(static_cast<long double>(s));
      const long double expected = whole_blocks +
                                   static_cast<long double>(k) / static_cast<long double>(n) * log_n +
                                   static_cast<long double>(aj.c()) * harmonic;
      const long double got = aj.prefix_sum_extended(s);
      if (std::fabs(got - expected) > 1e-12L * std::max(1.0L, std::fabs(expected))) {
        c.passed = false;
        c.detail = "s = " + std::to_string(s);
        return c;
      }
    }
    whole_blocks += log_n;
  }
  c.detail = "s <= " + std::to_string(s);
  return c;
}

Check check_root(const PressureRoot& root, double tol) {
  Check c{"root_enclosure", true, ""};
  const double r = root.result.root;
  c.passed = r >= root.enclosure_lo && r <= root.enclosure_hi &&
             std::fabs(root.result.residual) <= tol;
  c.detail = "root " + io::format_double(r) + " residual " +
             io::format_double(root.result.residual);
  return c;
}

bool rel_close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Check check_oracle(const RoofSpec& spec, const QTable& q, std::size_t n_max) {
  Check c{"oracle_equivalence", true, ""};
  std::size_t reached = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (oracle::ambient_word_count(spec.ambient(), n) > kOracleWordCap) break;
    const double dp = log_partition_sum(spec, n, 1.0);
    const double brute = oracle::log_partition_sum(spec, n, 1.0);
    bool ok = rel_close(dp, brute, kOracleRelTol);
    if (n <= q.rows.size() && !spec.beta().empty()) {
      ok = ok && rel_close(q.rows[n - 1].log_q,
                           oracle::log_q(spec, n, spec.beta(), 1.0), kOracleRelTol);
    }
    if (!ok) {
      c.passed = false;
      c.detail = "n = " + std::to_string(n);
      return c;
    }
    reached = n;
  }
  c.detail = "n <= " + std::to_string(reached);
  return c;
}

Sft load(const RunConfig& config) {
  config.validate();
  return io::load_sft_file(config.input);
}

}  // namespace

void RunConfig::validate() const {
  if (input.empty()) throw Error(ErrorKind::kInvalidArgument, "--input is required");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  if (n_max == 0 || r_max == 0 || m_max == 0) {
    throw Error(ErrorKind::kInvalidArgument, "n-max, r-max and m-max must be positive");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tol must be positive");
  if (c && !std::isfinite(*c)) throw Error(ErrorKind::kInvalidArgument, "c must be finite");
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
    case ErrorKind::kInvalidArgument: return kParseError;
    case ErrorKind::kEmptyShift: return kEmptyShiftExit;
    case ErrorKind::kZeroEntropy: return kZeroEntropyExit;
    case ErrorKind::kReducible:
    case ErrorKind::kNumerical: return kInternalError;
  }
  return kInternalError;
}

int cmd_entropy(const RunConfig& config, std::ostream& out) {
  const Sft sft = load(config);
  const Recoding rec = higher_block_recode(sft);
  const SpectralData spectral = entropy_spectral(rec.target);
  const auto components = irreducible_components(rec.target);
  const LanguageTable table = language_table(sft, config.n_max);
  const std::optional<Recoding> shown =
      rec.step > 1 ? std::optional<Recoding>(rec) : std::nullopt;

  nlohmann::json summary{
      {"alphabet_size", sft.alphabet().size()},
      {"step", rec.step},
      {"lambda", static_cast<double>(spectral.lambda)},
      {"entropy", spectral.entropy()},
      {"converged", spectral.converged},
      {"residual", static_cast<double>(spectral.residual)},
      {"components", components.size()},
      {"right_eigenvector", std::vector<double>(spectral.right.begin(), spectral.right.end())},
      {"left_eigenvector", std::vector<double>(spectral.left.begin(), spectral.left.end())},
  };
  io::write_files_atomic(config.out,
                         {{"language.csv", io::language_csv(table, spectral.lambda, config.n_max)},
                          {"components.csv", io::components_csv(components, shown)},
                          {"entropy.json", summary.dump(2) + "\n"}});

  out << "alphabet " << sft.alphabet().size() << ", step " << rec.step << "\n"
      << "lambda   " << fixed(static_cast<double>(spectral.lambda), 10) << "\n"
      << "entropy  " << fixed(spectral.entropy(), 10) << "\n"
      << "irreducible components: " << components.size() << "\n";
  for (const Component& c : components) {
    out << "  size " << c.symbols.size() << "  entropy " << fixed(c.entropy, 10) << "\n";
  }
  out << "wrote " << config.out.string() << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const Sft sft = load(config);
  const RoofSpec spec = build_roof(sft, roof_options(config));

  const QTable q = q_table(spec, config.r_max);
  const PartitionTable at_one = pressure_estimate(spec, config.n_max, 1.0);
  const PartitionTable at_larger = pressure_estimate(spec, config.n_max, 1.5);
  const PressureRoot root = pressure_root(spec, config.n_max, config.tol);
  const double series = exp_sqrt_series_bound(spec.c());

  std::vector<Check> checks;
  checks.push_back(check_q(q));
  checks.push_back(check_recursion(q));
  checks.push_back({"series_below_half", series < 0.5, "bound " + io::format_double(series)});
  checks.push_back(check_sandwich(at_one));
  checks.push_back(check_monotone(at_one, at_larger));
  checks.push_back(check_decomposition(spec, at_one));
  checks.push_back(check_sum_chain(spec));
  checks.push_back(check_block_sums(spec));
  checks.push_back(check_root(root, config.tol));
  if (config.oracle) checks.push_back(check_oracle(spec, q, config.n_max));

  io::write_files_atomic(config.out,
                         {{"roof_spec.json", io::roof_spec_json(spec, sft).dump(2) + "\n"},
                          {"aj.csv", io::aj_csv(spec, spec.aj().size())},
                          {"q.csv", io::q_csv(q)},
                          {"partition.csv", io::partition_csv({at_one, at_larger})},
                          {"root.csv", io::root_csv(root.result)},
                          {"checks.csv", checks_csv(checks)}});

  bool all = true;
  out << "h(Y) " << fixed(spec.h_y(), 10) << "  c " << fixed(spec.c(), 6) << "\n";
  for (const Check& c : checks) {
    out << (c.passed ? "ok    " : "FAIL  ") << std::left << std::setw(20) << c.name << c.detail
        << "\n";
    all = all && c.passed;
  }
  out << "root " << fixed(root.result.root, 12) << " in [" << fixed(root.enclosure_lo, 6)
      << ", " << fixed(root.enclosure_hi, 6) << "]\n";
  return all ? kOk : kCheckFailed;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
  const Sft sft = load(config);
  const RoofSpec spec = build_roof(sft, roof_options(config));
  ReportOptions options;
  options.n = config.n_max;
  options.m_max = config.m_max;
  options.tol = config.tol;
  const SuspensionReport report = mme_report(spec, options);
  const std::string text = format_report(report);
  io::write_files_atomic(config.out, {{"report.json", to_json(report).dump(2) + "\n"},
                                      {"report.txt", text}});
  out << text;
  return kOk;
}

int cmd_lemma(const std::vector<double>& values, const std::filesystem::path& out_dir,
              std::ostream& out) {
  const SubadditiveSeq seq(values);
  std::ostringstream csv;
  csv << "n,k,lhs,rhs,holds\n";
  bool all = true;
  for (std::size_t n = 1; n * (n - 1) / 2 + 1 <= seq.size(); ++n) {
    for (std::size_t k = 1; k <= n && n * (n - 1) / 2 + k <= seq.size(); ++k) {
      const auto r = lemma_inequality(std::span<const double>(seq.values()), n, k);
      csv << n << "," << k << "," << io::format_double(r.lhs) << ","
          << io::format_double(r.rhs) << "," << (r.holds ? 1 : 0) << "\n";
      all = all && r.holds;
    }
  }
  if (!out_dir.empty()) io::write_files_atomic(out_dir, {{"lemma.csv", csv.str()}});
  out << csv.str();
  return all ? kOk : kCheckFailed;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Roof functions over subshifts of finite type"};
  app.require_subcommand(1);

  RunConfig config;
  std::string input;
  std::string out_dir = config.out.string();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "SFT definition file")->required();
    sub->add_option("--c", config.c, "roof constant, > max{2, log d}");
    sub->add_option("--alpha", config.alpha, "alpha in (0,1)");
    sub->add_option("--n-max", config.n_max, "largest word length")->capture_default_str();
    sub->add_option("--r-max", config.r_max, "largest r for Q(r)")->capture_default_str();
    sub->add_option("--m-max", config.m_max, "depth of roof integrals")->capture_default_str();
    sub->add_option("--tol", config.tol, "root residual tolerance")->capture_default_str();
    sub->add_flag("--oracle", config.oracle, "cross-check against brute-force enumeration");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
  };
  CLI::App* entropy = app.add_subcommand("entropy", "language table, entropy, components");
  CLI::App* verify = app.add_subcommand("verify", "roof tables and verification checks");
  CLI::App* report = app.add_subcommand("report", "measures of maximal entropy of the flow");
  add_common(entropy);
  add_common(verify);
  add_common(report);

  CLI::App* lemma = app.add_subcommand("lemma", "sub-additive lemma table");
  std::vector<double> values;
  std::size_t random_length = 0;
  std::uint64_t seed = 1;
  std::string lemma_out;
  auto* values_opt = lemma->add_option("--values", values, "b_1,...,b_N")->delimiter(',');
  auto* random_opt = lemma->add_option("--random", random_length, "generate a sequence of length N");
  values_opt->excludes(random_opt);
  lemma->add_option("--seed", seed, "seed for --random")->capture_default_str();
  lemma->add_option("--out", lemma_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    config.input = input;
    config.out = out_dir;
    if (*entropy) return cmd_entropy(config, out);
    if (*verify) return cmd_verify(config, out);
    if (*report) return cmd_report(config, out);
    if (random_length > 0) {
      const SubadditiveSeq generated = random_subadditive(random_length, seed);
      values.assign(generated.values().begin(), generated.values().end());
    }
    if (values.empty()) throw Error(ErrorKind::kInvalidArgument, "lemma needs --values or --random");
    return cmd_lemma(values, lemma_out, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    if (e.kind() == ErrorKind::kZeroEntropy) {
      err << "h(Y) > 0 is required: measures on a zero entropy Y lift to zero entropy"
             " flow measures, which are never of maximal entropy\n";
    }
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace sftroof::cli
