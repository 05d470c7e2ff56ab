#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sftroof/roof.hpp"

using namespace sftroof;

namespace {

const double kLogPhi = std::log(std::numbers::phi);

TransitionMatrix golden() { return TransitionMatrix::from_rows({{1, 1}, {1, 0}}); }

TransitionMatrix two_blocks() {
  return TransitionMatrix::from_rows(
      {{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}});
}

const RoofSpec& golden_spec() {
  static const RoofSpec spec = build_roof(golden());
  return spec;
}

}  // namespace

TEST(DefaultC, Examples) {
  EXPECT_DOUBLE_EQ(default_c(2), 2.5);
  EXPECT_DOUBLE_EQ(default_c(4), 2.5);
  EXPECT_NEAR(default_c(16), std::log(16.0) + 0.5, 1e-15);
  EXPECT_NEAR(default_c(16), 3.2726, 1e-4);
  EXPECT_THROW(validate_c(2.0, 2), Error);
  EXPECT_THROW(validate_c(2.7, 16), Error);
  EXPECT_NO_THROW(validate_c(2.01, 2));
}

TEST(Blocks, Convention) {
  EXPECT_EQ(block_of(1), 1u);
  EXPECT_EQ(block_of(2), 2u);
  EXPECT_EQ(block_of(3), 2u);
  EXPECT_EQ(block_of(4), 3u);
  EXPECT_EQ(block_of(6), 3u);
  EXPECT_EQ(block_of(7), 4u);
  for (std::size_t n = 1; n <= 60; ++n) {
    for (std::size_t j = n * (n - 1) / 2 + 1; j <= n * (n + 1) / 2; ++j) {
      EXPECT_EQ(block_of(j), n);
    }
  }
  EXPECT_THROW(block_of(0), Error);
}

TEST(AjTable, GoldenMeanValues) {
  const AjTable& aj = golden_spec().aj();
  EXPECT_NEAR(a_value(aj, 1), std::log(2.0) + 2.5, 1e-14);
  EXPECT_NEAR(a_value(aj, 1), 3.1931472, 1e-7);
  EXPECT_NEAR(a_value(aj, 2), 0.5 * std::log(3.0) + 2.5 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(a_value(aj, 2), 2.3170731, 1e-7);
  EXPECT_NEAR(a_value(aj, 4), std::log(5.0) / 3.0 + 1.25, 1e-14);
  EXPECT_NEAR(a_value(aj, 4), 1.7864793, 1e-7);
  EXPECT_THROW(a_value(aj, 0), Error);
}

TEST(AjTable, BoundsAndDecay) {
  const RoofSpec& spec = golden_spec();
  const AjTable& aj = spec.aj();
  const double a1 = aj.value(1);
  for (std::size_t j = 1; j <= aj.size(); ++j) {
    const double a = aj.value(j);
    EXPECT_GE(a, spec.h_y());
    EXPECT_LE(a, a1);
    const std::size_t n = block_of(j);
    // the finite-table estimate sits above h(Y) by at most log(C2)/N
    const double slack = static_cast<double>(spec.language().entropy_estimate()) - spec.h_y();
    const double gap = static_cast<double>(spec.language().log_count(n) / n -
                                           spec.language().entropy_estimate()) +
                       aj.c() / std::sqrt(static_cast<double>(j));
    EXPECT_LE(a - spec.h_y(), gap + slack + 1e-12);
  }
}

TEST(AjTable, EntropyEstimateSlack) {
  const RoofSpec& spec = golden_spec();
  const LanguageTable& t = spec.language();
  const double slack = static_cast<double>(t.entropy_estimate()) - spec.h_y();
  EXPECT_GE(slack, 0.0);
  EXPECT_LE(slack, static_cast<double>(std::log(spec.perron().c2)) / t.max_n() + 1e-12);
}

TEST(AjTable, SupAfterIsCertifiedAndMonotone) {
  const AjTable& aj = golden_spec().aj();
  double previous = aj.sup_after(0);
  for (std::size_t m = 0; m < aj.size(); ++m) {
    double exact = 0.0;
    for (std::size_t j = m + 1; j <= aj.size(); ++j) exact = std::max(exact, aj.value(j));
    EXPECT_GE(aj.sup_after(m), exact);
    EXPECT_LE(aj.sup_after(m), previous);
    previous = aj.sup_after(m);
  }
  EXPECT_GE(aj.sup_after(10 * aj.size()), golden_spec().h_y());
  EXPECT_LE(aj.sup_after(10 * aj.size()), aj.sup_after(aj.size()));
}

TEST(AjTable, BlockSumIdentity) {
  const RoofSpec& spec = golden_spec();
  const AjTable& aj = spec.aj();
  long double whole = 0.0L;
  long double harmonic = 0.0L;
  std::size_t s = 0;
  for (std::size_t n = 1; n <= 40; ++n) {
    const long double log_n = spec.language().log_count(n);
    for (std::size_t k = 1; k <= n; ++k) {
      ++s;
      harmonic += 1.0L / std::sqrt(static_cast<long double>(s));
      const long double expected = whole + k * log_n / n + 2.5L * harmonic;
      EXPECT_NEAR(static_cast<double>(aj.prefix_sum_extended(s)), static_cast<double>(expected),
                  1e-12 * static_cast<double>(expected));
    }
    whole += log_n;
  }
}

TEST(Beta, Examples) {
  const BetaMap b = golden_spec().beta();
  EXPECT_EQ(b.domain(), (std::vector<Symbol>{1}));
  EXPECT_EQ(*b.successor[1], 1u);

  EXPECT_TRUE(beta_choice(TransitionMatrix::full(3), TransitionMatrix::full(3)).empty());

  const BetaMap four = beta_choice(TransitionMatrix::full(4), two_blocks());
  EXPECT_EQ(four.domain(), (std::vector<Symbol>{0, 1, 2, 3}));
  EXPECT_EQ(*four.successor[0], 2u);
  EXPECT_EQ(*four.successor[2], 0u);

  const auto alternatives = beta_alternatives(TransitionMatrix::full(4), two_blocks());
  EXPECT_EQ(alternatives[0], (std::vector<Symbol>{2, 3}));
}

TEST(BuildRoof, GoldenMean) {
  const RoofSpec& spec = golden_spec();
  EXPECT_NEAR(spec.h_y(), kLogPhi, 1e-12);
  EXPECT_DOUBLE_EQ(spec.c(), 2.5);
  EXPECT_DOUBLE_EQ(spec.alpha(), 0.5);
  EXPECT_EQ(spec.alphabet_size(), 2u);
}

TEST(BuildRoof, Errors) {
  try {
    build_roof(TransitionMatrix::from_rows({{1, 0}, {0, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kZeroEntropy);
  }
  try {
    build_roof(TransitionMatrix::from_rows({{0, 1}, {0, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyShift);
  }
  RoofOptions bad_alpha;
  bad_alpha.alpha = 1.0;
  EXPECT_THROW(build_roof(golden(), bad_alpha), Error);
  RoofOptions bad_c;
  bad_c.c = 1.5;
  EXPECT_THROW(build_roof(golden(), bad_c), Error);
  // target not inside ambient
  EXPECT_THROW(RoofSpec(golden(), TransitionMatrix::full(2)), Error);
}

TEST(BuildRoof, AlphaDoesNotChangeValues) {
  RoofOptions options;
  options.alpha = 0.1;
  const RoofSpec other = build_roof(golden(), options);
  for (std::size_t j = 1; j <= 100; ++j) {
    EXPECT_EQ(other.aj().value(j), golden_spec().aj().value(j));
  }
}

TEST(BuildRoof, TwoStepRecodes) {
  const RoofSpec spec = build_roof(Sft::from_forbidden_words(Alphabet(2), {{1, 1, 1}}));
  EXPECT_EQ(spec.alphabet_size(), 4u);
  ASSERT_TRUE(spec.recoding());
  EXPECT_EQ(spec.recoding()->step, 2u);
  EXPECT_EQ(spec.ambient(), spec.recoding()->ambient);
  EXPECT_FALSE(spec.ambient() == TransitionMatrix::full(4));
  // tribonacci growth
  EXPECT_NEAR(spec.h_y(), std::log(1.8392867552141612), 1e-12);
  EXPECT_DOUBLE_EQ(spec.c(), default_c(4));
}

TEST(FirstViolation, Examples) {
  const RoofSpec& spec = golden_spec();
  EXPECT_FALSE(first_violation(spec, Word{0, 1, 0}));
  EXPECT_EQ(first_violation(spec, Word{0, 1, 1}), 2u);
  EXPECT_EQ(first_violation(spec, Word{1, 1}), 1u);

  // Y on {0} only needs an ambient where the lone loop has positive entropy;
  // use the full shift on {0,1} plus a dead symbol 2.
  const RoofSpec dead(TransitionMatrix::full(3),
                      TransitionMatrix::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 0}}));
  EXPECT_EQ(first_violation(dead, Word{2, 0}), 1u);
  EXPECT_EQ(first_violation(dead, Word{0, 2}), 1u);
  EXPECT_EQ(first_violation(dead, Word{0, 1, 2}), 2u);
  EXPECT_EQ(first_violation(dead, Word{0, 2, 2, 2}), 1u);
}

TEST(GEval, Examples) {
  const RoofSpec& spec = golden_spec();
  const PotentialEval zeros = g_eval(spec, Word(20, 0));
  EXPECT_EQ(zeros.kind, PotentialEval::Kind::kAdmissiblePrefix);
  EXPECT_LE(zeros.lo, -spec.h_y());
  EXPECT_DOUBLE_EQ(zeros.hi, -spec.h_y());

  const PotentialEval ones = g_eval(spec, Word{1, 1, 0});
  EXPECT_TRUE(ones.exact());
  EXPECT_EQ(ones.position, 1u);
  EXPECT_NEAR(ones.lo, -3.1931472, 1e-7);
  EXPECT_EQ(ones.lo, ones.hi);

  const PotentialEval second = g_eval(spec, Word{0, 1, 1});
  EXPECT_EQ(second.position, 2u);
  EXPECT_NEAR(second.lo, -spec.aj().value(2), 1e-15);
  EXPECT_NEAR(second.lo, -2.3171, 1e-4);
}

TEST(GEval, IntervalWidthShrinks) {
  const RoofSpec& spec = golden_spec();
  double previous_width = 1e300;
  for (std::size_t len = 1; len <= 200; ++len) {
    const PotentialEval e = g_eval(spec, Word(len, 0));
    const double width = e.hi - e.lo;
    EXPECT_NEAR(width, spec.aj().sup_after(len - 1) - spec.h_y(), 1e-12);
    EXPECT_LE(width, previous_width);
    previous_width = width;
  }
}

TEST(RoofEval, Examples) {
  const RoofSpec& spec = golden_spec();
  const PotentialEval v1 = roof_eval(spec, Word{1, 1});
  EXPECT_DOUBLE_EQ(v1.lo, spec.aj().value(1));
  const PotentialEval v3 = roof_eval(spec, Word{0, 1, 0, 1, 1});
  EXPECT_EQ(v3.position, 4u);
  EXPECT_DOUBLE_EQ(v3.lo, spec.aj().value(4));
  const PotentialEval v = roof_eval(spec, Word{0, 0, 1, 1});
  EXPECT_EQ(v.position, 3u);
  EXPECT_DOUBLE_EQ(v.hi, spec.aj().value(3));
  const PotentialEval y = roof_eval(spec, Word(30, 0));
  EXPECT_DOUBLE_EQ(y.lo, spec.h_y());
  EXPECT_NEAR(y.hi, spec.aj().sup_after(29), 1e-15);
}

TEST(RoofEval, RangeWithinBounds) {
  std::mt19937_64 rng(8);
  const RoofSpec spec(TransitionMatrix::full(3),
                      TransitionMatrix::from_rows({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}));
  for (int trial = 0; trial < 2000; ++trial) {
    Word w(1 + rng() % 25);
    for (auto& s : w) s = static_cast<Symbol>(rng() % 3);
    const PotentialEval e = roof_eval(spec, w);
    EXPECT_GE(e.lo, spec.h_y() - 1e-15);
    EXPECT_LE(e.hi, spec.aj().value(1) + 1e-15);
    EXPECT_LE(e.lo, e.hi);
  }
}

TEST(Lasso, ExactEvaluationAgreesWithWordEvaluation) {
  const RoofSpec& spec = golden_spec();
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    Word w(1 + rng() % 12);
    for (auto& s : w) s = static_cast<Symbol>(rng() % 2);
    const Lasso point = extend_ambient_random(spec, w, rng);
    ASSERT_TRUE(is_ambient_point(spec, point));
    for (std::size_t i = 1; i <= w.size(); ++i) {
      Word forward;
      for (std::size_t k = i; k < i + 80; ++k) forward.push_back(point.at(k));
      const PotentialEval e = g_eval(spec, forward);
      const double exact = g_exact(spec, point, i);
      EXPECT_GE(exact, e.lo - 1e-15);
      EXPECT_LE(exact, e.hi + 1e-15);
    }
  }
}

TEST(Lasso, BetaIrrelevance) {
  // g of (w_1..w_r, beta, anything) on the first r coordinates does not depend
  // on which beta is used.
  const RoofSpec spec(TransitionMatrix::full(4), two_blocks());
  const auto alternatives = beta_alternatives(spec.ambient(), spec.target());
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    Word w(1 + rng() % 10);
    for (auto& s : w) s = static_cast<Symbol>(rng() % 4);
    std::vector<double> seen;
    for (Symbol b : alternatives[w.back()]) {
      Word head = w;
      head.push_back(b);
      const Lasso point = extend_ambient_random(spec, head, rng);
      double sum = 0.0;
      for (std::size_t i = 1; i <= w.size(); ++i) sum += g_exact(spec, point, i);
      seen.push_back(sum);
    }
    for (double v : seen) EXPECT_EQ(v, seen.front());
  }
}

TEST(Extensions, IntoTargetStaysAdmissible) {
  const RoofSpec& spec = golden_spec();
  const Lasso p = extend_into_target(spec, Word{1, 0, 1});
  for (std::size_t k = 1; k < 40; ++k) EXPECT_TRUE(spec.target()(p.at(k), p.at(k + 1)));
  EXPECT_THROW(extend_into_target(spec, Word{}), Error);
}
