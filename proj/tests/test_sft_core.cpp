#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "sftroof/sft_core.hpp"

using namespace sftroof;

namespace {

const double kPhi = std::numbers::phi;

TransitionMatrix golden() { return TransitionMatrix::from_rows({{1, 1}, {1, 0}}); }

TransitionMatrix two_blocks() {
  return TransitionMatrix::from_rows(
      {{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}});
}

// Counts words of length n over {0..d-1} avoiding every forbidden subword and
// extendable to length n + pad. Plain enumeration.
std::uint64_t brute_count(const Sft& sft, std::size_t n, std::size_t pad) {
  const std::size_t d = sft.alphabet().size();
  const std::size_t m = sft.step() + 1;
  auto ok = [&](const Word& w) {
    for (std::size_t i = 0; i + m <= w.size(); ++i) {
      if (sft.is_forbidden(std::span<const Symbol>(w).subspan(i, m))) return false;
    }
    return true;
  };
  std::uint64_t count = 0;
  Word w(n, 0);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= d;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t x = code;
    for (std::size_t i = 0; i < n; ++i) {
      w[n - 1 - i] = static_cast<Symbol>(x % d);
      x /= d;
    }
    if (!ok(w)) continue;
    std::function<bool(Word&, std::size_t)> extendable = [&](Word& u, std::size_t left) {
      if (left == 0) return true;
      for (std::size_t s = 0; s < d; ++s) {
        u.push_back(static_cast<Symbol>(s));
        const bool good = ok(u) && extendable(u, left - 1);
        u.pop_back();
        if (good) return true;
      }
      return false;
    };
    Word u = w;
    if (extendable(u, pad)) ++count;
  }
  return count;
}

TransitionMatrix random_matrix(std::mt19937_64& rng, std::size_t d, double p) {
  std::bernoulli_distribution coin(p);
  TransitionMatrix a(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a.set(i, j, coin(rng));
  }
  return a;
}

}  // namespace

TEST(Sft, GoldenMeanFromForbiddenWords) {
  const Sft s = Sft::from_forbidden_words(Alphabet(2), {{1, 1}});
  EXPECT_EQ(s.step(), 1u);
  EXPECT_EQ(to_matrix(s), golden());
}

TEST(Sft, EmptyForbiddenSetIsFullShift) {
  const Sft s = Sft::from_forbidden_words(Alphabet(2), {});
  EXPECT_EQ(s.step(), 1u);
  EXPECT_TRUE(s.forbidden().empty());
  EXPECT_EQ(to_matrix(s), TransitionMatrix::full(2));
}

TEST(Sft, TwoStepNormalization) {
  const Sft s = Sft::from_forbidden_words(Alphabet(2), {{1, 1, 1}});
  EXPECT_EQ(s.step(), 2u);
  ASSERT_EQ(s.forbidden().size(), 1u);
  EXPECT_EQ(s.forbidden()[0], (Word{1, 1, 1}));
  EXPECT_THROW(to_matrix(s), Error);
}

TEST(Sft, ShortWordsAreExpanded) {
  // forbidding "2" together with a length-3 word
  const Sft s = Sft::from_forbidden_words(Alphabet(3), {{2}, {0, 1, 0}});
  EXPECT_EQ(s.step(), 2u);
  // 9 words of length 3 with a 2 in front, middle or back: 27 - 8 = 19, plus 010.
  EXPECT_EQ(s.forbidden().size(), 20u);
}

TEST(Sft, RejectsBadInput) {
  EXPECT_THROW(Alphabet(0), Error);
  EXPECT_THROW(Sft::from_forbidden_words(Alphabet(2), {{0, 2}}), Error);
  EXPECT_THROW(Sft::from_forbidden_words(Alphabet(2), {{}}), Error);
  EXPECT_THROW(TransitionMatrix::from_rows({{1, 1}, {1}}), Error);
  EXPECT_THROW(TransitionMatrix::from_rows({{1, 2}, {1, 0}}), Error);
}

TEST(Sft, FullShiftMatrix) {
  EXPECT_EQ(to_matrix(Sft::from_forbidden_words(Alphabet(2), {})),
            TransitionMatrix::from_rows({{1, 1}, {1, 1}}));
}

TEST(Sft, TwoComponentExampleFromCrossingPairs) {
  const Sft s = Sft::from_forbidden_words(
      Alphabet(4), {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 0}, {2, 1}, {3, 0}, {3, 1}});
  EXPECT_EQ(to_matrix(s), two_blocks());
}

TEST(Essentialize, Examples) {
  EXPECT_EQ(essentialize(golden()), golden());
  EXPECT_TRUE(essentialize(TransitionMatrix::from_rows({{0, 1}, {0, 0}})).is_zero());
  EXPECT_EQ(essentialize(TransitionMatrix::from_rows({{1, 1}, {0, 0}})),
            TransitionMatrix::from_rows({{1, 0}, {0, 0}}));
}

TEST(Essentialize, IdempotentAndCountPreserving) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 5;
    const TransitionMatrix a = random_matrix(rng, d, 0.4);
    const TransitionMatrix e = essentialize(a);
    EXPECT_EQ(essentialize(e), e);
    EXPECT_TRUE(e.is_subset_of(a));
    for (std::size_t n = 1; n <= 6; ++n) {
      EXPECT_EQ(language_count(a, n), language_count(e, n));
    }
  }
}

TEST(LanguageCount, GoldenMean) {
  const std::vector<int> expected{2, 3, 5, 8};
  for (std::size_t n = 1; n <= 4; ++n) {
    EXPECT_EQ(language_count(golden(), n), expected[n - 1]);
  }
  // Fibonacci further out
  EXPECT_EQ(language_count(golden(), 30), BigCount(2178309));
}

TEST(LanguageCount, FullAndTwoComponent) {
  EXPECT_EQ(language_count(TransitionMatrix::full(2), 10), 1024);
  EXPECT_EQ(language_count(two_blocks(), 3), 16);
}

TEST(LanguageCount, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const TransitionMatrix a = random_matrix(rng, 3, 0.6);
    const Sft s = Sft::from_matrix(a);
    for (std::size_t n = 1; n <= 6; ++n) {
      EXPECT_EQ(language_count(a, n), BigCount(brute_count(s, n, 8)));
    }
  }
}

TEST(LanguageTable, ExactAndLogAgree) {
  const LanguageTable t = language_table(golden(), 400, 300);
  EXPECT_EQ(t.max_n(), 400u);
  EXPECT_EQ(t.exact_max_n(), 300u);
  for (std::size_t n : {1u, 10u, 100u, 300u}) {
    EXPECT_NEAR(static_cast<double>(t.log_count(n)),
                static_cast<double>(log_big(t.count(n))), 1e-12 * n);
  }
  // Past the exact range the log grows at rate log phi.
  EXPECT_NEAR(static_cast<double>(t.log_count(400) - t.log_count(399)), std::log(kPhi), 1e-12);
  EXPECT_EQ(t.log_count(0), 0.0L);
}

TEST(LanguageTable, SubMultiplicative) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const TransitionMatrix a = random_matrix(rng, 4, 0.5);
    if (essentialize(a).is_zero()) continue;
    const LanguageTable t = language_table(a, 40);
    for (std::size_t i = 1; i <= 20; ++i) {
      for (std::size_t j = 1; j <= 20; ++j) {
        EXPECT_LE(t.count(i + j), t.count(i) * t.count(j));
      }
    }
  }
}

TEST(Spectral, GoldenMean) {
  const SpectralData s = entropy_spectral(golden());
  EXPECT_NEAR(static_cast<double>(s.lambda), kPhi, 1e-12);
  EXPECT_NEAR(s.entropy(), 0.4812118250596034, 1e-12);
  EXPECT_TRUE(s.converged);
}

TEST(Spectral, FullShiftsAndTwoComponents) {
  for (std::size_t d = 1; d <= 6; ++d) {
    EXPECT_NEAR(static_cast<double>(entropy_spectral(TransitionMatrix::full(d)).lambda),
                static_cast<double>(d), 1e-12);
  }
  const SpectralData s = entropy_spectral(two_blocks());
  EXPECT_NEAR(static_cast<double>(s.lambda), 2.0, 1e-12);
  EXPECT_NEAR(s.entropy(), std::log(2.0), 1e-12);
}

TEST(Spectral, PeriodicMatrix) {
  // period-2 cycle 0 -> 1 -> 0, lambda = 1
  const SpectralData s = entropy_spectral(TransitionMatrix::from_rows({{0, 1}, {1, 0}}));
  EXPECT_NEAR(static_cast<double>(s.lambda), 1.0, 1e-12);
  EXPECT_THROW(entropy_spectral(TransitionMatrix(3)), Error);
}

TEST(Spectral, MatchesGrowthOfCounts) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const TransitionMatrix a = random_matrix(rng, 4, 0.55);
    const TransitionMatrix e = essentialize(a);
    if (e.is_zero()) continue;
    const double h = entropy_spectral(e).entropy();
    const LanguageTable t = language_table(e, 600);
    // log|L_n| / n converges to h at rate O(log n / n) even when reducible.
    EXPECT_NEAR(static_cast<double>(t.log_count(600)) / 600.0, h, 0.03);
  }
}

TEST(Perron, SandwichAndExtension) {
  const LanguageTable t = language_table(golden(), 70);
  const long double lambda = entropy_spectral(golden()).lambda;
  const PerronBounds b = perron_bounds(t, lambda, 60);
  EXPECT_NEAR(static_cast<double>(b.c2), 2.0 / kPhi, 1e-12);
  EXPECT_NEAR(static_cast<double>(b.c1), 3.0 / (kPhi * kPhi), 1e-12);
  for (std::size_t n = 1; n <= 70; ++n) {
    const long double ratio = std::exp(t.log_count(n) - n * std::log(lambda));
    EXPECT_GE(ratio, b.c1 - 1e-12L);
    EXPECT_LE(ratio, b.c2 + 1e-12L);
  }
  // entropy estimate is an infimum above log lambda
  EXPECT_GE(t.entropy_estimate(), std::log(lambda) - 1e-12L);
  for (std::size_t n = 1; n <= 60; ++n) {
    EXPECT_LE(std::fabs(t.log_count(n) / n - std::log(lambda)),
              2.0L * std::log(b.c2) / n + 1e-12L);
  }
}

TEST(Components, Examples) {
  const auto g = irreducible_components(golden());
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].symbols, (std::vector<Symbol>{0, 1}));
  EXPECT_NEAR(g[0].entropy, std::log(kPhi), 1e-12);

  const auto two = irreducible_components(two_blocks());
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].symbols, (std::vector<Symbol>{0, 1}));
  EXPECT_EQ(two[1].symbols, (std::vector<Symbol>{2, 3}));
  for (const auto& c : two) EXPECT_NEAR(c.entropy, std::log(2.0), 1e-12);

  const auto upper = irreducible_components(TransitionMatrix::from_rows({{1, 1}, {0, 1}}));
  ASSERT_EQ(upper.size(), 2u);
  EXPECT_EQ(upper[0].symbols, (std::vector<Symbol>{0}));
  EXPECT_EQ(upper[1].symbols, (std::vector<Symbol>{1}));
  for (const auto& c : upper) EXPECT_NEAR(c.entropy, 0.0, 1e-12);
}

TEST(Components, TransientSymbolsExcluded) {
  // 0 -> 1 only, 1 loops: {0} carries no internal edge
  const auto c = irreducible_components(TransitionMatrix::from_rows({{0, 1}, {0, 1}}));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].symbols, (std::vector<Symbol>{1}));
  EXPECT_TRUE(is_irreducible(golden()));
  EXPECT_FALSE(is_irreducible(two_blocks()));
}

TEST(Parry, FullTwoShift) {
  const ParryMeasure mu = parry_measure(TransitionMatrix::full(2));
  for (double p : mu.stationary) EXPECT_NEAR(p, 0.5, 1e-12);
  for (const auto& row : mu.kernel) {
    for (double p : row) EXPECT_NEAR(p, 0.5, 1e-12);
  }
}

TEST(Parry, GoldenMean) {
  const ParryMeasure mu = parry_measure(golden());
  const double norm = kPhi * kPhi + 1.0;
  EXPECT_NEAR(mu.stationary[0], kPhi * kPhi / norm, 1e-12);
  EXPECT_NEAR(mu.stationary[1], 1.0 / norm, 1e-12);
  EXPECT_NEAR(mu.stationary[0], 0.7236, 1e-4);
  EXPECT_LE(mu.stationarity_residual(), 1e-12);
  EXPECT_NEAR(mu.entropy(), std::log(kPhi), 1e-10);
}

TEST(Parry, RandomIrreducible) {
  std::mt19937_64 rng(99);
  int tested = 0;
  while (tested < 30) {
    const std::size_t d = 2 + rng() % 5;
    const TransitionMatrix a = random_matrix(rng, d, 0.5);
    if (!is_irreducible(a)) continue;
    ++tested;
    const ParryMeasure mu = parry_measure(a);
    EXPECT_LE(mu.stationarity_residual(), 1e-12);
    EXPECT_NEAR(mu.entropy(), std::log(static_cast<double>(mu.lambda)), 1e-10);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (!a(i, j)) EXPECT_EQ(mu.kernel[i][j], 0.0);
      }
    }
  }
  EXPECT_THROW(parry_measure(two_blocks()), Error);
}

TEST(Recode, IdentityForOneStep) {
  const Recoding r = higher_block_recode(Sft::from_matrix(golden()));
  EXPECT_EQ(r.step, 1u);
  EXPECT_EQ(r.target, golden());
  EXPECT_EQ(r.ambient, TransitionMatrix::full(2));
}

TEST(Recode, No111) {
  const Sft s = Sft::from_forbidden_words(Alphabet(2), {{1, 1, 1}});
  const Recoding r = higher_block_recode(s);
  ASSERT_EQ(r.blocks.size(), 4u);
  EXPECT_EQ(r.blocks[3], (Word{1, 1}));
  // 11 -> 11 would spell 111
  EXPECT_FALSE(r.target(3, 3));
  EXPECT_TRUE(r.ambient(3, 3));
  // overlap: 01 can be followed by 10 or 11 but not by 00
  EXPECT_TRUE(r.ambient(1, 2));
  EXPECT_TRUE(r.ambient(1, 3));
  EXPECT_FALSE(r.ambient(1, 0));
  EXPECT_TRUE(r.target.is_subset_of(r.ambient));
  EXPECT_EQ(language_count(s, 4), language_count(r.target, 3));
  EXPECT_EQ(language_count(s, 4), BigCount(brute_count(s, 4, 6)));
}

TEST(Recode, EmptyTargetThrows) {
  // every length-3 word forbidden
  std::vector<Word> all;
  for (Symbol a = 0; a < 2; ++a)
    for (Symbol b = 0; b < 2; ++b)
      for (Symbol c = 0; c < 2; ++c) all.push_back({a, b, c});
  try {
    higher_block_recode(Sft::from_forbidden_words(Alphabet(2), all));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyShift);
  }
}

TEST(Recode, ConjugacyOnRandomThreeSteps) {
  std::mt19937_64 rng(17);
  int tested = 0;
  while (tested < 10) {
    std::vector<Word> forbidden;
    for (int i = 0; i < 3; ++i) {
      Word w(4);
      for (auto& s : w) s = static_cast<Symbol>(rng() % 2);
      forbidden.push_back(w);
    }
    const Sft s = Sft::from_forbidden_words(Alphabet(2), forbidden);
    Recoding r;
    try {
      r = higher_block_recode(s);
    } catch (const Error&) {
      continue;
    }
    ++tested;
    for (std::size_t n = 1; n <= 10; ++n) {
      EXPECT_EQ(language_count(r.target, n), BigCount(brute_count(s, n + 2, 12)));
    }
  }
}
