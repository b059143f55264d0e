#include <gtest/gtest.h>

#include "ordmet/topo.hpp"
#include "oracles.hpp"

using namespace ordmet;
using oracle::frac;

namespace {

TopoStructure line() { return TopoStructure::strict_order(OrderedModule::coordinate_cone(1)); }
TopoStructure cone(std::size_t n) { return TopoStructure::interior_cone(OrderedModule::coordinate_cone(n)); }
TopoStructure strict(std::size_t n) { return TopoStructure::strict_order(OrderedModule::coordinate_cone(n)); }

Element v(std::initializer_list<Rational> c) { return Element(c); }

}  // namespace

TEST(TopoLaws, StrictOrderOnTheLine) {
  const auto rep = check_topo_laws(line(), {});
  EXPECT_TRUE(rep.all_passed());
  for (const char* law : {"t1", "t2", "t3", "t4", "t5", "t6"}) EXPECT_TRUE(rep.passed(law)) << law;
}

TEST(TopoLaws, InteriorConeInThePlaneAndSpace) {
  EXPECT_TRUE(check_topo_laws(cone(2), {}).all_passed());
  EXPECT_TRUE(check_topo_laws(cone(3), {}).all_passed());
}

TEST(TopoLaws, NonTranslationInvariantRelationFailsT3) {
  const auto base = cone(2);
  const auto capped = base.with_relation("capped", [base](const Element& a, const Element& b) {
    return base.below(a, b) && b[0] < 4 && b[1] < 4;
  });
  EXPECT_FALSE(check_topo_laws(capped, {}).passed("t3"));
}

TEST(TopoLaws, OrderRelationThatKeepsBoundaryFailsT4) {
  // a << b iff a <= b: (0, 1) stays below every eps0 / 2^k, so t4 fails.
  const auto base = cone(2);
  const auto g = base.group();
  const auto loose = base.with_relation("loose", [g](const Element& a, const Element& b) { return g.leq(a, b); });
  EXPECT_FALSE(check_topo_laws(loose, {}).passed("t1"));
}

TEST(TopoStructure, InteriorConeDiffersFromStrictOrder) {
  const Element a = v({0, 1}), b = v({0, 2});
  EXPECT_TRUE(OrderedGroup::coordinate_cone(2).less(a, b));
  EXPECT_FALSE(cone(2).below(a, b));
  EXPECT_TRUE(strict(2).below(a, b));
}

TEST(Convergence, HarmonicPairReachesTenthAfterTen) {
  const auto s = ClosedForm::harmonic(v({1, 1}));
  const auto c = verify_convergence(cone(2), s, Element::zero(2), {v({frac(1, 10), frac(1, 10)})}, 256);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c[0].certified);
  EXPECT_EQ(c[0].threshold, 10u);
  EXPECT_FALSE(c[0].verified_up_to.has_value());
}

TEST(Convergence, ConstantSequenceHasZeroThreshold) {
  const auto s = ClosedForm::constant(v({2, 3}));
  for (const auto& e : {v({1, 1}), v({frac(1, 1000), 5})}) {
    const auto c = verify_convergence(cone(2), s, v({2, 3}), {e}, 256).front();
    EXPECT_TRUE(c.certified);
    EXPECT_EQ(c.threshold, 0u);
  }
}

TEST(Convergence, OscillatingPrefixFailsAtAnEvenIndex) {
  std::vector<Element> terms;
  for (long n = 1; n <= 100; ++n) {
    const Rational x = frac(1, n) + (n % 2 == 0 ? 1 : 0);
    terms.push_back(v({x, x}));
  }
  const auto c = verify_convergence(cone(2), terms, Element::zero(2), {v({frac(1, 2), frac(1, 2)})}, 100).front();
  EXPECT_FALSE(c.certified);
  ASSERT_TRUE(c.violation.has_value());
  EXPECT_EQ(*c.violation % 2, 0u);
}

TEST(Convergence, PrefixUsesTheHalfTailRule) {
  // 1/n over 100 terms with eps = 1/10: last violation n = 10 <= 50.
  std::vector<Element> terms;
  for (long n = 1; n <= 100; ++n) terms.push_back(v({frac(1, n)}));
  const auto ok = verify_convergence(line(), terms, v({0}), {v({frac(1, 10)})}, 100).front();
  EXPECT_TRUE(ok.certified);
  EXPECT_EQ(ok.threshold, 10u);
  EXPECT_EQ(ok.verified_up_to, 100u);
  // eps = 1/60 puts the last violation at 60 > 50.
  const auto late = verify_convergence(line(), terms, v({0}), {v({frac(1, 60)})}, 100).front();
  EXPECT_FALSE(late.certified);
}

TEST(Convergence, RejectsNonPositiveInputs) {
  const auto s = ClosedForm::harmonic(v({1}));
  EXPECT_THROW(verify_convergence(line(), s, v({-1}), {v({1})}, 10), DomainError);
  EXPECT_THROW(verify_convergence(line(), s, v({0}), {v({0})}, 10), DomainError);
}

// Exact closed-form N against a brute-force scan with raw rationals.
TEST(Convergence, ThresholdsMatchBruteForceOracle) {
  oracle::Gen gen(20100132);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const bool interior = trial % 3 != 0;
    oracle::Vec ch(dim), c2(dim), cg(dim), eps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      ch[i] = gen.integer(0, 3);
      c2[i] = frac(gen.integer(0, 4), 2);
      cg[i] = gen.integer(0, 2);
      eps[i] = frac(1, gen.integer(1, 40));
    }
    const Rational r = frac(1, gen.integer(2, 4));
    const auto f = ClosedForm::harmonic(Element(ch)) + ClosedForm::inverse_square(Element(c2)) +
                   ClosedForm::geometric(r, Element(cg));
    const auto t = interior ? cone(dim) : (dim == 1 ? line() : strict(dim));
    const auto cert = verify_convergence(t, f, Element::zero(dim), {Element(eps)}, 256).front();

    auto term = [&](std::uint64_t n) {
      oracle::Vec a(dim);
      oracle::Q rn = 1;
      for (std::uint64_t k = 0; k < n; ++k) rn *= r;
      for (std::size_t i = 0; i < dim; ++i) a[i] = ch[i] / n + c2[i] / (n * n) + cg[i] * rn;
      return a;
    };
    auto holds = [&](std::uint64_t n) {
      const auto a = term(n);
      if (interior) return oracle::all_positive(oracle::sub(eps, a));
      return oracle::cone_leq(a, eps) && a != eps;
    };
    oracle::Q total = 0, min_eps = eps[0];
    for (std::size_t i = 0; i < dim; ++i) {
      total += ch[i] + c2[i] + cg[i];
      min_eps = std::min<oracle::Q>(min_eps, eps[i]);
    }
    // a_n <= total / n coordinatewise, so every n > total / min_eps holds.
    const oracle::Q bound = total / min_eps;
    const auto limit = static_cast<std::uint64_t>(mpz_class(bound.get_num() / bound.get_den()).get_ui()) + 2;
    ASSERT_TRUE(cert.certified) << to_string(f);
    EXPECT_EQ(cert.threshold, oracle::last_violation(limit, holds)) << to_string(f) << " eps=" << to_string(Element(eps));
  }
}

TEST(Convergence, TwoSidedFormGivesTheSameThreshold) {
  const auto f = ClosedForm::constant(v({1, 2})) + ClosedForm::harmonic(v({1, 3}));
  const std::vector<Element> eps{v({frac(1, 10), frac(1, 10)}), v({frac(1, 7), 1})};
  const auto a = verify_convergence(cone(2), f, v({1, 2}), eps, 256);
  const auto b = verify_convergence_two_sided(cone(2), f, v({1, 2}), eps, 256);
  for (std::size_t i = 0; i < eps.size(); ++i) EXPECT_EQ(a[i].threshold, b[i].threshold);
  EXPECT_EQ(a[0].threshold, 30u);
}

TEST(LimitUniqueness, SameLimitPasses) {
  const auto s = ClosedForm::harmonic(v({1}));
  const auto r = check_limit_uniqueness(line(), s, v({0}), v({0}), {v({frac(1, 10)})}, 256);
  EXPECT_TRUE(r.passed);
}

TEST(LimitUniqueness, SecondCandidateIsRejectedWhereTheSequenceDropsBelowIt) {
  const auto s = ClosedForm::harmonic(v({1}));
  const auto r = check_limit_uniqueness(line(), s, v({0}), v({frac(1, 100)}), {v({frac(1, 10)})}, 256);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.index.has_value());
  EXPECT_EQ(*r.index, 101u);
}

TEST(LimitUniqueness, PlaneSequence) {
  const auto s = ClosedForm::harmonic(v({1, 2}));
  EXPECT_TRUE(check_limit_uniqueness(cone(2), s, Element::zero(2), Element::zero(2), {v({1, 1})}, 256).passed);
}

TEST(Sum, SplitThresholdBoundsDirectThreshold) {
  const auto certs = sum_convergence(line(), ClosedForm::harmonic(v({1})), ClosedForm::inverse_square(v({1})),
                                     {v({frac(1, 10)}), v({frac(1, 1000)})}, 256);
  for (const auto& c : certs) {
    EXPECT_TRUE(c.certified);
    EXPECT_EQ(c.eta, c.epsilon.scaled(frac(1, 2)));
    ASSERT_TRUE(c.direct_threshold.has_value());
    EXPECT_LE(*c.direct_threshold, c.split_threshold);
    EXPECT_EQ(c.split_threshold, std::max(c.first_threshold, c.second_threshold));
  }
  // 1/n + 1/n^2 < 1/10 first holds for all n > 10.
  EXPECT_EQ(*certs[0].direct_threshold, 10u);
}

TEST(Sum, ZeroPlusZero) {
  const auto z = ClosedForm::constant(Element::zero(2));
  for (const auto& c : sum_convergence(cone(2), z, z, {v({1, 1})}, 16)) {
    EXPECT_TRUE(c.certified);
    EXPECT_EQ(*c.direct_threshold, 0u);
  }
}

TEST(Sum, CrossedPlaneSequences) {
  const auto certs = sum_convergence(cone(2), ClosedForm::harmonic(v({1, 0})), ClosedForm::harmonic(v({0, 1})),
                                     {v({frac(1, 10), frac(1, 10)})}, 256);
  EXPECT_TRUE(certs.front().certified);
}

TEST(Sandwich, HarmonicBetweenZeroAndTwiceHarmonic) {
  const auto r = sandwich_convergence(line(), ClosedForm::harmonic(v({1})), ClosedForm::harmonic(v({2})), v({0}),
                                      {v({frac(1, 10)})}, 256);
  EXPECT_TRUE(r.certified());
  EXPECT_FALSE(r.precondition_violation.has_value());
  EXPECT_EQ(*r.entries[0].direct_threshold, 10u);
  EXPECT_EQ(r.entries[0].bound_threshold, 20u);
}

TEST(Sandwich, EqualSequencesGiveZeroThreshold) {
  const auto s = ClosedForm::harmonic(v({1}));
  const auto r = sandwich_convergence(line(), s, s, v({0}), {v({frac(1, 10)})}, 256);
  EXPECT_TRUE(r.certified());
  EXPECT_EQ(*r.entries[0].direct_threshold, 0u);
}

TEST(Sandwich, ShiftedLimit) {
  const auto upper = ClosedForm::constant(v({1})) + ClosedForm::harmonic(v({1}));
  const auto lower = ClosedForm::constant(v({1}));
  const auto r = sandwich_convergence(line(), lower, upper, v({1}), {v({frac(1, 10)})}, 256);
  EXPECT_TRUE(r.certified());
  EXPECT_EQ(*r.entries[0].direct_threshold, 10u);
}

TEST(Sandwich, ReportsBrokenPrecondition) {
  const auto r = sandwich_convergence(line(), ClosedForm::harmonic(v({2})), ClosedForm::harmonic(v({1})), v({0}),
                                      {v({frac(1, 10)})}, 256);
  EXPECT_FALSE(r.certified());
  EXPECT_TRUE(r.precondition_violation.has_value());
}

TEST(Regularity, DecreasingSequencesConvergeToTheirInfimum) {
  const std::vector<Sequence> seqs{ClosedForm::harmonic(v({1, 1})), ClosedForm::constant(v({3, 4})),
                                   ClosedForm::constant(v({0, 1})) + ClosedForm::harmonic(v({1, 1}))};
  const auto res = check_regularity(cone(2), seqs, {v({frac(1, 10), frac(1, 10)})}, 256);
  ASSERT_EQ(res.size(), 3u);
  for (const auto& r : res) EXPECT_EQ(r.status, RegularityEntry::Status::converged);
  EXPECT_EQ(*res[0].limit, Element::zero(2));
  EXPECT_EQ(*res[1].limit, v({3, 4}));
  EXPECT_EQ(*res[2].limit, v({0, 1}));
}

TEST(Regularity, LineHarmonic) {
  const auto res = check_regularity(line(), {ClosedForm::harmonic(v({1}))}, {v({frac(1, 10)})}, 256);
  EXPECT_EQ(res[0].status, RegularityEntry::Status::converged);
  EXPECT_EQ(*res[0].limit, v({0}));
}

TEST(Regularity, PrefixUsesTheCoordinateMeet) {
  std::vector<Element> terms;
  for (long n = 1; n <= 64; ++n) terms.push_back(v({frac(1, n), 1}));
  terms.resize(128, terms.back());
  const auto res = check_regularity(cone(2), {Sequence(terms)}, {v({frac(1, 2), frac(1, 2)})}, 128);
  EXPECT_EQ(res[0].status, RegularityEntry::Status::converged);
  EXPECT_EQ(*res[0].limit, v({frac(1, 64), 1}));
}

TEST(Regularity, IncreasingSequenceIsFlagged) {
  const auto up = ClosedForm::constant(v({1})) - ClosedForm::harmonic(v({1}));
  const auto res = check_regularity(line(), {up}, {v({frac(1, 10)})}, 64);
  EXPECT_EQ(res[0].status, RegularityEntry::Status::not_decreasing);
  EXPECT_EQ(res[0].violation, 1u);
}

TEST(Infimum, CoordinateMeet) {
  EXPECT_EQ(coordinate_meet({v({1, 5}), v({3, 2})}), v({1, 2}));
  const auto g = OrderedGroup::coordinate_cone(2);
  EXPECT_EQ(infimum(g, {v({1, 5}), v({3, 2})}, {v({1, 2})}), v({1, 2}));
  // Only (0, 0) is a lower bound among the candidates, so it is the greatest one.
  EXPECT_EQ(infimum(g, {v({1, 5}), v({3, 2})}, {v({0, 0})}), v({0, 0}));
  EXPECT_FALSE(infimum(g, {v({1, 5}), v({3, 2})}, {v({2, 2})}).has_value());
}
