#include <gtest/gtest.h>

#include "ordmet/cone_metric.hpp"
#include "oracles.hpp"

using namespace ordmet;
using oracle::frac;

namespace {

TopoStructure line() { return TopoStructure::strict_order(OrderedModule::coordinate_cone(1)); }
TopoStructure cone(std::size_t n) { return TopoStructure::interior_cone(OrderedModule::coordinate_cone(n)); }
Element v(std::initializer_list<Rational> c) { return Element(c); }

std::vector<Point> pts(std::initializer_list<long> xs) {
  std::vector<Point> out;
  for (long x : xs) out.push_back(v({x}));
  return out;
}

}  // namespace

TEST(MetricLaws, AbsoluteAndCoordinatewiseMetricsPass) {
  EXPECT_TRUE(check_metric_laws(MetricSpace::continuum(1, MetricKind::absolute, line()), {}).all_passed());
  EXPECT_TRUE(check_metric_laws(MetricSpace::continuum(2, MetricKind::coordinatewise, cone(2)), {}).all_passed());
  EXPECT_TRUE(check_metric_laws(MetricSpace::grid(0, 1, frac(1, 8), line()), {}).all_passed());
}

TEST(MetricLaws, AsymmetricTableFailsD2WithThePair) {
  const auto m = MetricSpace::with_table(pts({0, 1, 2}), {{v({0}), v({1}), v({2})}, {v({1}), v({0}), v({1})},
                                                          {v({2}), v({1}), v({0})}},
                                         line());
  EXPECT_TRUE(check_metric_laws(m, {}).all_passed());
  const auto bad = m.with_entry(0, 1, v({3}));
  const auto rep = check_metric_laws(bad, {});
  EXPECT_TRUE(rep.passed("d1"));
  EXPECT_FALSE(rep.passed("d2"));
  EXPECT_EQ(rep.find("d2")->witness, "x=0 y=1");
}

TEST(MetricLaws, TriangleFailureIsReported) {
  const auto m = MetricSpace::with_table(pts({0, 1, 2}), {{v({0}), v({1}), v({5})}, {v({1}), v({0}), v({1})},
                                                          {v({5}), v({1}), v({0})}},
                                         line());
  EXPECT_FALSE(check_metric_laws(m, {}).passed("d3"));
}

TEST(MetricSpace, TableFollowsSortedPoints) {
  const auto m = MetricSpace::with_table(pts({2, 0}), {{v({0}), v({7})}, {v({7}), v({0})}}, line());
  EXPECT_EQ(m.points(), pts({0, 2}));
  EXPECT_EQ(m.distance(v({0}), v({2})), v({7}));
  EXPECT_THROW(MetricSpace::with_table(pts({1, 1}), {{v({0}), v({1})}, {v({1}), v({0})}}, line()),
               std::invalid_argument);
  EXPECT_THROW(m.distance(v({0}), v({1})), DomainError);
}

TEST(MetricSpace, ConstancyScaleIsTheLeastPositiveCoordinate) {
  const auto m = MetricSpace::finite({v({0, 0}), v({1, frac(1, 3)}), v({4, 4})}, MetricKind::coordinatewise, cone(2));
  EXPECT_EQ(m.constancy_scale(), v({frac(1, 3), frac(1, 3)}));
  EXPECT_FALSE(MetricSpace::continuum(1, MetricKind::absolute, line()).constancy_scale().has_value());
}

TEST(PointConvergence, PlaneHarmonicToOrigin) {
  const auto m = MetricSpace::continuum(2, MetricKind::coordinatewise, cone(2));
  const auto c = point_convergence(m, ClosedForm::harmonic(v({1, 1})), Element::zero(2),
                                   {v({frac(1, 10), frac(1, 10)})}, 256);
  EXPECT_TRUE(c[0].certified);
  EXPECT_EQ(c[0].threshold, 10u);
}

TEST(PointConvergence, ApproachFromBelow) {
  const auto m = MetricSpace::continuum(1, MetricKind::absolute, line());
  const auto f = ClosedForm::constant(v({1})) - ClosedForm::harmonic(v({1}));
  const auto c = point_convergence(m, f, v({1}), {v({frac(1, 10)})}, 256);
  EXPECT_TRUE(c[0].certified);
  EXPECT_EQ(c[0].threshold, 10u);
}

TEST(PointConvergence, ConstantSequence) {
  const auto m = MetricSpace::continuum(2, MetricKind::coordinatewise, cone(2));
  const auto c = point_convergence(m, ClosedForm::constant(v({3, 1})), v({3, 1}), {v({1, 1})}, 64);
  EXPECT_TRUE(c[0].certified);
  EXPECT_EQ(c[0].threshold, 0u);
}

TEST(PointConvergence, AlternatingPointsFail) {
  const auto m = MetricSpace::finite(pts({0, 1}), MetricKind::absolute, line());
  std::vector<Element> terms;
  for (int n = 1; n <= 40; ++n) terms.push_back(v({n % 2}));
  for (const auto& target : pts({0, 1})) {
    const auto c = point_convergence(m, terms, target, {v({frac(1, 2)})}, 40).front();
    EXPECT_FALSE(c.certified);
    ASSERT_TRUE(c.violation.has_value());
    EXPECT_GE(*c.violation, 39u);
    EXPECT_LE(*c.violation, 40u);
  }
}

TEST(Cauchy, GeometricPartialSumsUseTheAnalyticTail) {
  const auto m = MetricSpace::continuum(1, MetricKind::absolute, line());
  // x_n = 1 - 2^-n, |x_n - x_m| <= 2^-(N+1) for n, m > N.
  const auto f = ClosedForm::constant(v({1})) - ClosedForm::geometric(frac(1, 2), v({1}));
  const auto c = cauchy_check(m, f, {v({frac(1, 1000)})}, 256).front();
  EXPECT_TRUE(c.certified);
  EXPECT_TRUE(c.analytic);
  // smallest N with 2^-(N+1) < 1/1000 is N = 9.
  EXPECT_EQ(c.threshold, 9u);
}

TEST(Cauchy, ConstantAndOscillating) {
  const auto m = MetricSpace::finite(pts({0, 3}), MetricKind::absolute, line());
  const auto constant = cauchy_check(m, std::vector<Element>(10, v({3})), {v({1})}, 10).front();
  EXPECT_TRUE(constant.certified);
  EXPECT_EQ(constant.threshold, 0u);
  std::vector<Element> osc;
  for (int n = 1; n <= 30; ++n) osc.push_back(v({3 * (n % 2)}));
  const auto bad = cauchy_check(m, osc, {v({2})}, 30).front();
  EXPECT_FALSE(bad.certified);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_NE(osc[bad.witness->first - 1], osc[bad.witness->second - 1]);
  // A gap of 3 is below eps = 4, so the same walk is Cauchy at that scale.
  EXPECT_TRUE(cauchy_check(m, osc, {v({4})}, 30).front().certified);
}

TEST(Hausdorff, WorkedLineExample) {
  const auto m = MetricSpace::continuum(1, MetricKind::absolute, line());
  EXPECT_EQ(hausdorff(m, pts({1, 2}), pts({4, 5})), v({3}));
  EXPECT_EQ(directed_hausdorff(m, pts({1, 2}), pts({4, 5})), v({3}));
  EXPECT_EQ(point_set_distance(m, v({2}), pts({4, 5})), v({2}));
  EXPECT_EQ(hausdorff(m, pts({1, 2}), pts({1, 2})), v({0}));
}

TEST(Hausdorff, PlaneSingletonsReduceToTheDistance) {
  const auto m = MetricSpace::continuum(2, MetricKind::coordinatewise, cone(2));
  EXPECT_EQ(hausdorff(m, {Element::zero(2)}, {v({1, 2})}), v({1, 2}));
}

TEST(Hausdorff, IncomparableCandidatesRaiseOrderError) {
  const auto m = MetricSpace::continuum(2, MetricKind::coordinatewise, cone(2));
  try {
    hausdorff(m, {Element::zero(2)}, {v({1, 2}), v({2, 1})});
    FAIL() << "expected OrderError";
  } catch (const OrderError& e) {
    EXPECT_NE(std::string(e.what()).find("Hausdorff undefined"), std::string::npos);
    EXPECT_EQ(std::set<Element>({e.first(), e.second()}), std::set<Element>({v({1, 2}), v({2, 1})}));
  }
}

TEST(Hausdorff, MatchesDoubleLoopOracleOnRandomLineSets) {
  const auto m = MetricSpace::continuum(1, MetricKind::absolute, line());
  oracle::Gen gen(404);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<oracle::Q> a(1 + gen.integer(0, 5)), b(1 + gen.integer(0, 5));
    std::vector<Point> pa, pb;
    for (auto& x : a) pa.push_back(v({x = gen.rational(10, 6)}));
    for (auto& x : b) pb.push_back(v({x = gen.rational(10, 6)}));
    const auto h = hausdorff(m, pa, pb);
    EXPECT_EQ(h, v({oracle::hausdorff_line(a, b)}));
    EXPECT_EQ(h, hausdorff(m, pb, pa));
    EXPECT_EQ(directed_hausdorff(m, pa, pb, kernels::Exec::serial),
              directed_hausdorff(m, pa, pb, kernels::Exec::parallel));
  }
}
