#include <gtest/gtest.h>

#include <random>

#include "tarski/doubling.hpp"
#include "test_util.hpp"

namespace tarski {
namespace {

std::vector<Element> ball_of(const GroupSpec& spec, std::size_t r) {
  return enumerate_ball(spec, GeneratingSet::standard(spec), r).vertices;
}

Element z(std::int64_t x) { return {{x}}; }
Element z2(std::int64_t x, std::int64_t y) { return {{x, y}}; }

TranslatingSets line_sets() { return {{z(0), z(1)}, {z(0), z(1)}}; }

TranslatingSets free_sets(const GroupSpec& F) {
  if (F.parameter() == 2) return {{identity(F), generator(F, 0)}, {identity(F), generator(F, 1)}};
  return {{identity(F), generator(F, 0)}, {identity(F), generator(F, 1), generator(F, 2)}};
}

TEST(CheckDomain, LineViolator) {
  const auto Z = GroupSpec::free_abelian(1);
  const auto D = ball_of(Z, 2);
  const auto v = check_domain(Z, line_sets(), D);
  ASSERT_TRUE(std::holds_alternative<Violator>(v));
  const auto& viol = std::get<Violator>(v);
  EXPECT_EQ(viol.a1, (ElementSet{z(0), z(1)}));
  EXPECT_EQ(viol.a2, (ElementSet{z(0), z(1)}));
  EXPECT_EQ(viol.union_size, 3u);
  // the oracle's minimum violator has the same total size
  const auto oracle = brute_force_check(Z, line_sets(), D);
  ASSERT_TRUE(oracle);
  EXPECT_EQ(oracle->a1.size() + oracle->a2.size(), viol.a1.size() + viol.a2.size());
  EXPECT_LT(oracle->union_size, oracle->a1.size() + oracle->a2.size());
}

TEST(CheckDomain, TrivialTranslatorsViolate) {
  for (const auto& spec : testing::all_models()) {
    const TranslatingSets ts{{identity(spec)}, {identity(spec)}};
    const std::vector<Element> D{identity(spec)};
    const auto v = check_domain(spec, ts, D);
    ASSERT_TRUE(std::holds_alternative<Violator>(v));
    EXPECT_EQ(std::get<Violator>(v).a1.size(), 1u);
    EXPECT_EQ(std::get<Violator>(v).a2.size(), 1u);
    EXPECT_EQ(std::get<Violator>(v).union_size, 1u);
    const auto oracle = brute_force_check(spec, ts, D);
    ASSERT_TRUE(oracle);
    EXPECT_EQ(oracle->a1.size() + oracle->a2.size(), 2u);
  }
}

TEST(CheckDomain, FreeGroupCertificate) {
  const auto F = GroupSpec::free(2);
  const auto D = ball_of(F, 4);
  const auto v = check_domain(F, free_sets(F), D);
  ASSERT_TRUE(is_certificate(v));
  EXPECT_EQ(certificate_problem(F, free_sets(F), D, std::get<Certificate>(v)), "");
}

TEST(CheckDomain, FreeGroupCertificateEveryRadius) {
  const auto F = GroupSpec::free(2);
  for (std::size_t r = 0; r <= 6; ++r) {
    const auto D = ball_of(F, r);
    const auto v = check_domain(F, free_sets(F), D);
    ASSERT_TRUE(is_certificate(v)) << "radius " << r;
    ASSERT_EQ(certificate_problem(F, free_sets(F), D, std::get<Certificate>(v)), "");
  }
}

TEST(CheckDomain, EmptyDomainIsAnError) {
  const auto Z = GroupSpec::free_abelian(1);
  EXPECT_THROW(check_domain(Z, line_sets(), std::vector<Element>{}), PreconditionError);
}

TEST(CertificateProblem, DetectsTampering) {
  const auto F = GroupSpec::free(2);
  const auto D = ball_of(F, 2);
  auto cert = std::get<Certificate>(check_domain(F, free_sets(F), D));
  auto collide = cert;
  collide.phi2[0].second = collide.phi1[0].second;  // shared image
  EXPECT_NE(certificate_problem(F, free_sets(F), D, collide), "");
  auto outside = cert;
  outside.phi1[0].second = parse_element(F, "b b b b b");
  EXPECT_NE(certificate_problem(F, free_sets(F), D, outside), "");
  auto partial = cert;
  partial.phi1.pop_back();
  EXPECT_NE(certificate_problem(F, free_sets(F), D, partial), "");
}

TEST(BruteForce, Examples) {
  const auto Z = GroupSpec::free_abelian(1);
  const std::vector<Element> D{z(0), z(1), z(2)};
  const auto v = brute_force_check(Z, line_sets(), D);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->a1, (ElementSet{z(0), z(1)}));
  EXPECT_EQ(v->a2, (ElementSet{z(0), z(1)}));
  EXPECT_EQ(v->union_size, 3u);

  const auto F = GroupSpec::free(2);
  EXPECT_FALSE(brute_force_check(F, free_sets(F), ball_of(F, 1)));
}

TEST(BruteForce, DomainTooLarge) {
  const auto Z = GroupSpec::free_abelian(1);
  EXPECT_THROW(brute_force_check(Z, line_sets(), ball_of(Z, 8)), BudgetError);
}

TEST(TranslatingSets, Invariants) {
  EXPECT_THROW(TranslatingSets({z(0), z(0)}, {z(1)}), PreconditionError);
  EXPECT_THROW(TranslatingSets({}, {z(1)}), PreconditionError);
}

TEST(MakeViolator, RejectsNonViolators) {
  const auto Z = GroupSpec::free_abelian(1);
  EXPECT_THROW(make_violator(Z, line_sets(), {z(0)}, {z(5)}), PreconditionError);
}

// Random instances: random translating sets from a small ball, random
// domains of size <= 8. The matching verdict and the exhaustive oracle must
// agree on whether a violator exists, and every verdict must re-verify.
TEST(Properties, MatchingAgreesWithBruteForce) {
  std::mt19937_64 rng(2024);
  for (const auto& spec : {GroupSpec::free(2), GroupSpec::free_abelian(1),
                           GroupSpec::free_abelian(2), GroupSpec::cyclic(6)}) {
    const auto pool = ball_of(spec, 2);
    const auto big = ball_of(spec, 3);
    for (int trial = 0; trial < 60; ++trial) {
      auto pick = [&](std::size_t k) {
        std::vector<Element> p = pool;
        std::shuffle(p.begin(), p.end(), rng);
        p.resize(std::min(k, p.size()));
        return p;
      };
      std::uniform_int_distribution<std::size_t> k1(1, 2), k2(1, 3), kd(1, 8);
      const TranslatingSets ts{pick(k1(rng)), pick(k2(rng))};
      std::vector<Element> D = big;
      std::shuffle(D.begin(), D.end(), rng);
      D.resize(std::min(kd(rng), D.size()));

      const auto v = check_domain(spec, ts, D);
      const auto oracle = brute_force_check(spec, ts, D);
      ASSERT_EQ(!is_certificate(v), oracle.has_value()) << spec.to_string();
      if (const auto* c = std::get_if<Certificate>(&v)) {
        ASSERT_EQ(certificate_problem(spec, ts, D, *c), "");
      } else {
        const auto& viol = std::get<Violator>(v);
        ASSERT_LT(doubling_union_size(spec, ts, viol.a1, viol.a2), viol.a1.size() + viol.a2.size());
        // the oracle's violator is minimum, so never larger than the greedy one
        ASSERT_LE(oracle->a1.size() + oracle->a2.size(), viol.a1.size() + viol.a2.size());
        // monotone: any larger domain still has a violator
        std::vector<Element> bigger = D;
        bigger.insert(bigger.end(), pool.begin(), pool.end());
        ASSERT_FALSE(is_certificate(check_domain(spec, ts, bigger)));
      }
    }
  }
}

TEST(MinimalViolatingRadius, Line) {
  const auto Z = GroupSpec::free_abelian(1);
  const auto r = minimal_violating_radius(Z, GeneratingSet::standard(Z), line_sets(), 4);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->radius, 1u);
  // brute force at radius 1 agrees that a violator exists
  EXPECT_TRUE(brute_force_check(Z, line_sets(), ball_of(Z, 1)));
  EXPECT_FALSE(brute_force_check(Z, line_sets(), ball_of(Z, 0)));
}

TEST(MinimalViolatingRadius, FreeRankThreeHasNone) {
  const auto F = GroupSpec::free(3);
  EXPECT_FALSE(minimal_violating_radius(F, GeneratingSet::standard(F), free_sets(F), 4));
}

TEST(MinimalViolatingRadius, PlaneWithFiveTranslators) {
  const auto Z2 = GroupSpec::free_abelian(2);
  const TranslatingSets ts{{z2(0, 0), z2(1, 0)}, {z2(0, 0), z2(0, 1), z2(1, 1)}};
  const auto r = minimal_violating_radius(Z2, GeneratingSet::standard(Z2), ts, 6);
  ASSERT_TRUE(r);
  EXPECT_LE(r->radius, 6u);
  // the 3x3 box recount: A1 S1 u A2 S2 fills the 4x4 box
  ElementSet box;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) box.insert(z2(x, y));
  EXPECT_EQ(doubling_union_size(Z2, ts, box, box), 16u);
  EXPECT_LT(16u, box.size() * 2);
}

}  // namespace
}  // namespace tarski
