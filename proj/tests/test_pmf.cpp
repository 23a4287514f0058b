#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "mdr/pmf.hpp"
#include "test_util.hpp"

using namespace mdr;
using testutil::make_doubling_pmf;

namespace {

JointPmf make_single_source(std::vector<double> probs) {
  const int alphabet = static_cast<int>(probs.size());
  return JointPmf(2, {VariableRole::source_role()}, {alphabet},
                  std::move(probs));
}

}  // namespace

TEST_CASE("VariableRole: names and construction guards") {
  CHECK(VariableRole::source_role().name() == "X");
  CHECK(VariableRole::shared_role(SubsetId({1, 3}, 3)).name() == "V13");
  CHECK(VariableRole::layer_role(SubsetId({2}, 3)).name() == "U2");
  CHECK(VariableRole::layer_role(SubsetId({1, 2}, 2)).name() == "U12");
  CHECK_THROWS_AS(VariableRole::shared_role(SubsetId({2}, 3)),
                  std::domain_error);
}

TEST_CASE("JointPmf: doubling source entropies") {
  const JointPmf pmf = make_doubling_pmf();
  CHECK(pmf.channel_count() == 2);
  CHECK(pmf.variable_count() == 5);
  CHECK(pmf.source_index() == 0);

  const int x = pmf.source_index();
  const int u1 = pmf.find(RoleKind::layer, SubsetId({1}, 2));
  const int u2 = pmf.find(RoleKind::layer, SubsetId({2}, 2));
  const int v12 = pmf.find(RoleKind::shared, SubsetId({1, 2}, 2));
  REQUIRE(u1 >= 0);
  REQUIRE(u2 >= 0);
  REQUIRE(v12 >= 0);

  const std::vector<int> just_x = {x};
  const std::vector<int> just_u1 = {u1};
  const std::vector<int> just_v = {v12};
  const std::vector<int> both = {u1, u2};
  CHECK(pmf.entropy_bits(just_x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pmf.entropy_bits(just_v) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pmf.entropy_bits(both) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(conditional_entropy_bits(pmf, just_x, just_u1) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(conditional_entropy_bits(pmf, just_u1, just_v) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("JointPmf: biased single variable entropy") {
  const JointPmf pmf = make_single_source({0.25, 0.75});
  const std::vector<int> x = {0};
  // -0.25 log2 0.25 - 0.75 log2 0.75
  CHECK(pmf.entropy_bits(x) ==
        doctest::Approx(0.811278124459133).epsilon(1e-13));
}

TEST_CASE("JointPmf: independent pair factorizes") {
  // X and U1 independent uniform bits.
  const JointPmf pmf(2,
                     {VariableRole::source_role(),
                      VariableRole::layer_role(SubsetId({1}, 2))},
                     {2, 2}, {0.25, 0.25, 0.25, 0.25});
  const std::vector<int> x = {0}, u = {1}, xu = {0, 1};
  CHECK(pmf.entropy_bits(xu) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(conditional_entropy_bits(pmf, x, u) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("JointPmf: constructor validation") {
  const auto x = VariableRole::source_role();
  const auto u1 = VariableRole::layer_role(SubsetId({1}, 2));

  // No source.
  CHECK_THROWS_AS(JointPmf(2, {u1}, {2}, {0.5, 0.5}), std::domain_error);
  // Two sources.
  CHECK_THROWS_AS(JointPmf(2, {x, x}, {2, 2}, {0.25, 0.25, 0.25, 0.25}),
                  std::domain_error);
  // Duplicate codeword role.
  CHECK_THROWS_AS(JointPmf(2, {x, u1, u1}, {2, 2, 2},
                           std::vector<double>(8, 0.125)),
                  std::domain_error);
  // Probabilities must sum to one.
  CHECK_THROWS_AS(JointPmf(2, {x}, {2}, {0.5, 0.6}), std::domain_error);
  // Negative entries are rejected.
  CHECK_THROWS_AS(JointPmf(2, {x}, {2}, {1.5, -0.5}), std::domain_error);
  // Table size must match the alphabet product.
  CHECK_THROWS_AS(JointPmf(2, {x}, {2}, {0.5, 0.25, 0.25}),
                  std::domain_error);
  // Alphabet sizes must be positive.
  CHECK_THROWS_AS(JointPmf(2, {x, u1}, {2, 0}, {0.5, 0.5}),
                  std::domain_error);
  // Role subset over a different channel count.
  CHECK_THROWS_AS(JointPmf(3, {x, u1}, {2, 2}, {0.25, 0.25, 0.25, 0.25}),
                  std::domain_error);
}

TEST_CASE("JointPmf: find and has") {
  const JointPmf pmf = make_doubling_pmf();
  CHECK(pmf.find(RoleKind::shared, SubsetId({1, 2}, 2)) == 1);
  CHECK(pmf.find(RoleKind::layer, SubsetId({2}, 2)) == 3);
  CHECK(pmf.find(RoleKind::layer, SubsetId({1, 2}, 2)) == 4);
  CHECK(pmf.has(RoleKind::layer, SubsetId({1}, 2)));
  // A shared role was declared for {1,2}, not a layer for {1} over 3 channels;
  // asking for a role that was never declared yields -1.
  const JointPmf small(2, {VariableRole::source_role()}, {2}, {0.5, 0.5});
  CHECK(small.find(RoleKind::layer, SubsetId({1}, 2)) == -1);
  CHECK_FALSE(small.has(RoleKind::shared, SubsetId({1, 2}, 2)));
}

TEST_CASE("JointPmf: entropy index validation and overlap collapse") {
  const JointPmf pmf = make_doubling_pmf();
  const std::vector<int> bad = {7};
  CHECK_THROWS_AS(pmf.entropy_bits(bad), std::domain_error);
  // H(A|A) = 0 because shared indices collapse.
  const std::vector<int> x = {0};
  CHECK(conditional_entropy_bits(pmf, x, x) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // Duplicates within one set are ignored.
  const std::vector<int> xx = {0, 0};
  CHECK(pmf.entropy_bits(xx) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("JointPmf: entropies match a direct marginalization oracle") {
  // Random 3-variable pmf; compare entropy_bits against explicit sums.
  std::mt19937_64 rng(20250817);
  const std::vector<VariableRole> roles = {
      VariableRole::source_role(),
      VariableRole::shared_role(SubsetId({1, 2}, 2)),
      VariableRole::layer_role(SubsetId({1}, 2)),
  };
  const std::vector<int> alphabets = {2, 3, 2};
  const auto probs = testutil::random_probs(rng, alphabets);
  const JointPmf pmf(2, roles, alphabets, probs);

  // probs is row-major with the last axis fastest: index = (x*3 + v)*2 + u.
  auto cell = [&](int x, int v, int u) { return probs[(x * 3 + v) * 2 + u]; };
  auto h = [](const std::map<int, double>& marg) {
    double bits = 0.0;
    for (const auto& [_, p] : marg)
      if (p > 0) bits -= p * std::log2(p);
    return bits;
  };

  std::map<int, double> mx, mv, mxu, mvu, mall;
  for (int x = 0; x < 2; ++x)
    for (int v = 0; v < 3; ++v)
      for (int u = 0; u < 2; ++u) {
        const double p = cell(x, v, u);
        mx[x] += p;
        mv[v] += p;
        mxu[x * 2 + u] += p;
        mvu[v * 2 + u] += p;
        mall[(x * 3 + v) * 2 + u] += p;
      }

  const std::vector<int> ix = {0}, iv = {1}, ixu = {0, 2}, ivu = {1, 2},
                         iall = {0, 1, 2};
  CHECK(pmf.entropy_bits(ix) == doctest::Approx(h(mx)).epsilon(1e-12));
  CHECK(pmf.entropy_bits(iv) == doctest::Approx(h(mv)).epsilon(1e-12));
  CHECK(pmf.entropy_bits(ixu) == doctest::Approx(h(mxu)).epsilon(1e-12));
  CHECK(pmf.entropy_bits(ivu) == doctest::Approx(h(mvu)).epsilon(1e-12));
  CHECK(pmf.entropy_bits(iall) == doctest::Approx(h(mall)).epsilon(1e-12));
  CHECK(conditional_entropy_bits(pmf, ix, ivu) ==
        doctest::Approx(h(mall) - h(mvu)).epsilon(1e-12));
}
