#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mdr/cms.hpp"
#include "mdr/pmf.hpp"
#include "test_util.hpp"

using namespace mdr;
using testutil::make_doubling_pmf;

namespace {

// L=3 source bit carried only by the top shared codeword, once with the
// intermediate shared codewords declared as constants and once with them
// omitted entirely.  Both describe the same scheme.
JointPmf make_top_only_pmf3(bool declare_constants) {
  std::vector<VariableRole> roles = {VariableRole::source_role()};
  std::vector<int> alphabets = {2};
  if (declare_constants) {
    for (auto&& s : {SubsetId({1, 2}, 3), SubsetId({1, 3}, 3),
                     SubsetId({2, 3}, 3)}) {
      roles.push_back(VariableRole::shared_role(s));
      alphabets.push_back(1);
    }
  }
  roles.push_back(VariableRole::shared_role(SubsetId({1, 2, 3}, 3)));
  alphabets.push_back(2);
  // V123 = X: diagonal over the two binary axes.
  return JointPmf(3, roles, alphabets, {0.5, 0, 0, 0.5});
}

}  // namespace

TEST_CASE("AuxRateVector: base and shared slots") {
  AuxRateVector aux(3);
  CHECK(aux.channel_count() == 3);
  CHECK(aux.base(2) == 0.0);
  aux.set_base(2, 0.75);
  aux.set_shared(SubsetId({1, 3}, 3), 1.25);
  CHECK(aux.base(2) == 0.75);
  CHECK(aux.shared(SubsetId({1, 3}, 3)) == 1.25);
  CHECK(aux.shared(SubsetId({1, 2, 3}, 3)) == 0.0);
  CHECK(aux.by_mask().size() == 8);

  CHECK_THROWS_AS(aux.set_shared(SubsetId({2}, 3), 1.0), std::domain_error);
  CHECK_THROWS_AS(aux.shared(SubsetId({2}, 3)), std::domain_error);
  CHECK_THROWS_AS(aux.base(4), std::domain_error);
  CHECK_THROWS_AS(aux.set_base(0, 1.0), std::domain_error);
}

TEST_CASE("alpha_bits: doubling scheme values") {
  const JointPmf pmf = make_doubling_pmf();
  CHECK(alpha_bits(pmf, SubsetFamily(2)) == 0.0);
  CHECK(alpha_bits(pmf, SubsetFamily(2, {{1, 2}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(alpha_bits(pmf, SubsetFamily(2, {{1}, {1, 2}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(alpha_bits(pmf, SubsetFamily(2, {{2}, {1, 2}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(alpha_bits(pmf, SubsetFamily(2, {{1}, {2}, {1, 2}})) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("alpha_bits: rejects invalid families") {
  const JointPmf pmf = make_doubling_pmf();
  CHECK_THROWS_AS(alpha_bits(pmf, SubsetFamily(2, {{1}})), std::domain_error);
  CHECK_THROWS_AS(alpha_bits(pmf, SubsetFamily(3, {{1, 2, 3}})),
                  std::domain_error);
}

TEST_CASE("cms_constraints: doubling scheme constraint system") {
  const JointPmf pmf = make_doubling_pmf();
  const auto rows = cms_constraints(pmf);
  REQUIRE(rows.size() == 4);

  CHECK(rows[0].q == SubsetFamily(2, {{1, 2}}));
  CHECK(rows[0].shared_support == std::vector<SubsetId>{SubsetId({1, 2}, 2)});
  CHECK(rows[0].base_support.empty());
  CHECK(rows[0].bound_bits == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(rows[1].q == SubsetFamily(2, {{1}, {1, 2}}));
  CHECK(rows[1].base_support == std::vector<int>{1});
  CHECK(rows[1].bound_bits == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(rows[2].q == SubsetFamily(2, {{2}, {1, 2}}));
  CHECK(rows[2].base_support == std::vector<int>{2});
  CHECK(rows[2].bound_bits == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(rows[3].q == SubsetFamily(2, {{1}, {2}, {1, 2}}));
  CHECK(rows[3].shared_support == std::vector<SubsetId>{SubsetId({1, 2}, 2)});
  CHECK(rows[3].base_support == std::vector<int>{1, 2});
  CHECK(rows[3].bound_bits == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cms_constraints: constant codewords match omitted codewords") {
  // Declaring intermediate shared codewords with alphabet 1 must give the
  // same bounds as leaving them out of the pmf.
  const JointPmf with_constants = make_top_only_pmf3(true);
  const JointPmf without = make_top_only_pmf3(false);
  const auto rows_a = cms_constraints(with_constants);
  const auto rows_b = cms_constraints(without);
  REQUIRE(rows_a.size() == 18);
  REQUIRE(rows_b.size() == 18);
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    CHECK(rows_a[i].q == rows_b[i].q);
    CHECK(rows_a[i].bound_bits ==
          doctest::Approx(rows_b[i].bound_bits).epsilon(1e-12));
    // Every family contains the top set, and the top codeword carries the
    // whole source bit, so every bound is exactly one bit.
    CHECK(rows_a[i].bound_bits == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("description_rates: shared rates spread to their channels") {
  AuxRateVector aux(3);
  aux.set_shared(SubsetId({1, 3}, 3), 1.0);
  CHECK(description_rates(aux) == std::vector<double>{1.0, 0.0, 1.0});

  AuxRateVector zero(3);
  CHECK(description_rates(zero) == std::vector<double>{0.0, 0.0, 0.0});

  AuxRateVector mixed(2);
  mixed.set_base(1, 0.5);
  mixed.set_shared(SubsetId({1, 2}, 2), 0.25);
  const auto rates = description_rates(mixed);
  CHECK(rates[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(rates[1] == doctest::Approx(0.25).epsilon(1e-15));

  AuxRateVector neg(2);
  neg.set_base(1, -0.1);
  CHECK_THROWS_AS(description_rates(neg), std::domain_error);
}

TEST_CASE("expected_distortion: Hamming loss under the doubling scheme") {
  const JointPmf pmf = make_doubling_pmf();
  ReconstructionMap recon{SubsetId({1}, 2),
                          {0, 1},  // identity
                          {{0.0, 1.0}, {1.0, 0.0}}};
  CHECK(expected_distortion(pmf, recon) ==
        doctest::Approx(0.0).epsilon(1e-15));

  recon.map = {1, 0};  // always wrong
  CHECK(expected_distortion(pmf, recon) ==
        doctest::Approx(1.0).epsilon(1e-15));

  recon.distortion = {{0.0, 2.0}, {2.0, 0.0}};
  CHECK(expected_distortion(pmf, recon) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("rate_feasible: doubling scheme region boundary") {
  const JointPmf pmf = make_doubling_pmf();

  const auto at_corner = rate_feasible({1.0, 1.0}, pmf);
  CHECK(at_corner.feasible);
  REQUIRE(at_corner.witness.has_value());
  // The witness must reproduce the requested rates and satisfy every
  // constraint row.
  const auto witness_rates = description_rates(*at_corner.witness);
  CHECK(witness_rates[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(witness_rates[1] == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& row : cms_constraints(pmf)) {
    double lhs = 0.0;
    for (const auto& s : row.shared_support) lhs += at_corner.witness->shared(s);
    for (int l : row.base_support) lhs += at_corner.witness->base(l);
    CHECK(lhs >= row.bound_bits - 1e-7);
  }

  CHECK(rate_feasible({2.0, 2.0}, pmf).feasible);
  CHECK_FALSE(rate_feasible({1.0, 0.5}, pmf).feasible);
  CHECK_FALSE(rate_feasible({0.9, 1.0}, pmf).feasible);

  CHECK_THROWS_AS(rate_feasible({1.0}, pmf), std::domain_error);
  CHECK_THROWS_AS(rate_feasible({-0.5, 1.0}, pmf), std::domain_error);
}

TEST_CASE("rate_feasible: channel count cap") {
  // Five channels exceed the supported feasibility size.
  const JointPmf pmf(5,
                     {VariableRole::source_role(),
                      VariableRole::shared_role(SubsetId({1, 2, 3, 4, 5}, 5))},
                     {2, 2}, {0.5, 0, 0, 0.5});
  CHECK_THROWS_AS(rate_feasible({1, 1, 1, 1, 1}, pmf), std::domain_error);
}

TEST_CASE("zb_replica_bounds: doubling scheme evaluates exactly") {
  const auto zb = zb_replica_bounds(make_doubling_pmf());
  CHECK(zb.r1_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zb.r2_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zb.sum_bits == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zb_replica_bounds: requires two channels with all roles declared") {
  // Missing the F12 refinement layer.
  const JointPmf missing(2,
                         {VariableRole::source_role(),
                          VariableRole::shared_role(SubsetId({1, 2}, 2)),
                          VariableRole::layer_role(SubsetId({1}, 2)),
                          VariableRole::layer_role(SubsetId({2}, 2))},
                         {2, 1, 2, 2}, {0.5, 0, 0, 0, 0, 0, 0, 0.5});
  CHECK_THROWS_AS(zb_replica_bounds(missing), std::domain_error);
  CHECK_THROWS_AS(zb_replica_bounds(make_top_only_pmf3(true)),
                  std::domain_error);
}

TEST_CASE("zb_replica_bounds: sum bound equals alpha plus shared information") {
  // Identity on random full-role pmfs: the replica sum bound coincides with
  // alpha of the full family plus I(X; V12).
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 25; ++trial) {
    const JointPmf pmf = testutil::make_random_full_pmf2(rng);
    const auto zb = zb_replica_bounds(pmf);
    const double alpha_full =
        alpha_bits(pmf, SubsetFamily(2, {{1}, {2}, {1, 2}}));
    const int x = pmf.source_index();
    const int v = pmf.find(RoleKind::shared, SubsetId({1, 2}, 2));
    const std::vector<int> ix = {x}, iv = {v};
    const double mi_xv = pmf.entropy_bits(iv) -
                         conditional_entropy_bits(pmf, iv, ix);
    CHECK(zb.sum_bits == doctest::Approx(alpha_full + mi_xv).epsilon(1e-12));
  }
}
