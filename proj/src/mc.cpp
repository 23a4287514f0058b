#include "mdr/mc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mdr/gaussian.hpp"

namespace mdr {

namespace {

// Below this noise variance for W3 the codewords V13 and U1 coincide and V13
// is dropped from mutual-information index sets to keep blocks nonsingular.
constexpr double kDegenerateNoise = 1e-12;

struct Decoder {
  std::string name;
  std::vector<int> obs;       // indices into the per-sample observation vector
  Eigen::VectorXd coeffs;
  double analytic;
  double sum_e2 = 0.0;
  double sum_e4 = 0.0;
};

DistortionCheck finalize(const Decoder& dec, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  const double emp = dec.sum_e2 / nd;
  const double var = std::max(0.0, (dec.sum_e4 / nd - emp * emp) * nd / (nd - 1.0));
  const double se = std::sqrt(var / nd);
  const bool pass = std::abs(emp - dec.analytic) <= kStderrFactor * se;
  return {dec.name, emp, se, dec.analytic, pass};
}

}  // namespace

double NormalSampler::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double a = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double b = static_cast<double>(engine_() >> 11) * 0x1.0p-53;          // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(a));
  const double t = 2.0 * std::numbers::pi * b;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

SimReport simulate(const SimConfig& config) {
  if (config.n < kMinSamples) {
    throw std::domain_error("sample count must be at least " + std::to_string(kMinSamples));
  }
  SimReport report{config.n, config.seed, {}, true};
  NormalSampler normal(config.seed);

  if (std::holds_alternative<TestChannelSpec3>(config.spec)) {
    const auto& spec = std::get<TestChannelSpec3>(config.spec);
    const Eigen::MatrixXd cov = channel_covariance(spec);
    using namespace cov3;
    // Per-sample observation vector: (u1, u2, v13); estimator weights come
    // from the exact covariance.
    auto make = [&](std::string name, std::vector<int> cov_idx, std::vector<int> obs) {
      const auto sol = mmse_solution(cov, kX, cov_idx);
      return Decoder{std::move(name), std::move(obs), sol.coeffs, sol.variance};
    };
    std::vector<Decoder> decoders;
    decoders.push_back(make("1", {kU1}, {0}));
    decoders.push_back(make("2", {kU2}, {1}));
    decoders.push_back(make("3", {kV13}, {2}));
    decoders.push_back(make("12", {kU1, kU2}, {0, 1}));
    decoders.push_back(make("23", {kU2, kV13}, {1, 2}));

    const double s1 = std::sqrt(spec.sigma1t_sq);
    const double s2 = std::sqrt(spec.sigma2t_sq);
    const double s3 = std::sqrt(spec.sigma3t_sq);
    const double c = spec.rho12;
    const double cc = std::sqrt(1.0 - c * c);
    double obs[3];
    for (std::uint64_t it = 0; it < config.n; ++it) {
      const double x = normal();
      const double z1 = normal();
      const double z2 = normal();
      const double z3 = normal();
      const double w1 = s1 * z1;
      const double w2 = s2 * (c * z1 + cc * z2);
      const double w3 = s3 * z3;
      obs[0] = x + w1;
      obs[1] = x + w2;
      obs[2] = x + w1 + w3;
      for (auto& dec : decoders) {
        double e = x;
        for (std::size_t k = 0; k < dec.obs.size(); ++k) {
          e -= dec.coeffs(static_cast<Eigen::Index>(k)) * obs[dec.obs[k]];
        }
        const double e2 = e * e;
        dec.sum_e2 += e2;
        dec.sum_e4 += e2 * e2;
      }
    }
    for (const auto& dec : decoders) {
      report.distortions.push_back(finalize(dec, config.n));
      report.pass = report.pass && report.distortions.back().pass;
    }
    return report;
  }

  const auto& spec = std::get<TwoDescChannelSpec>(config.spec);
  if (!(spec.d1 > 0.0 && spec.d1 < 1.0 && spec.d2 > 0.0 && spec.d2 < 1.0)) {
    throw std::domain_error("side distortions must lie in (0, 1)");
  }
  if (!(std::abs(spec.rho) < 1.0)) {
    throw std::domain_error("noise correlation must satisfy |rho| < 1");
  }
  const double v1 = spec.d1 / (1.0 - spec.d1);
  const double v2 = spec.d2 / (1.0 - spec.d2);
  Eigen::Matrix3d cov;  // (X, U1, U2)
  const double cross = spec.rho * std::sqrt(v1 * v2);
  cov << 1.0, 1.0, 1.0,
         1.0, 1.0 + v1, 1.0 + cross,
         1.0, 1.0 + cross, 1.0 + v2;
  auto make = [&](std::string name, std::vector<int> cov_idx, std::vector<int> obs) {
    const auto sol = mmse_solution(cov, 0, cov_idx);
    return Decoder{std::move(name), std::move(obs), sol.coeffs, sol.variance};
  };
  std::vector<Decoder> decoders;
  decoders.push_back(make("1", {1}, {0}));
  decoders.push_back(make("2", {2}, {1}));
  decoders.push_back(make("12", {1, 2}, {0, 1}));

  const double s1 = std::sqrt(v1);
  const double s2 = std::sqrt(v2);
  const double c = spec.rho;
  const double cc = std::sqrt(1.0 - c * c);
  double obs[2];
  for (std::uint64_t it = 0; it < config.n; ++it) {
    const double x = normal();
    const double z1 = normal();
    const double z2 = normal();
    obs[0] = x + s1 * z1;
    obs[1] = x + s2 * (c * z1 + cc * z2);
    for (auto& dec : decoders) {
      double e = x;
      for (std::size_t k = 0; k < dec.obs.size(); ++k) {
        e -= dec.coeffs(static_cast<Eigen::Index>(k)) * obs[dec.obs[k]];
      }
      const double e2 = e * e;
      dec.sum_e2 += e2;
      dec.sum_e4 += e2 * e2;
    }
  }
  for (const auto& dec : decoders) {
    report.distortions.push_back(finalize(dec, config.n));
    report.pass = report.pass && report.distortions.back().pass;
  }
  return report;
}

std::vector<RateBoundCheck> validate_rate_bounds(double d1, double d2, double d3,
                                                 double d12) {
  const TestChannelSpec3 spec = test_channels(d1, d2, d3, d12);
  const Eigen::MatrixXd cov = channel_covariance(spec);
  using namespace cov3;
  const bool v13_is_u1 = spec.sigma3t_sq < kDegenerateNoise;

  auto mi = [&](std::vector<int> a, std::vector<int> b, std::vector<int> c = {}) {
    return gaussian_mi_bits(cov, a, b, c);
  };
  // V13 = U1 + W3; when W3 degenerates the pair (U1, V13) is linearly
  // dependent and V13 is dropped wherever U1 already appears.
  const std::vector<int> u1_v13 = v13_is_u1 ? std::vector<int>{kU1}
                                            : std::vector<int>{kU1, kV13};
  std::vector<int> x_u1_v13 = {kX};
  x_u1_v13.insert(x_u1_v13.end(), u1_v13.begin(), u1_v13.end());

  const double a1 = -0.5 * std::log2(d1);
  const double a2 = -0.5 * std::log2(d2);
  const double a3 = -0.5 * std::log2(d3);
  const double star = d23_star(d1, d2, d3, d12);
  const double excess23 = delta_excess_bits(d2, d3, star);
  const double excess12 = delta_excess_bits(d1, d2, d12);

  std::vector<RateBoundCheck> out;
  auto push = [&](std::string name, double closed, double composed, double tol) {
    const double diff = std::abs(closed - composed);
    out.push_back({std::move(name), closed, composed, diff, diff <= tol});
  };

  push("r13", a3, mi({kX}, {kV13}), kRateBoundTol);
  push("r2", a2, mi({kX}, {kU2}), kRateBoundTol);
  push("desc1", a1, mi({kX}, u1_v13), kRateBoundTol);
  push("pair23", a2 + a3 + excess23,
       mi({kX}, {kV13}) + mi({kX}, {kU2}) + mi({kV13}, {kU2}, {kX}), kRateBoundTol);
  push("total", a1 + a2 + excess12,
       mi({kX}, u1_v13) + mi({kU2}, x_u1_v13), kRateBoundTol);

  // The expansion steps behind the total bound: the shared codeword adds
  // nothing about X beyond U1; conditioning on X reduces the codeword cross
  // information to the noises; W3 is independent of (W1, W2).
  push("identity:markov_v13", mi({kX}, u1_v13), mi({kX}, {kU1}), kMiIdentityTol);
  if (v13_is_u1) {
    push("identity:noise_reduction", mi({kU2}, u1_v13, {kX}), mi({kW2}, {kW1}),
         kMiIdentityTol);
    push("identity:w3_independence", mi({kW2}, {kW1}), mi({kW2}, {kW1}), kMiIdentityTol);
  } else {
    push("identity:noise_reduction", mi({kU2}, u1_v13, {kX}), mi({kW2}, {kW1, kW13}),
         kMiIdentityTol);
    push("identity:w3_independence", mi({kW2}, {kW1, kW13}), mi({kW2}, {kW1}),
         kMiIdentityTol);
  }
  return out;
}

}  // namespace mdr
