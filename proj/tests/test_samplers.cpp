#include <cmath>
#include <numbers>

#include "bettitest/error.hpp"
#include "bettitest/samplers.hpp"
#include "doctest.h"

using namespace bettitest;

namespace {

constexpr double kPi = std::numbers::pi;

double vm_mixture_density(double phi, const DistributionSpec& spec) {
  double f = 0.0;
  for (std::size_t c = 0; c < spec.weights.size(); ++c) {
    const double mu = std::atan2(spec.mean_directions[c][1], spec.mean_directions[c][0]);
    const double k = spec.concentrations[c];
    f += spec.weights[c] * std::exp(k * std::cos(phi - mu)) / (2.0 * kPi * std::cyl_bessel_i(0.0, k));
  }
  return f;
}

// Composite Simpson on [a, b].
template <typename F>
double integrate(F f, double a, double b, int steps = 200) {
  const double h = (b - a) / steps;
  double s = f(a) + f(b);
  for (int i = 1; i < steps; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("torus points satisfy the implicit equation") {
  const auto pc = sample(preset("torus"), 1000, 11);
  REQUIRE(pc.dim() == 3);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const auto p = pc.point(i);
    const double rho = std::hypot(p[0], p[1]) - 2.0;
    CHECK(std::abs(rho * rho + p[2] * p[2] - 1.0) < 1e-9);
  }
}

TEST_CASE("sphere surface points have unit norm") {
  for (std::size_t dim : {2u, 3u, 5u}) {
    auto spec = preset("sphere");
    spec.dim = dim;
    const auto pc = sample(spec, 1000, dim);
    REQUIRE(pc.dim() == dim);
    for (std::size_t i = 0; i < pc.size(); ++i) CHECK(std::abs(euclidean_norm(pc.point(i)) - 1.0) < 1e-12);
  }
}

TEST_CASE("von Mises mixture mean direction") {
  const auto spec = preset("circle_vm_mixture");
  const auto pc = sample(spec, 100000, 5);
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    sx += pc.point(i)[0];
    sy += pc.point(i)[1];
  }
  // weight-averaged direction is (1/3, 2/3)
  CHECK(sx / 3.0 + 2.0 * sy / 3.0 > 0.0);
}

TEST_CASE("von Mises mixture passes chi-squared goodness of fit") {
  const auto spec = preset("circle_vm_mixture");
  const std::size_t n = 100000;
  const auto pc = sample(spec, n, 2024);
  constexpr int bins = 36;
  std::vector<double> observed(bins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double phi = std::atan2(pc.point(i)[1], pc.point(i)[0]);
    if (phi < 0) phi += 2 * kPi;
    observed[std::min(bins - 1, static_cast<int>(phi / (2 * kPi) * bins))] += 1;
  }
  double chi2 = 0.0, total_p = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = 2 * kPi * b / bins, hi = 2 * kPi * (b + 1) / bins;
    const double p = integrate([&](double t) { return vm_mixture_density(t, spec); }, lo, hi);
    total_p += p;
    const double expected = p * n;
    chi2 += (observed[b] - expected) * (observed[b] - expected) / expected;
  }
  CHECK(total_p == doctest::Approx(1.0).epsilon(1e-9));
  // 0.999 quantile of chi-squared with 35 degrees of freedom
  CHECK(chi2 < 66.6188);
}

TEST_CASE("vMF on the sphere concentrates around its mean direction") {
  DistributionSpec spec;
  spec.kind = DistributionKind::vmf_mixture_sphere;
  spec.weights = {1.0};
  spec.mean_directions = {{0, 0, 1}};
  spec.concentrations = {4.0};
  const auto pc = sample(spec, 50000, 3);
  double mean_w = 0;
  for (std::size_t i = 0; i < pc.size(); ++i) mean_w += pc.point(i)[2];
  mean_w /= pc.size();
  // E[w] = coth κ - 1/κ
  CHECK(mean_w == doctest::Approx(1.0 / std::tanh(4.0) - 0.25).epsilon(0.01));
}

TEST_CASE("samplers are deterministic in the seed") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto spec = preset(name);
    CHECK(sample(spec, 50, 99) == sample(spec, 50, 99));
    CHECK_FALSE(sample(spec, 50, 99) == sample(spec, 50, 100));
    CHECK(sample(spec, 50, 1).dim() == spec.ambient_dim());
  }
}

TEST_CASE("support membership") {
  const auto disk = sample(preset("unit_disk"), 2000, 1);
  for (std::size_t i = 0; i < disk.size(); ++i) CHECK(euclidean_norm(disk.point(i)) <= 1.0);
  for (const char* name : {"unit_square", "unit_cube"}) {
    const auto pc = sample(preset(name), 2000, 2);
    for (double c : pc.coords()) CHECK((c >= 0.0 && c <= 1.0));
  }
  CHECK(sample(preset("spiral"), 10, 3).dim() == 2);
  CHECK(sample(preset("swiss_roll"), 10, 3).dim() == 3);
  CHECK(sample(preset("bivariate_normal"), 10, 3).dim() == 2);
  CHECK(sample(preset("trivariate_normal"), 10, 3).dim() == 3);
}

TEST_CASE("multivariate normal moments") {
  const auto pc = sample(preset("bivariate_normal"), 100000, 8);
  double mx = 0, my = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    mx += pc.point(i)[0];
    my += pc.point(i)[1];
  }
  mx /= pc.size();
  my /= pc.size();
  for (std::size_t i = 0; i < pc.size(); ++i) {
    sxx += (pc.point(i)[0] - mx) * (pc.point(i)[0] - mx);
    sxy += (pc.point(i)[0] - mx) * (pc.point(i)[1] - my);
  }
  CHECK(std::abs(mx) < 0.02);
  CHECK(sxx / pc.size() == doctest::Approx(1.0).epsilon(0.03));
  CHECK(sxy / pc.size() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("invalid specs name the violated field") {
  auto expect = [](DistributionSpec spec, const std::string& field) {
    try {
      spec.validate();
      FAIL("expected InvalidSpec for " << field);
    } catch (const InvalidSpec& e) {
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  };
  auto vm = preset("circle_vm_mixture");
  vm.weights = {0.5, 0.6};
  expect(vm, "weights");
  vm = preset("circle_vm_mixture");
  vm.weights = {-0.5, 1.5};
  expect(vm, "weights");
  vm = preset("circle_vm_mixture");
  vm.concentrations = {3.0, 0.0};
  expect(vm, "concentrations");
  auto mvn = preset("bivariate_normal");
  mvn.covariance = {{1, 0.5}, {0.4, 1}};
  expect(mvn, "covariance");
  mvn.covariance = {{1, 2}, {2, 1}};
  expect(mvn, "covariance");
  auto torus = preset("torus");
  torus.minor_radius = 3.0;
  expect(torus, "torus");
  torus.minor_radius = 0.0;
  expect(torus, "torus");
  CHECK_THROWS_AS(sample(torus, 10, 1), InvalidSpec);
  CHECK_THROWS_AS(preset("nope"), InvalidSpec);
}

TEST_CASE("specs round trip through JSON") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto spec = preset(name);
    nlohmann::json j = spec;
    CHECK(j.get<DistributionSpec>() == spec);
  }
  const auto spec = nlohmann::json::parse(R"({"preset": "torus", "R": 3, "r": 0.5})").get<DistributionSpec>();
  CHECK(spec.kind == DistributionKind::torus);
  CHECK(spec.major_radius == 3.0);
  CHECK(spec.minor_radius == 0.5);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"R": 3})").get<DistributionSpec>(), InvalidSpec);
}
