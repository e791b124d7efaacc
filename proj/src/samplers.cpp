#include "bettitest/samplers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bettitest/error.hpp"
#include "bettitest/rng.hpp"

namespace bettitest {

namespace {

constexpr double kPi = std::numbers::pi;

struct KindName {
  DistributionKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 10> kKindNames{{
    {DistributionKind::vonmises_mixture_circle, "vonmises_mixture_circle"},
    {DistributionKind::vmf_mixture_sphere, "vmf_mixture_sphere"},
    {DistributionKind::mvn, "mvn"},
    {DistributionKind::uniform_disk, "uniform_disk"},
    {DistributionKind::uniform_square, "uniform_square"},
    {DistributionKind::uniform_cube, "uniform_cube"},
    {DistributionKind::uniform_sphere_surface, "uniform_sphere_surface"},
    {DistributionKind::torus, "torus"},
    {DistributionKind::swiss_roll, "swiss_roll"},
    {DistributionKind::spiral, "spiral"},
}};

bool is_mixture(DistributionKind k) {
  return k == DistributionKind::vonmises_mixture_circle || k == DistributionKind::vmf_mixture_sphere;
}

/// Lower Cholesky factor, or empty when the matrix is not positive definite.
std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& a) {
  const std::size_t d = a.size();
  std::vector<std::vector<double>> l(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(s > 0.0)) return {};
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  return l;
}

/// Best-Fisher rejection sampler for the von Mises angle about 0.
double von_mises_angle(Rng& rng, double kappa) {
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  while (true) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform();
    const double z = std::cos(kPi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || (u2 > 0.0 && std::log(c / u2) + 1.0 - c >= 0.0)) {
      const double theta = std::acos(std::clamp(f, -1.0, 1.0));
      return u3 > 0.5 ? theta : -theta;
    }
  }
}

/// Cosine w = <x, mu> of a vMF draw on S^{p-1}.
double vmf_cosine(Rng& rng, double kappa, std::size_t p) {
  if (p == 3) {
    // Closed-form inversion of the cosine's CDF on S².
    const double u = rng.uniform();
    const double w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
    return std::clamp(w, -1.0, 1.0);
  }
  // Wood (1994) rejection scheme for general p.
  const double m = static_cast<double>(p) - 1.0;
  const double b = m / (std::sqrt(4.0 * kappa * kappa + m * m) + 2.0 * kappa);
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + m * std::log(1.0 - x0 * x0);
  while (true) {
    // z ~ Beta(m/2, m/2) as a ratio of chi-squares with m degrees of freedom.
    double g1 = 0.0, g2 = 0.0;
    for (std::size_t k = 0; k < p - 1; ++k) {
      const double a = rng.normal();
      const double bb = rng.normal();
      g1 += a * a;
      g2 += bb * bb;
    }
    const double z = g1 / (g1 + g2);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform();
    if (kappa * w + m * std::log(1.0 - x0 * w) - c >= std::log(u)) return w;
  }
}

/// Draw from vMF(mu, kappa) on S^{p-1}, p = mu.size() >= 2.
void vmf_point(Rng& rng, const std::vector<double>& mu, double kappa, double* out) {
  const std::size_t p = mu.size();
  if (p == 2) {
    const double theta = std::atan2(mu[1], mu[0]) + von_mises_angle(rng, kappa);
    out[0] = std::cos(theta);
    out[1] = std::sin(theta);
    return;
  }
  const double w = vmf_cosine(rng, kappa, p);
  // Uniform direction orthogonal to mu, by Gram-Schmidt on a Gaussian vector.
  std::vector<double> v(p);
  double norm = 0.0;
  do {
    double dot = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      v[k] = rng.normal();
      dot += v[k] * mu[k];
    }
    norm = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      v[k] -= dot * mu[k];
      norm += v[k] * v[k];
    }
    norm = std::sqrt(norm);
  } while (norm < 1e-12);
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  for (std::size_t k = 0; k < p; ++k) out[k] = w * mu[k] + s * v[k] / norm;
}

std::size_t pick_component(Rng& rng, const std::vector<double>& weights) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < weights.size(); ++c) {
    acc += weights[c];
    if (u < acc) return c;
  }
  return weights.size() - 1;
}

}  // namespace

DistributionKind parse_distribution_kind(std::string_view name) {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  throw InvalidSpec("unknown distribution kind '" + std::string(name) + "'");
}

std::string to_string(DistributionKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return std::string(kn.name);
  return "?";
}

std::size_t DistributionSpec::ambient_dim() const {
  switch (kind) {
    case DistributionKind::vonmises_mixture_circle:
    case DistributionKind::uniform_disk:
    case DistributionKind::uniform_square:
    case DistributionKind::spiral:
      return 2;
    case DistributionKind::uniform_cube:
    case DistributionKind::torus:
    case DistributionKind::swiss_roll:
      return 3;
    case DistributionKind::vmf_mixture_sphere:
      return mean_directions.empty() ? 0 : mean_directions.front().size();
    case DistributionKind::mvn:
      return mean.size();
    case DistributionKind::uniform_sphere_surface:
      return dim;
  }
  return 0;
}

void DistributionSpec::validate() const {
  if (is_mixture(kind)) {
    const std::size_t k = weights.size();
    if (k == 0) throw InvalidSpec("weights: mixture needs at least one component");
    if (mean_directions.size() != k || concentrations.size() != k)
      throw InvalidSpec("weights: weights, mean_directions and concentrations must have equal length");
    double total = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw InvalidSpec("weights: mixture weights must be positive");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidSpec("weights: mixture weights must sum to 1");
    for (double c : concentrations)
      if (!(c > 0.0)) throw InvalidSpec("concentrations: κ must be > 0");
    const std::size_t p = kind == DistributionKind::vonmises_mixture_circle ? 2 : mean_directions.front().size();
    if (p < 2) throw InvalidSpec("mean_directions: need dimension >= 2");
    for (const auto& mu : mean_directions) {
      if (mu.size() != p) throw InvalidSpec("mean_directions: each direction must have dimension " + std::to_string(p));
      if (std::abs(euclidean_norm(mu) - 1.0) > 1e-9) throw InvalidSpec("mean_directions: directions must be unit vectors");
    }
  }
  if (kind == DistributionKind::mvn) {
    const std::size_t d = mean.size();
    if (d == 0) throw InvalidSpec("mean: needs dimension >= 1");
    if (covariance.size() != d) throw InvalidSpec("covariance: must be d x d");
    for (const auto& row : covariance)
      if (row.size() != d) throw InvalidSpec("covariance: must be d x d");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (covariance[i][j] != covariance[j][i]) throw InvalidSpec("covariance: must be symmetric");
    if (cholesky(covariance).empty()) throw InvalidSpec("covariance: must be positive definite");
  }
  if (kind == DistributionKind::torus && !(0.0 < minor_radius && minor_radius < major_radius && std::isfinite(major_radius)))
    throw InvalidSpec("torus: requires 0 < r < R < inf");
  if (kind == DistributionKind::uniform_sphere_surface && dim < 2)
    throw InvalidSpec("dim: sphere surface needs ambient dimension >= 2");
  if (!(noise >= 0.0)) throw InvalidSpec("noise: must be >= 0");
}

PointCloud sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw DomainError("sample size must be >= 1");
  Rng rng(seed);
  const std::size_t d = spec.ambient_dim();
  std::vector<double> c(n * d);
  switch (spec.kind) {
    case DistributionKind::vonmises_mixture_circle:
    case DistributionKind::vmf_mixture_sphere:
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t comp = pick_component(rng, spec.weights);
        vmf_point(rng, spec.mean_directions[comp], spec.concentrations[comp], &c[i * d]);
      }
      break;
    case DistributionKind::mvn: {
      const auto l = cholesky(spec.covariance);
      std::vector<double> z(d);
      for (std::size_t i = 0; i < n; ++i) {
        for (double& zk : z) zk = rng.normal();
        for (std::size_t r = 0; r < d; ++r) {
          double v = spec.mean[r];
          for (std::size_t k = 0; k <= r; ++k) v += l[r][k] * z[k];
          c[i * d + r] = v;
        }
      }
      break;
    }
    case DistributionKind::uniform_disk:
      for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(rng.uniform());
        const double t = 2.0 * kPi * rng.uniform();
        c[i * 2] = r * std::cos(t);
        c[i * 2 + 1] = r * std::sin(t);
      }
      break;
    case DistributionKind::uniform_square:
    case DistributionKind::uniform_cube:
      for (double& v : c) v = rng.uniform();
      break;
    case DistributionKind::uniform_sphere_surface:
      for (std::size_t i = 0; i < n; ++i) {
        double norm = 0.0;
        do {
          norm = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            c[i * d + k] = rng.normal();
            norm += c[i * d + k] * c[i * d + k];
          }
          norm = std::sqrt(norm);
        } while (norm < 1e-12);
        for (std::size_t k = 0; k < d; ++k) c[i * d + k] /= norm;
      }
      break;
    case DistributionKind::torus: {
      const double big = spec.major_radius;
      const double small = spec.minor_radius;
      for (std::size_t i = 0; i < n; ++i) {
        // Area element is proportional to R + r cos(theta); accept theta with that weight.
        double theta;
        do {
          theta = 2.0 * kPi * rng.uniform();
        } while (rng.uniform() * (big + small) > big + small * std::cos(theta));
        const double psi = 2.0 * kPi * rng.uniform();
        const double ring = big + small * std::cos(theta);
        c[i * 3] = ring * std::cos(psi);
        c[i * 3 + 1] = ring * std::sin(psi);
        c[i * 3 + 2] = small * std::sin(theta);
      }
      break;
    }
    case DistributionKind::swiss_roll:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = rng.uniform(1.5 * kPi, 4.5 * kPi);
        const double h = rng.uniform(0.0, 10.0);
        c[i * 3] = t * std::cos(t);
        c[i * 3 + 1] = h;
        c[i * 3 + 2] = t * std::sin(t);
        if (spec.noise > 0.0)
          for (std::size_t k = 0; k < 3; ++k) c[i * 3 + k] += spec.noise * rng.normal();
      }
      break;
    case DistributionKind::spiral:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = rng.uniform(0.0, 4.0 * kPi);
        const double r = t / (2.0 * kPi);
        c[i * 2] = r * std::cos(t);
        c[i * 2 + 1] = r * std::sin(t);
        if (spec.noise > 0.0)
          for (std::size_t k = 0; k < 2; ++k) c[i * 2 + k] += spec.noise * rng.normal();
      }
      break;
  }
  return PointCloud(d, std::move(c));
}

DistributionSpec preset(std::string_view name) {
  DistributionSpec s;
  if (name == "circle_vm_mixture") {
    s.kind = DistributionKind::vonmises_mixture_circle;
    s.weights = {1.0 / 3.0, 2.0 / 3.0};
    s.mean_directions = {{1, 0}, {0, 1}};
    s.concentrations = {3, 4};
  } else if (name == "sphere_vmf_mixture") {
    s.kind = DistributionKind::vmf_mixture_sphere;
    s.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    s.mean_directions = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    s.concentrations = {3, 4, 5};
  } else if (name == "bivariate_normal") {
    s.kind = DistributionKind::mvn;
    s.mean = {0, 0};
    s.covariance = {{1, 0.5}, {0.5, 1}};
  } else if (name == "trivariate_normal") {
    s.kind = DistributionKind::mvn;
    s.mean = {0, 0, 0};
    s.covariance = {{1, 0.5, 0.5}, {0.5, 1, 0.5}, {0.5, 0.5, 1}};
  } else if (name == "circle") {
    s.kind = DistributionKind::uniform_sphere_surface;
    s.dim = 2;
  } else if (name == "sphere") {
    s.kind = DistributionKind::uniform_sphere_surface;
    s.dim = 3;
  } else if (name == "unit_disk") {
    s.kind = DistributionKind::uniform_disk;
  } else if (name == "unit_square") {
    s.kind = DistributionKind::uniform_square;
  } else if (name == "unit_cube") {
    s.kind = DistributionKind::uniform_cube;
  } else if (name == "torus") {
    s.kind = DistributionKind::torus;
  } else if (name == "swiss_roll") {
    s.kind = DistributionKind::swiss_roll;
  } else if (name == "spiral") {
    s.kind = DistributionKind::spiral;
  } else {
    throw InvalidSpec("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> preset_names() {
  return {"circle_vm_mixture", "sphere_vmf_mixture", "bivariate_normal", "trivariate_normal",
          "circle",            "sphere",             "unit_disk",        "unit_square",
          "unit_cube",         "torus",              "swiss_roll",       "spiral"};
}

void to_json(nlohmann::json& j, const DistributionSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)}};
  if (is_mixture(spec.kind)) {
    j["weights"] = spec.weights;
    j["mean_directions"] = spec.mean_directions;
    j["concentrations"] = spec.concentrations;
  }
  switch (spec.kind) {
    case DistributionKind::mvn:
      j["mean"] = spec.mean;
      j["covariance"] = spec.covariance;
      break;
    case DistributionKind::torus:
      j["R"] = spec.major_radius;
      j["r"] = spec.minor_radius;
      break;
    case DistributionKind::swiss_roll:
    case DistributionKind::spiral:
      j["noise"] = spec.noise;
      break;
    case DistributionKind::uniform_sphere_surface:
      j["dim"] = spec.dim;
      break;
    default:
      break;
  }
}

void from_json(const nlohmann::json& j, DistributionSpec& spec) {
  if (!j.is_object()) throw InvalidSpec("distribution must be a JSON object");
  if (j.contains("preset")) {
    spec = preset(j.at("preset").get<std::string>());
  } else if (j.contains("kind")) {
    spec = DistributionSpec{};
    spec.kind = parse_distribution_kind(j.at("kind").get<std::string>());
  } else {
    throw InvalidSpec("distribution needs a 'kind' or 'preset'");
  }
  if (j.contains("weights")) spec.weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("mean_directions")) spec.mean_directions = j.at("mean_directions").get<std::vector<std::vector<double>>>();
  if (j.contains("concentrations")) spec.concentrations = j.at("concentrations").get<std::vector<double>>();
  if (j.contains("mean")) spec.mean = j.at("mean").get<std::vector<double>>();
  if (j.contains("covariance")) spec.covariance = j.at("covariance").get<std::vector<std::vector<double>>>();
  if (j.contains("R")) spec.major_radius = j.at("R").get<double>();
  if (j.contains("r")) spec.minor_radius = j.at("r").get<double>();
  if (j.contains("noise")) spec.noise = j.at("noise").get<double>();
  if (j.contains("dim")) spec.dim = j.at("dim").get<std::size_t>();
  spec.validate();
}

}  // namespace bettitest
