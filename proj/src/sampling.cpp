#include "jetcheck/sampling.hpp"

#include <cmath>
#include <random>
#include <span>
#include <string>

#include "jetcheck/parallel.hpp"

namespace jetcheck {

namespace {

constexpr double kMinRelativeDistance = 1e-12;
constexpr int kAttemptsPerPoint = 400;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  double norm = 0.0;
  while (norm < 1e-12) {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
    norm = v.norm();
  }
  return v / norm;
}

Eigen::VectorXd random_in_ball(std::mt19937_64& rng, Eigen::Index dim, double radius) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Eigen::VectorXd dir = random_unit(rng, dim);
  return radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim)) * dir;
}

}  // namespace

std::size_t ShellSample::size() const {
  std::size_t total = 0;
  for (const auto& s : shells) total += s.points.size();
  return total;
}

std::size_t ShellSample::nonempty_shells() const {
  std::size_t count = 0;
  for (const auto& s : shells)
    if (!s.points.empty()) ++count;
  return count;
}

int shell_index(double alpha, int shell_count, double d) {
  if (!(d > 0.0) || d > alpha) return -1;
  int k = static_cast<int>(std::floor(std::log2(alpha / d)));
  k = std::max(k, 0);
  // Fix rounding at the boundaries against the exact radii alpha * 2^-k.
  while (k > 0 && d > std::ldexp(alpha, -k)) --k;
  while (d <= std::ldexp(alpha, -(k + 1))) ++k;
  return k < shell_count ? k : -1;
}

ShellSample sample_shells(const SigmaSet& sigma, double alpha, int shell_count, int points_per_shell,
                          std::uint64_t seed) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be positive");
  if (shell_count < 2) throw InputError("at least two shells are required");
  if (points_per_shell < 1) throw InputError("points per shell must be positive");
  const auto dim = static_cast<Eigen::Index>(sigma.ambient_dim());
  const auto m = static_cast<std::size_t>(points_per_shell);
  const double min_distance = kMinRelativeDistance * alpha;

  ShellSample sample;
  sample.alpha = alpha;
  sample.seed = seed;
  sample.shells.resize(static_cast<std::size_t>(shell_count));
  for (int k = 0; k < shell_count; ++k) {
    sample.shells[static_cast<std::size_t>(k)].outer = std::ldexp(alpha, -k);
    sample.shells[static_cast<std::size_t>(k)].inner = std::ldexp(alpha, -(k + 1));
  }

  // Uniform draw from the ball.
  std::mt19937_64 rng(mix(seed));
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd x = random_in_ball(rng, dim, alpha);
    const double d = distance_to_sigma(sigma, x);
    if (d <= min_distance) continue;
    const int k = shell_index(alpha, shell_count, d);
    if (k < 0) continue;
    auto& shell = sample.shells[static_cast<std::size_t>(k)];
    if (shell.points.size() < m) shell.points.push_back({std::move(x), d});
  }

  // Near-Sigma top-up, one generator per shell.
  parallel_for(static_cast<std::size_t>(shell_count), [&](std::size_t k) {
    Shell& shell = sample.shells[k];
    std::mt19937_64 shell_rng(mix(seed ^ mix(0x5348454c4cULL + k)));
    std::uniform_real_distribution<double> radius(shell.inner, shell.outer);
    const std::size_t budget = kAttemptsPerPoint * m;
    std::size_t attempts = 0;
    while (shell.points.size() < m) {
      if (++attempts > budget)
        throw SamplingError("shell " + std::to_string(k) + " (d in (" + std::to_string(shell.inner) + ", " +
                                std::to_string(shell.outer) + "]) could not be filled; is Sigma full-dimensional?",
                            static_cast<int>(k));
      const Eigen::VectorXd b = random_in_ball(shell_rng, dim, alpha);
      const Eigen::VectorXd z = sigma.kind() == SigmaKind::Origin ? Eigen::VectorXd::Zero(dim) : project_to_sigma(sigma, b);
      const Eigen::MatrixXd normals = normal_directions(sigma, z);
      Eigen::VectorXd u;
      if (normals.cols() == 0) {
        u = random_unit(shell_rng, dim);
      } else {
        u = normals * random_unit(shell_rng, normals.cols());
      }
      Eigen::VectorXd x = z + radius(shell_rng) * u;
      if (x.norm() > alpha) continue;
      const double d = distance_to_sigma(sigma, x);
      if (d <= min_distance || !(d > shell.inner) || d > shell.outer) continue;
      shell.points.push_back({std::move(x), d});
    }
  });
  return sample;
}

ShellSample sample_shells(const SigmaSet& sigma, const SamplingConfig& config) {
  return sample_shells(sigma, config.alpha, config.shells, config.points_per_shell, config.seed);
}

ShellSample horn_filter(const ShellSample& sample, const PolyMap& g, int r, double w_bar) {
  if (r < 1) throw InputError("horn degree must be >= 1");
  if (!(w_bar > 0.0)) throw InputError("horn width must be positive");
  ShellSample out;
  out.alpha = sample.alpha;
  out.seed = sample.seed;
  out.shells.reserve(sample.shells.size());
  for (const auto& shell : sample.shells) {
    Shell kept{shell.outer, shell.inner, {}};
    for (const auto& pt : shell.points) {
      const double value = eval_map(g, pt.x).norm();
      if (value <= w_bar * std::pow(pt.distance, r) * (1.0 + 1e-12)) kept.points.push_back(pt);
    }
    out.shells.push_back(std::move(kept));
  }
  return out;
}

ShellSample transformed(const ShellSample& sample, const Eigen::MatrixXd& q) {
  ShellSample out = sample;
  for (auto& shell : out.shells)
    for (auto& pt : shell.points) pt.x = q * pt.x;
  return out;
}

}  // namespace jetcheck
