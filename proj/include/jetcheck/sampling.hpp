#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "jetcheck/poly_map.hpp"
#include "jetcheck/sigma.hpp"

namespace jetcheck {

struct SamplePoint {
  Eigen::VectorXd x;
  double distance;  // d(x, Sigma)
};

/// Points with inner < d(x, Sigma) <= outer, where outer = alpha * 2^-k.
struct Shell {
  double outer;
  double inner;
  std::vector<SamplePoint> points;
};

struct ShellSample {
  double alpha = 0.5;
  std::uint64_t seed = 1;
  std::vector<Shell> shells;

  std::size_t size() const;
  std::size_t nonempty_shells() const;
};

struct SamplingConfig {
  double alpha = 0.5;
  int shells = 12;
  int points_per_shell = 512;
  std::uint64_t seed = 1;
};

/// Index k with alpha 2^-(k+1) < d <= alpha 2^-k, or -1 when d is outside
/// (0, alpha] or beyond the last shell.
int shell_index(double alpha, int shell_count, double d);

/// Uniform ball points binned by d(x, Sigma), then thin shells topped up
/// with x = z + rho u (z a projection onto Sigma of a ball point, u a unit
/// normal at z) until each holds m points. Points with |x| > alpha or
/// d < 1e-12 alpha are never stored. Throws SamplingError when a shell
/// cannot be filled within the attempt budget.
ShellSample sample_shells(const SigmaSet& sigma, double alpha, int shell_count, int points_per_shell,
                          std::uint64_t seed);
ShellSample sample_shells(const SigmaSet& sigma, const SamplingConfig& config);

/// Keeps the points of the horn-neighbourhood |g(x)| <= w_bar d(x,Sigma)^r.
/// The comparison carries a 1e-12 relative allowance for rounding in d^r.
ShellSample horn_filter(const ShellSample& sample, const PolyMap& g, int r, double w_bar);

/// Every point mapped by x -> Q x; distances and shell radii are kept, so
/// Q must be orthogonal and Sigma must be mapped alongside.
ShellSample transformed(const ShellSample& sample, const Eigen::MatrixXd& q);

}  // namespace jetcheck
