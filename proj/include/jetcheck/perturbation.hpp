#pragma once

#include <string>
#include <vector>

#include "jetcheck/poly_map.hpp"
#include "jetcheck/sampling.hpp"
#include "jetcheck/sigma.hpp"

namespace jetcheck {

/// One realisation g = base + amplitude * generator of the same relative jet.
struct FamilyMember {
  std::string label;
  PolyMap g;
};

/// Maps g with the same relative r-jet as f, used to approximate the
/// "for every realisation g" quantifier. Generators are m(N^T x) e_i for
/// every monomial m of degree r+1 in the normal coordinates N^T x, so
/// |h(x)| <= d(x,Sigma)^(r+1) pointwise.
class PerturbationFamily {
 public:
  PerturbationFamily(PolyMap base, int order, std::vector<PolyMap> generators, std::vector<std::string> labels,
                     std::vector<double> amplitudes);

  const PolyMap& base() const { return base_; }
  int order() const { return order_; }
  const std::vector<PolyMap>& generators() const { return generators_; }
  const std::vector<std::string>& generator_labels() const { return labels_; }
  const std::vector<double>& amplitudes() const { return amplitudes_; }
  const std::vector<FamilyMember>& extras() const { return extras_; }

  /// Adds a caller-supplied realisation; flatness is the caller's check.
  void add_extra(std::string label, PolyMap g);

  /// The base itself, every generator at every amplitude, then the extras.
  std::vector<FamilyMember> members() const;

  /// Largest |h(x)| / d(x,Sigma)^(r+1) over generators and sample points
  /// (<= 1 up to rounding when the family is valid).
  double bound_ratio(const ShellSample& sample) const;

 private:
  PolyMap base_;
  int order_;
  std::vector<PolyMap> generators_;
  std::vector<std::string> labels_;
  std::vector<double> amplitudes_;
  std::vector<FamilyMember> extras_;
};

/// Only Sigma = {0} and linear subspaces are supported; other kinds throw
/// CapabilityError (use the f-only certificate instead).
PerturbationFamily make_perturbation_family(const PolyMap& f, const SigmaSet& sigma, int r,
                                            std::vector<double> amplitudes);

}  // namespace jetcheck
