#include "jetcheck/perturbation.hpp"

#include <algorithm>
#include <cmath>

namespace jetcheck {

PerturbationFamily::PerturbationFamily(PolyMap base, int order, std::vector<PolyMap> generators,
                                       std::vector<std::string> labels, std::vector<double> amplitudes)
    : base_(std::move(base)),
      order_(order),
      generators_(std::move(generators)),
      labels_(std::move(labels)),
      amplitudes_(std::move(amplitudes)) {
  if (order_ < 1) throw InputError("jet order must be >= 1");
  if (labels_.size() != generators_.size()) throw InputError("one label per generator required");
  for (const auto& h : generators_)
    if (h.n() != base_.n() || h.p() != base_.p()) throw InputError("generator dimensions differ from the base map");
}

void PerturbationFamily::add_extra(std::string label, PolyMap g) {
  if (g.n() != base_.n() || g.p() != base_.p()) throw InputError("extra realisation has the wrong dimensions");
  extras_.push_back({std::move(label), std::move(g)});
}

std::vector<FamilyMember> PerturbationFamily::members() const {
  std::vector<FamilyMember> out;
  out.push_back({"f", base_});
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    for (double eps : amplitudes_) {
      if (eps == 0.0) continue;
      out.push_back({"f + " + format_coefficient(eps) + "*(" + labels_[i] + ")", base_ + generators_[i].scaled(eps)});
    }
  }
  out.insert(out.end(), extras_.begin(), extras_.end());
  return out;
}

double PerturbationFamily::bound_ratio(const ShellSample& sample) const {
  double worst = 0.0;
  for (const auto& shell : sample.shells)
    for (const auto& pt : shell.points) {
      const double scale = std::pow(pt.distance, order_ + 1);
      for (const auto& h : generators_) worst = std::max(worst, eval_map(h, pt.x).norm() / scale);
    }
  return worst;
}

PerturbationFamily make_perturbation_family(const PolyMap& f, const SigmaSet& sigma, int r,
                                            std::vector<double> amplitudes) {
  if (r < 1) throw InputError("jet order must be >= 1");
  if (sigma.ambient_dim() != f.n()) throw InputError("Sigma and the germ live in different dimensions");
  if (!sigma.is_linear())
    throw CapabilityError("perturbation families need Sigma = {0} or a linear subspace; "
                          "use the f-only certificate for polynomial Sigma");
  const Eigen::MatrixXd& normal = sigma.normal_basis();  // n x c
  const auto c = static_cast<std::size_t>(normal.cols());
  const Eigen::MatrixXd to_normal = normal.transpose();   // y = N^T x
  std::vector<PolyMap> generators;
  std::vector<std::string> labels;
  for (const auto& e : monomials_of_degree(c, r + 1)) {
    // m(y) as a polynomial in c variables, then substituted y = N^T x.
    const RealPolynomial in_normal = RealPolynomial::monomial(e, 1.0);
    const RealPolynomial in_x = compose_linear(in_normal, to_normal);
    for (std::size_t i = 0; i < f.p(); ++i) {
      std::vector<RealPolynomial> comps(f.p(), RealPolynomial(f.n()));
      comps[i] = in_x;
      generators.emplace_back(f.n(), std::move(comps));
      labels.push_back("(" + in_x.to_string() + ")*e" + std::to_string(i + 1));
    }
  }
  return PerturbationFamily(f, r, std::move(generators), std::move(labels), std::move(amplitudes));
}

}  // namespace jetcheck
