#include "bvpareto/params.hpp"

#include <cmath>

namespace bvpareto {

void validate(const LocationScale& ls) {
  if (!(ls.sigma1 > 0.0) || !(ls.sigma2 > 0.0))
    throw domain_error("location-scale: sigma1 and sigma2 must be positive");
  if (!std::isfinite(ls.mu1) || !std::isfinite(ls.mu2))
    throw domain_error("location-scale: mu1 and mu2 must be finite");
}

void validate(const ModelParams& p) {
  if (!(p.theta > 0.0) || !(p.theta <= 1.0))
    throw domain_error("theta must lie in (0,1]");
  if (!(p.alpha0 > 0.0) || !(p.alpha1 > 0.0) || !(p.alpha2 > 0.0))
    throw domain_error("alpha0, alpha1, alpha2 must be positive");
  validate(p.loc_scale);
}

Standardized standardize(PointPair y, const LocationScale& ls) {
  const double u1 = (y.y1 - ls.mu1) / ls.sigma1;
  const double u2 = (y.y2 - ls.mu2) / ls.sigma2;
  RegionTag tag = RegionTag::Diagonal;
  if (u1 < u2)
    tag = RegionTag::Below;
  else if (u1 > u2)
    tag = RegionTag::Above;
  return Standardized{u1, u2, tag};
}

double ac_weight(const ModelParams& p) {
  return (p.alpha1 + p.alpha2) / p.alpha_sum();
}

double bb_normalizer(const ModelParams& p) {
  return p.alpha_sum() / (p.alpha1 + p.alpha2);
}

const char* to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::Below:
      return "below";
    case RegionTag::Above:
      return "above";
    default:
      return "diagonal";
  }
}

}  // namespace bvpareto
