#ifndef BVPARETO_PARAMS_HPP
#define BVPARETO_PARAMS_HPP

#include <string>

#include "bvpareto/errors.hpp"

namespace bvpareto {

// Fixed, known location-scale constants. Estimation never touches these.
struct LocationScale {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
};

// The four free parameters of the geometric Block-Basu bivariate Pareto
// family: geometric success probability theta in (0,1] and three positive
// shapes. Marshall-Olkin-level functions ignore theta.
struct ModelParams {
  double theta = 1.0;
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  LocationScale loc_scale{};

  double alpha_sum() const { return alpha0 + alpha1 + alpha2; }
};

enum class RegionTag { Below, Above, Diagonal };

struct PointPair {
  double y1 = 0.0;
  double y2 = 0.0;
};

struct Standardized {
  double y1 = 0.0;
  double y2 = 0.0;
  RegionTag region = RegionTag::Diagonal;
};

void validate(const LocationScale& ls);
void validate(const ModelParams& p);

// ((y1-mu1)/sigma1, (y2-mu2)/sigma2) with the region of the strict
// comparison of the standardized coordinates.
Standardized standardize(PointPair y, const LocationScale& ls);

// Weight of the absolutely continuous component,
// (alpha1+alpha2)/(alpha0+alpha1+alpha2). Independent of theta.
double ac_weight(const ModelParams& p);

// Block-Basu normalizer p = 1/ac_weight.
double bb_normalizer(const ModelParams& p);

const char* to_string(RegionTag tag);

}  // namespace bvpareto

#endif
