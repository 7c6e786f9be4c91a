#ifndef BVPARETO_DIST_HPP
#define BVPARETO_DIST_HPP

#include <cstddef>

#include "bvpareto/params.hpp"
#include "bvpareto/sample_data.hpp"

namespace bvpareto {

// Closed-form evaluation of the Marshall-Olkin bivariate Pareto family, its
// geometric-minimum compound, and the absolutely continuous (Block-Basu)
// part. Everything is evaluated in log space internally; public densities
// exponentiate at the boundary.

struct Density {
  double value = 0.0;
  bool singular = false;  // diagonal piece (density of the diagonal coordinate)
};

// Marshall-Olkin survival S(y1,y2); theta is ignored.
// Domain: standardized coordinates >= 0.
double survival_mo(PointPair y, const ModelParams& p);
double log_survival_mo(PointPair y, const ModelParams& p);

// The same from cached logs l1 = log1p(u1), l2 = log1p(u2).
double log_survival_mo_from_logs(double l1, double l2, RegionTag region,
                                 const ModelParams& p);

// Geometric-minimum survival  theta*S / (1 - (1-theta)*S).
double survival_geo(PointPair y, const ModelParams& p);

// Marshall-Olkin density; theta is ignored. Diagonal inputs give the
// singular piece.
Density mobvpa_pdf(PointPair y, const ModelParams& p);

// Geometric Marshall-Olkin density. Diagonal inputs return the singular
// density of the diagonal coordinate, flagged; the fitting path never uses
// it (pdf_gbb below is the public fitting density).
Density pdf_gmo(PointPair y, const ModelParams& p);

// Density of the absolutely continuous part: bb_normalizer(p) times the
// off-diagonal piece of pdf_gmo. Throws diagonal_error on equal
// standardized coordinates.
double pdf_gbb(PointPair y, const ModelParams& p);
double log_pdf_gbb(PointPair y, const ModelParams& p);

// Per-observation log density from cached logs of standardized coordinates
// (no location-scale Jacobian). Hot path for loglik / EM / Gibbs.
double log_pdf_gbb_from_logs(double l1, double l2, RegionTag region,
                             const ModelParams& p);

// Marginal survival of component `which` (1 or 2). Domain: y > mu_which.
double marginal_survival(double y, int which, const ModelParams& p);

// Observed-data log-likelihood sum_i log pdf_gbb(y_i). `data` must have been
// standardized with the same location-scale as `p`; the Jacobian term is
// added here. Throws numeric_error if the sum is not finite.
double loglik(const BivariateSample& data, const ModelParams& p);

// Verification oracle: the geometric mixture
//   sum_n theta (1-theta)^(n-1) f_mobvpa(y; n*alpha),
// truncated adaptively so the geometric tail bound is below tol relative to
// the accumulated sum. Never calls pdf_gmo. Throws nonconvergence_error if
// max_terms is hit first (theta near 0 with S near 1).
double mixture_pdf_oracle(PointPair y, const ModelParams& p, double tol,
                          std::size_t max_terms = 100000);

}  // namespace bvpareto

#endif
