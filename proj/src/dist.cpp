#include "bvpareto/dist.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bvpareto {

namespace {

constexpr double kDenomFloor = 1e-300;

struct StdPoint {
  double l1, l2;  // log1p of standardized coordinates
  RegionTag region;
};

StdPoint standardize_checked(PointPair y, const ModelParams& p) {
  validate(p);
  const Standardized s = standardize(y, p.loc_scale);
  if (!(s.y1 >= 0.0) || !(s.y2 >= 0.0))
    throw domain_error("standardized coordinates must be nonnegative");
  return StdPoint{std::log1p(s.y1), std::log1p(s.y2), s.region};
}

double log_survival_pieces(double l1, double l2, RegionTag region,
                           const ModelParams& p) {
  switch (region) {
    case RegionTag::Below:  // S1 = (1+y2)^-(a0+a2) (1+y1)^-a1
      return -(p.alpha0 + p.alpha2) * l2 - p.alpha1 * l1;
    case RegionTag::Above:  // S2 = (1+y1)^-(a0+a1) (1+y2)^-a2
      return -(p.alpha0 + p.alpha1) * l1 - p.alpha2 * l2;
    default:  // S0 = (1+y)^-(a0+a1+a2)
      return -p.alpha_sum() * l1;
  }
}

// 1 - (1-theta)*S computed without cancellation:
// 1 - (1-theta)e^ls = theta e^ls - expm1(ls), both terms nonnegative for ls <= 0.
double one_minus_q(double log_s, double theta) {
  const double v = theta * std::exp(log_s) - std::expm1(log_s);
  if (v < kDenomFloor)
    throw numeric_error(
        "geometric denominator 1-(1-theta)S underflowed (theta near 0 with S "
        "near 1)");
  return v;
}

// Log of the Marshall-Olkin density piece for the given region (no theta, no
// location-scale Jacobian).
double log_mobvpa_piece(double l1, double l2, RegionTag region,
                        const ModelParams& p) {
  switch (region) {
    case RegionTag::Below:
      return std::log(p.alpha1) + std::log(p.alpha0 + p.alpha2) -
             (p.alpha1 + 1.0) * l1 - (p.alpha0 + p.alpha2 + 1.0) * l2;
    case RegionTag::Above:
      return std::log(p.alpha2) + std::log(p.alpha0 + p.alpha1) -
             (p.alpha0 + p.alpha1 + 1.0) * l1 - (p.alpha2 + 1.0) * l2;
    default:
      return std::log(p.alpha0) - (p.alpha_sum() + 1.0) * l1;
  }
}

double log_jacobian(const LocationScale& ls) {
  return std::log(ls.sigma1 * ls.sigma2);
}

// Log of the geometric compounding factor multiplying the MO density:
// theta (1+q) / (1-q)^3 off-diagonal, theta / (1-q)^2 on the diagonal,
// with q = (1-theta)S.
double log_geo_factor(double log_s, RegionTag region, double theta) {
  const double q = (1.0 - theta) * std::exp(log_s);
  const double omq = one_minus_q(log_s, theta);
  if (region == RegionTag::Diagonal)
    return std::log(theta) - 2.0 * std::log(omq);
  return std::log(theta) + std::log1p(q) - 3.0 * std::log(omq);
}

}  // namespace

double log_survival_mo_from_logs(double l1, double l2, RegionTag region,
                                 const ModelParams& p) {
  return log_survival_pieces(l1, l2, region, p);
}

double log_survival_mo(PointPair y, const ModelParams& p) {
  const StdPoint s = standardize_checked(y, p);
  return log_survival_pieces(s.l1, s.l2, s.region, p);
}

double survival_mo(PointPair y, const ModelParams& p) {
  return std::exp(log_survival_mo(y, p));
}

double survival_geo(PointPair y, const ModelParams& p) {
  const double ls = log_survival_mo(y, p);
  return p.theta * std::exp(ls) / one_minus_q(ls, p.theta);
}

Density mobvpa_pdf(PointPair y, const ModelParams& p) {
  const StdPoint s = standardize_checked(y, p);
  double lf = log_mobvpa_piece(s.l1, s.l2, s.region, p);
  if (s.region != RegionTag::Diagonal) lf -= log_jacobian(p.loc_scale);
  return Density{std::exp(lf), s.region == RegionTag::Diagonal};
}

Density pdf_gmo(PointPair y, const ModelParams& p) {
  const StdPoint s = standardize_checked(y, p);
  const double ls = log_survival_pieces(s.l1, s.l2, s.region, p);
  double lf = log_mobvpa_piece(s.l1, s.l2, s.region, p) +
              log_geo_factor(ls, s.region, p.theta);
  if (s.region != RegionTag::Diagonal) lf -= log_jacobian(p.loc_scale);
  return Density{std::exp(lf), s.region == RegionTag::Diagonal};
}

double log_pdf_gbb_from_logs(double l1, double l2, RegionTag region,
                             const ModelParams& p) {
  if (region == RegionTag::Diagonal)
    throw diagonal_error("pdf_gbb: equal standardized coordinates");
  const double ls = log_survival_pieces(l1, l2, region, p);
  return std::log(bb_normalizer(p)) + log_mobvpa_piece(l1, l2, region, p) +
         log_geo_factor(ls, region, p.theta);
}

double log_pdf_gbb(PointPair y, const ModelParams& p) {
  const StdPoint s = standardize_checked(y, p);
  return log_pdf_gbb_from_logs(s.l1, s.l2, s.region, p) -
         log_jacobian(p.loc_scale);
}

double pdf_gbb(PointPair y, const ModelParams& p) {
  return std::exp(log_pdf_gbb(y, p));
}

double marginal_survival(double y, int which, const ModelParams& p) {
  validate(p);
  if (which != 1 && which != 2)
    throw domain_error("marginal_survival: component must be 1 or 2");
  const double mu = (which == 1) ? p.loc_scale.mu1 : p.loc_scale.mu2;
  const double sigma = (which == 1) ? p.loc_scale.sigma1 : p.loc_scale.sigma2;
  if (!(y > mu))
    throw domain_error("marginal_survival: y must exceed the location mu");
  const double lu = std::log1p((y - mu) / sigma);
  const double shape = (which == 1) ? p.alpha0 + p.alpha1 : p.alpha0 + p.alpha2;

  const auto geo = [&](double log_s) {
    const double s = std::exp(log_s);
    return p.theta * s / one_minus_q(log_s, p.theta);
  };
  const double pnorm = bb_normalizer(p);
  return pnorm * (geo(-shape * lu) -
                  (1.0 - 1.0 / pnorm) * geo(-p.alpha_sum() * lu));
}

double loglik(const BivariateSample& data, const ModelParams& p) {
  validate(p);
  // Same sum as log_pdf_gbb per observation, with the observation-free
  // factors hoisted; only the geometric factor stays inside the loop. This
  // is the hot path of every estimator.
  const double a01 = p.alpha0 + p.alpha1;
  const double a02 = p.alpha0 + p.alpha2;
  const double omt = 1.0 - p.theta;

  double acc = 0.0;
  double l1b = 0.0, l2b = 0.0, l1a = 0.0, l2a = 0.0;
  for (std::size_t i : data.below()) {
    const double l1 = data.log1p_y1(i), l2 = data.log1p_y2(i);
    l1b += l1;
    l2b += l2;
    const double ls = -p.alpha1 * l1 - a02 * l2;
    acc += std::log1p(omt * std::exp(ls)) -
           3.0 * std::log(one_minus_q(ls, p.theta));
  }
  for (std::size_t i : data.above()) {
    const double l1 = data.log1p_y1(i), l2 = data.log1p_y2(i);
    l1a += l1;
    l2a += l2;
    const double ls = -a01 * l1 - p.alpha2 * l2;
    acc += std::log1p(omt * std::exp(ls)) -
           3.0 * std::log(one_minus_q(ls, p.theta));
  }

  const double m1 = static_cast<double>(data.m1());
  const double m2 = static_cast<double>(data.m2());
  const double m = m1 + m2;
  acc += m * (std::log(p.theta) + std::log(bb_normalizer(p)) -
              log_jacobian(p.loc_scale));
  acc += m1 * (std::log(p.alpha1) + std::log(a02));
  acc += m2 * (std::log(p.alpha2) + std::log(a01));
  acc -= (p.alpha1 + 1.0) * l1b + (a02 + 1.0) * l2b;
  acc -= (a01 + 1.0) * l1a + (p.alpha2 + 1.0) * l2a;
  if (!std::isfinite(acc))
    throw numeric_error("loglik: non-finite log-likelihood");
  return acc;
}

double mixture_pdf_oracle(PointPair y, const ModelParams& p, double tol,
                          std::size_t max_terms) {
  if (!(tol > 0.0)) throw domain_error("mixture_pdf_oracle: tol must be > 0");
  const StdPoint s = standardize_checked(y, p);
  const double log_s = log_survival_pieces(s.l1, s.l2, s.region, p);
  const double surv = std::exp(log_s);
  const double ratio_base = (1.0 - p.theta) * surv;
  // Term growth is n^2 off the diagonal (two shape factors scale with n),
  // n on it.
  const double growth = (s.region == RegionTag::Diagonal) ? 1.0 : 2.0;
  const double jac =
      (s.region == RegionTag::Diagonal) ? 0.0 : log_jacobian(p.loc_scale);

  double weight = p.theta;  // theta (1-theta)^(n-1)
  double sum = 0.0;
  for (std::size_t n = 1; n <= max_terms; ++n) {
    ModelParams scaled = p;
    const double nd = static_cast<double>(n);
    scaled.alpha0 = nd * p.alpha0;
    scaled.alpha1 = nd * p.alpha1;
    scaled.alpha2 = nd * p.alpha2;
    const double term =
        weight * std::exp(log_mobvpa_piece(s.l1, s.l2, s.region, scaled) - jac);
    sum += term;
    // Successive ratios are (1-theta) S ((n+1)/n)^growth, decreasing in n, so
    // the tail after term n is bounded by a geometric series at this ratio.
    const double rho = ratio_base * std::pow((nd + 1.0) / nd, growth);
    if (rho < 1.0) {
      const double tail = term * rho / (1.0 - rho);
      if (tail <= tol * sum) return sum;
    }
    weight *= (1.0 - p.theta);
    if (weight == 0.0) return sum;  // theta == 1: single term
  }
  throw nonconvergence_error(
      "mixture_pdf_oracle: truncation cap of " + std::to_string(max_terms) +
      " terms reached before the tail bound met tol");
}

}  // namespace bvpareto
