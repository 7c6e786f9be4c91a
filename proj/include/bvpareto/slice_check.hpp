#ifndef BVPARETO_SLICE_CHECK_HPP
#define BVPARETO_SLICE_CHECK_HPP

#include <cstddef>
#include <vector>

#include "bvpareto/rng.hpp"
#include "bvpareto/slice.hpp"

namespace bvpareto {

// Built-in correctness check of the slice sampler against targets with
// known moments: Uniform(0,1), Beta(2,5), Gamma(0.7, 0.75). A chain of
// `iters` steps is run per target; its mean and variance must fall within
// 4 batch-means Monte Carlo standard errors of the analytic values.

struct SliceCheckResult {
  const char* target = "";
  double mean = 0.0, analytic_mean = 0.0, mean_se = 0.0;
  double var = 0.0, analytic_var = 0.0, var_se = 0.0;
  bool pass = false;
};

std::vector<SliceCheckResult> slice_self_test(std::size_t iters,
                                              RngStream seed,
                                              const SliceConfig& cfg = {});

}  // namespace bvpareto

#endif
