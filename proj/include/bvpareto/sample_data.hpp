#ifndef BVPARETO_SAMPLE_DATA_HPP
#define BVPARETO_SAMPLE_DATA_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "bvpareto/params.hpp"

namespace bvpareto {

// A dataset for the absolutely continuous law: standardized pairs with
// strictly unequal components, partitioned by the sign of y1 - y2.
// log1p of both coordinates is cached once; every estimator hot loop
// reads the caches instead of recomputing logs.
class BivariateSample {
 public:
  BivariateSample() = default;

  // Standardizes with `ls` and partitions. Throws diagonal_error (carrying
  // the offending index) if any pair has equal standardized components.
  static BivariateSample partition(std::span<const PointPair> raw,
                                   const LocationScale& ls = {});

  std::size_t size() const { return pairs_.size(); }
  std::size_t m1() const { return below_.size(); }
  std::size_t m2() const { return above_.size(); }

  const std::vector<PointPair>& pairs() const { return pairs_; }
  const std::vector<std::size_t>& below() const { return below_; }  // y1 < y2
  const std::vector<std::size_t>& above() const { return above_; }  // y1 > y2

  RegionTag region(std::size_t i) const { return region_[i]; }
  double log1p_y1(std::size_t i) const { return l1_[i]; }
  double log1p_y2(std::size_t i) const { return l2_[i]; }

 private:
  std::vector<PointPair> pairs_;  // standardized coordinates
  std::vector<RegionTag> region_;
  std::vector<double> l1_, l2_;
  std::vector<std::size_t> below_, above_;
};

}  // namespace bvpareto

#endif
