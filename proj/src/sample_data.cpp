#include "bvpareto/sample_data.hpp"

#include <cmath>
#include <string>

namespace bvpareto {

BivariateSample BivariateSample::partition(std::span<const PointPair> raw,
                                           const LocationScale& ls) {
  if (raw.empty()) throw domain_error("partition: empty dataset");
  validate(ls);

  BivariateSample out;
  out.pairs_.reserve(raw.size());
  out.region_.reserve(raw.size());
  out.l1_.reserve(raw.size());
  out.l2_.reserve(raw.size());

  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Standardized s = standardize(raw[i], ls);
    if (s.region == RegionTag::Diagonal)
      throw diagonal_error(
          "partition: pair " + std::to_string(i) +
              " has equal standardized components; the absolutely continuous "
              "law places no mass on the diagonal",
          i);
    if (!(s.y1 >= 0.0) || !(s.y2 >= 0.0))
      throw domain_error("partition: pair " + std::to_string(i) +
                         " has a negative standardized coordinate");
    out.pairs_.push_back(PointPair{s.y1, s.y2});
    out.region_.push_back(s.region);
    out.l1_.push_back(std::log1p(s.y1));
    out.l2_.push_back(std::log1p(s.y2));
    if (s.region == RegionTag::Below)
      out.below_.push_back(i);
    else
      out.above_.push_back(i);
  }
  return out;
}

}  // namespace bvpareto
