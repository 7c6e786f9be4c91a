#ifndef BVPARETO_DATAIO_HPP
#define BVPARETO_DATAIO_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bvpareto/params.hpp"

namespace bvpareto {

// CSV ingestion, peak-over-threshold preprocessing, empirical survival
// tables, and density-grid emission. Files are comma-separated UTF-8;
// lines starting with '#' and blank lines are skipped.

// How the first data line is interpreted.
enum class SchemaMode {
  Auto,        // header iff the first row has a non-numeric cell
  Header,      // first row is the header
  Positional,  // no header; columns named "1".."K"
  Abalone,     // headerless 9-column preset with the canonical names
};

struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row
};

struct ReadOptions {
  SchemaMode schema = SchemaMode::Auto;
  std::string filter_column;  // empty: keep all rows
  std::string filter_value;
};

// Column references are names, or 1-based indices written as digits.
RawTable read_table(const std::string& path,
                    SchemaMode mode = SchemaMode::Auto);
std::vector<PointPair> read_pairs(const std::string& path,
                                  const std::string& col1,
                                  const std::string& col2,
                                  const ReadOptions& opts = {});

struct PotConfig {
  double threshold1 = 0.0;
  double threshold2 = 0.0;
};

struct PotResult {
  std::vector<PointPair> excesses;  // (y1-t1, y2-t2) where both exceed
  std::size_t input_count = 0;
  std::size_t retained = 0;
};

// Strict both-components-exceed peak-over-threshold; outputs the excesses.
PotResult pot_transform(std::span<const PointPair> pairs,
                        const PotConfig& cfg);

struct SurvivalPoint {
  double y = 0.0;
  double survival = 0.0;  // fraction of the sample strictly above y
};

// One row per distinct observed value, ascending; between observed values
// the function is the right-continuous step through these points.
std::vector<SurvivalPoint> empirical_survival(std::vector<double> values);

struct GridSpec {
  double y1_min = 0.0, y1_max = 1.0;
  double y2_min = 0.0, y2_max = 1.0;
  std::size_t steps1 = 2, steps2 = 2;  // points per axis, >= 2
};

struct GridCell {
  double y1 = 0.0, y2 = 0.0;
  double density = 0.0;
  bool diagonal = false;  // equal standardized coordinates: no density
};

// Row-major pdf_gbb evaluation over the grid (y2 varies fastest).
std::vector<GridCell> density_grid(const ModelParams& p, const GridSpec& g);

// Serializers used by the CLI and tests.
std::string pairs_to_csv(std::span<const PointPair> pairs);
std::string grid_to_csv(std::span<const GridCell> cells);  // "NA" diagonal
std::string survival_to_csv(std::span<const SurvivalPoint> points);

}  // namespace bvpareto

#endif
