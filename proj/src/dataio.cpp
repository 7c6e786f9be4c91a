#include "bvpareto/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bvpareto/dist.hpp"

namespace bvpareto {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

const std::vector<std::string>& abalone_columns() {
  static const std::vector<std::string> cols = {
      "Sex",          "Length",        "Diameter",
      "Height",       "WholeWeight",   "ShuckedWeight",
      "VisceraWeight", "ShellWeight",  "Rings"};
  return cols;
}

std::string column_list(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) s += ", ";
    s += cols[i];
  }
  return s;
}

// Name lookup, or a 1-based index written in digits.
std::size_t resolve_column(const RawTable& t, const std::string& ref) {
  if (!ref.empty() &&
      std::all_of(ref.begin(), ref.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    const std::size_t idx = std::strtoull(ref.c_str(), nullptr, 10);
    if (idx < 1 || idx > t.columns.size())
      throw schema_error("column index " + ref + " out of range 1.." +
                         std::to_string(t.columns.size()));
    return idx - 1;
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == ref) return i;
  throw schema_error("no column named '" + ref +
                     "'; available: " + column_list(t.columns));
}

}  // namespace

RawTable read_table(const std::string& path, SchemaMode mode) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");

  RawTable t;
  std::string line;
  std::size_t lineno = 0;
  bool saw_first = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::vector<std::string> cells = split_csv(line);

    if (!saw_first) {
      saw_first = true;
      bool header;
      switch (mode) {
        case SchemaMode::Header:
          header = true;
          break;
        case SchemaMode::Positional:
        case SchemaMode::Abalone:
          header = false;
          break;
        default: {  // Auto: any non-numeric first-row cell means header
          double d;
          header = std::any_of(
              cells.begin(), cells.end(),
              [&](const std::string& c) { return !parse_double(c, d); });
          break;
        }
      }
      if (mode == SchemaMode::Abalone) {
        t.columns = abalone_columns();
        if (cells.size() != t.columns.size())
          throw schema_error("abalone preset expects " +
                             std::to_string(t.columns.size()) +
                             " columns, found " +
                             std::to_string(cells.size()) + " on line " +
                             std::to_string(lineno));
      } else if (header) {
        t.columns = cells;
        continue;
      } else {
        t.columns.resize(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
          t.columns[i] = std::to_string(i + 1);
      }
    }
    if (cells.size() != t.columns.size())
      throw parse_error("expected " + std::to_string(t.columns.size()) +
                            " cells, found " + std::to_string(cells.size()),
                        lineno);
    t.rows.push_back(std::move(cells));
    t.lines.push_back(lineno);
  }
  if (!saw_first) throw schema_error("'" + path + "' has no data");
  return t;
}

std::vector<PointPair> read_pairs(const std::string& path,
                                  const std::string& col1,
                                  const std::string& col2,
                                  const ReadOptions& opts) {
  const RawTable t = read_table(path, opts.schema);
  const std::size_t c1 = resolve_column(t, col1);
  const std::size_t c2 = resolve_column(t, col2);
  std::size_t cf = 0;
  const bool filtered = !opts.filter_column.empty();
  if (filtered) cf = resolve_column(t, opts.filter_column);

  std::vector<PointPair> pairs;
  pairs.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (filtered && t.rows[r][cf] != opts.filter_value) continue;
    PointPair p;
    if (!parse_double(t.rows[r][c1], p.y1))
      throw parse_error("cell '" + t.rows[r][c1] + "' in column " + col1 +
                            " is not numeric",
                        t.lines[r]);
    if (!parse_double(t.rows[r][c2], p.y2))
      throw parse_error("cell '" + t.rows[r][c2] + "' in column " + col2 +
                            " is not numeric",
                        t.lines[r]);
    pairs.push_back(p);
  }
  return pairs;
}

PotResult pot_transform(std::span<const PointPair> pairs,
                        const PotConfig& cfg) {
  if (!std::isfinite(cfg.threshold1) || !std::isfinite(cfg.threshold2))
    throw domain_error("pot_transform: thresholds must be finite");
  PotResult res;
  res.input_count = pairs.size();
  for (const PointPair& p : pairs)
    if (p.y1 > cfg.threshold1 && p.y2 > cfg.threshold2)
      res.excesses.push_back({p.y1 - cfg.threshold1, p.y2 - cfg.threshold2});
  res.retained = res.excesses.size();
  return res;
}

std::vector<SurvivalPoint> empirical_survival(std::vector<double> values) {
  if (values.empty()) throw domain_error("empirical_survival: empty input");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::vector<SurvivalPoint> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.push_back({values[i], static_cast<double>(values.size() - i - 1) / n});
  }
  return out;
}

std::vector<GridCell> density_grid(const ModelParams& p, const GridSpec& g) {
  validate(p);
  if (g.steps1 < 2 || g.steps2 < 2)
    throw domain_error("density_grid: steps must be >= 2");
  if (!(g.y1_max > g.y1_min) || !(g.y2_max > g.y2_min))
    throw domain_error("density_grid: box must have positive extent");

  std::vector<GridCell> cells;
  cells.reserve(g.steps1 * g.steps2);
  const double d1 = (g.y1_max - g.y1_min) / static_cast<double>(g.steps1 - 1);
  const double d2 = (g.y2_max - g.y2_min) / static_cast<double>(g.steps2 - 1);
  for (std::size_t i = 0; i < g.steps1; ++i) {
    const double y1 = g.y1_min + static_cast<double>(i) * d1;
    for (std::size_t j = 0; j < g.steps2; ++j) {
      const double y2 = g.y2_min + static_cast<double>(j) * d2;
      GridCell c{y1, y2, 0.0, false};
      if (standardize({y1, y2}, p.loc_scale).region == RegionTag::Diagonal)
        c.diagonal = true;
      else
        c.density = pdf_gbb({y1, y2}, p);
      cells.push_back(c);
    }
  }
  return cells;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string pairs_to_csv(std::span<const PointPair> pairs) {
  std::string s = "y1,y2\n";
  for (const PointPair& p : pairs)
    s += format_double(p.y1) + "," + format_double(p.y2) + "\n";
  return s;
}

std::string grid_to_csv(std::span<const GridCell> cells) {
  std::string s = "y1,y2,density\n";
  for (const GridCell& c : cells) {
    s += format_double(c.y1) + "," + format_double(c.y2) + ",";
    s += c.diagonal ? "NA" : format_double(c.density);
    s += "\n";
  }
  return s;
}

std::string survival_to_csv(std::span<const SurvivalPoint> points) {
  std::string s = "# empirical survival: fraction of sample strictly above y,"
                  " right-continuous step\ny,survival\n";
  for (const SurvivalPoint& p : points)
    s += format_double(p.y) + "," + format_double(p.survival) + "\n";
  return s;
}

}  // namespace bvpareto
