#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdefcs/observables.hpp"

namespace qdefcs::scan {

enum class Observable { Mandel, MetricFactor, VarianceRatio, Snr };

const char* observable_name(Observable o);

// Configuration of a t-parameterized scan. Defaults reproduce the bundled
// figure recipes: three q curves, 200 points on (0, 10].
struct ScanConfig {
  std::vector<double> q_list{0.98, 0.96, 0.94};
  double t_start = 0.05;
  double t_stop = 10.0;
  std::size_t t_count = 200;
  Phase phase = Phase::ImagZ;
  Observable observable = Observable::Mandel;
  double tolerance = 1e-10;
  double disc_guard = 0.9;
  unsigned threads = 0;  // 0 = hardware default (capped)
};

// One emitted point. scan_t fills (q, t); scan_z fills (q, x, y) and the
// companion bound column (4<N>_q).
struct GridRow {
  double q = 0.0;
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double error_bound = 0.0;
};

struct ScanResult {
  std::vector<std::string> columns;
  std::vector<GridRow> rows;
  // cells in column order, exactly what the CSV emits
  std::vector<double> cells(const GridRow& row) const;
};

// One row per (q, t), q-major in list order, t ascending. Mandel rows at
// t = 0 are dropped silently (the parameter is undefined at the vacuum).
// Throws std::invalid_argument naming the offending field for bad configs,
// OutOfDiscError if the grid escapes the guard.
ScanResult scan_t(const ScanConfig& config);

// Polar grid over the z disc: nr radii x nphi angles covering the first
// quadrant, ray-major. The radial extent is guard * (disc radius in |z|),
// i.e. t <= guard^2 * radius_of_convergence; pass t_max to restrict it
// further (required upper bound for q >= 1, where the default is t = 4).
// Rows carry (x, y, sigma_q, 4<N>_q, error_bound).
ScanResult scan_z(const DeformationParameter& dp, std::size_t nr, std::size_t nphi,
                  double tolerance = 1e-10, double guard = 0.9,
                  double t_max = 0.0, unsigned threads = 0);

// CSV with a versioned schema line, LF endings, 17 significant digits
// (numbers survive a parse/re-emit round trip byte-identically).
inline constexpr const char* kSchemaTag = "qdefcs/1";
void write_csv(const ScanResult& result, std::ostream& out);
std::string to_csv(const ScanResult& result);
ScanResult read_csv(std::istream& in);

std::string to_json(const ScanResult& result);

std::string format_double(double v);

// Deterministic index-addressed parallel map; results are identical for any
// worker count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace qdefcs::scan
