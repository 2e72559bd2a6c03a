#include "qdefcs/scan.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace qdefcs::scan {

const char* observable_name(Observable o) {
  switch (o) {
    case Observable::Mandel: return "mandel";
    case Observable::MetricFactor: return "metric";
    case Observable::VarianceRatio: return "ratio";
    case Observable::Snr: return "snr";
  }
  return "?";
}

std::vector<double> ScanResult::cells(const GridRow& row) const {
  std::vector<double> out;
  out.reserve(columns.size());
  for (const std::string& c : columns) {
    if (c == "q") out.push_back(row.q);
    else if (c == "t") out.push_back(row.t);
    else if (c == "x") out.push_back(row.x);
    else if (c == "y") out.push_back(row.y);
    else if (c == "value") out.push_back(row.value);
    else if (c == "bound") out.push_back(row.bound);
    else if (c == "error_bound") out.push_back(row.error_bound);
    else throw std::invalid_argument("unknown column: " + c);
  }
  return out;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  unsigned n_workers = threads != 0 ? threads
                                    : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, count));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

void validate(const ScanConfig& cfg) {
  if (cfg.q_list.empty()) throw std::invalid_argument("q_list: must not be empty");
  if (cfg.t_count < 2) throw std::invalid_argument("t_count: must be >= 2");
  if (!(cfg.t_start >= 0.0) || !std::isfinite(cfg.t_start)) {
    throw std::invalid_argument("t_start: must be finite and >= 0");
  }
  if (!(cfg.t_stop > cfg.t_start) || !std::isfinite(cfg.t_stop)) {
    throw std::invalid_argument("t_stop: must be finite and > t_start");
  }
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance: must be > 0");
  if (!(cfg.disc_guard > 0.0) || !(cfg.disc_guard <= 1.0)) {
    throw std::invalid_argument("disc_guard: must lie in (0, 1]");
  }
  double min_radius = std::numeric_limits<double>::infinity();
  for (double q : cfg.q_list) {
    const DeformationParameter dp(q);  // throws invalid_argument for q <= 0
    min_radius = std::min(min_radius, radius_of_convergence(dp));
  }
  if (cfg.t_stop >= cfg.disc_guard * min_radius) {
    std::ostringstream os;
    os << "t_stop = " << cfg.t_stop << " escapes the disc guard ("
       << cfg.disc_guard << " x radius " << min_radius << " over q_list)";
    throw OutOfDiscError(os.str());
  }
}

double pick_value(const ObservableReport& rep, Observable o) {
  switch (o) {
    case Observable::Mandel: return rep.mandel_q;
    case Observable::MetricFactor: return rep.metric_omega;
    case Observable::VarianceRatio: return rep.ratio_r;
    case Observable::Snr: return rep.snr_sigma;
  }
  return 0.0;
}

}  // namespace

ScanResult scan_t(const ScanConfig& cfg) {
  validate(cfg);

  struct Point {
    double q;
    double t;
  };
  std::vector<Point> grid;
  grid.reserve(cfg.q_list.size() * cfg.t_count);
  const double step = (cfg.t_stop - cfg.t_start) / static_cast<double>(cfg.t_count - 1);
  for (double q : cfg.q_list) {
    for (std::size_t i = 0; i < cfg.t_count; ++i) {
      const double t = cfg.t_start + static_cast<double>(i) * step;
      if (t == 0.0 && cfg.observable == Observable::Mandel) continue;
      grid.push_back({q, t});
    }
  }

  std::vector<GridRow> rows(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    const DeformationParameter dp(grid[i].q);
    const double root = std::sqrt(grid[i].t);
    const std::complex<double> z = cfg.phase == Phase::RealZ
                                       ? std::complex<double>(root, 0.0)
                                       : std::complex<double>(0.0, root);
    const ObservableReport rep = report_at(dp, z, cfg.tolerance, cfg.disc_guard);
    GridRow& row = rows[i];
    row.q = grid[i].q;
    row.t = grid[i].t;
    row.value = pick_value(rep, cfg.observable);
    row.error_bound = rep.error_bound;
  });

  ScanResult result;
  result.columns = {"q", "t", "value", "error_bound"};
  result.rows = std::move(rows);
  return result;
}

ScanResult scan_z(const DeformationParameter& dp, std::size_t nr, std::size_t nphi,
                  double tolerance, double guard, double t_max, unsigned threads) {
  if (nr < 2) throw std::invalid_argument("nr: must be >= 2");
  if (nphi < 2) throw std::invalid_argument("nphi: must be >= 2");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance: must be > 0");
  if (!(guard > 0.0) || !(guard <= 1.0)) {
    throw std::invalid_argument("disc_guard: must lie in (0, 1]");
  }

  // The guard scales the |z| radius of the disc, so the grid stays within
  // t = guard^2 * radius.
  const double radius = radius_of_convergence(dp);
  double grid_t_max;
  if (std::isfinite(radius)) {
    grid_t_max = guard * guard * radius;
    if (t_max > 0.0) {
      if (t_max > grid_t_max) {
        std::ostringstream os;
        os << "t_max = " << t_max << " escapes the disc guard (" << guard
           << "^2 x radius " << radius << ")";
        throw OutOfDiscError(os.str());
      }
      grid_t_max = t_max;
    }
  } else {
    grid_t_max = t_max > 0.0 ? t_max : 4.0;
  }
  const double r_max = std::sqrt(grid_t_max);

  std::vector<GridRow> rows(nr * nphi);
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t j = idx / nr;  // ray index (phi-major)
    const std::size_t i = idx % nr;
    const double phi = (std::numbers::pi / 2.0) * static_cast<double>(j) /
                       static_cast<double>(nphi - 1);
    const double r = r_max * static_cast<double>(i) / static_cast<double>(nr - 1);
    const std::complex<double> z = std::polar(r, phi);
    const ObservableReport rep = report_at(dp, z, tolerance, 1.0);
    GridRow& row = rows[idx];
    row.q = dp.q;
    row.x = z.real();
    row.y = z.imag();
    row.t = std::norm(z);
    row.value = rep.snr_sigma;
    row.bound = 4.0 * rep.mean_n;
    row.error_bound = rep.error_bound;
  });

  ScanResult result;
  result.columns = {"q", "x", "y", "value", "bound", "error_bound"};
  result.rows = std::move(rows);
  return result;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const ScanResult& result, std::ostream& out) {
  out << "# schema=" << kSchemaTag << "\n";
  for (std::size_t c = 0; c < result.columns.size(); ++c) {
    if (c) out << ',';
    out << result.columns[c];
  }
  out << '\n';
  for (const GridRow& row : result.rows) {
    const std::vector<double> cells = result.cells(row);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << ',';
      out << format_double(cells[c]);
    }
    out << '\n';
  }
}

std::string to_csv(const ScanResult& result) {
  std::ostringstream os;
  write_csv(result, os);
  return os.str();
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

ScanResult read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != std::string("# schema=") + kSchemaTag) {
    throw std::invalid_argument("missing or unsupported schema line");
  }
  if (!std::getline(in, line)) throw std::invalid_argument("missing CSV header line");
  ScanResult result;
  result.columns = split_fields(line);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != result.columns.size()) {
      throw std::invalid_argument("row width does not match the header");
    }
    GridRow row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = std::strtod(fields[c].c_str(), nullptr);
      const std::string& name = result.columns[c];
      if (name == "q") row.q = v;
      else if (name == "t") row.t = v;
      else if (name == "x") row.x = v;
      else if (name == "y") row.y = v;
      else if (name == "value") row.value = v;
      else if (name == "bound") row.bound = v;
      else if (name == "error_bound") row.error_bound = v;
      else throw std::invalid_argument("unknown column: " + name);
    }
    result.rows.push_back(row);
  }
  return result;
}

std::string to_json(const ScanResult& result) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaTag;
  j["columns"] = result.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const GridRow& row : result.rows) {
    rows.push_back(result.cells(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace qdefcs::scan
