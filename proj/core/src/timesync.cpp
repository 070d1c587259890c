#include "spincam/timesync.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "spincam/config.hpp"
#include "spincam/errors.hpp"

namespace spincam {

void GyroSequence::validate() const {
  if (t.size() != rate.size()) {
    throw InvalidArgument("gyro timestamps and samples differ in length");
  }
  if (t.size() < 3) {
    throw InvalidArgument("gyro sequence needs at least three samples");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw InvalidArgument("gyro timestamps must be strictly increasing");
    }
  }
}

double GyroSequence::sample_period() const {
  std::vector<double> dt;
  dt.reserve(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) dt.push_back(t[i] - t[i - 1]);
  std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
  return dt[dt.size() / 2];
}

Vec3 GyroSequence::at(double q) const {
  auto it = std::lower_bound(t.begin(), t.end(), q);
  if (it == t.end()) return rate.back();
  const auto hi = static_cast<std::size_t>(it - t.begin());
  if (hi == 0 || t[hi] == q) return rate[hi];
  const std::size_t lo = hi - 1;
  const double a = (q - t[lo]) / (t[hi] - t[lo]);
  return (1.0 - a) * rate[lo] + a * rate[hi];
}

namespace {

// Mean squared difference for one candidate offset, or NaN if the overlap is
// too short.
double score(const GyroSequence& a, const GyroSequence& b, double offset) {
  const double lo = b.t.front() - offset;
  const double hi = b.t.back() - offset;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    if (a.t[i] < lo || a.t[i] > hi) continue;
    sum += (a.rate[i] - b.at(a.t[i] + offset)).squaredNorm();
    ++count;
  }
  if (count < 3 || 2 * count < a.t.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sum / static_cast<double>(count);
}

}  // namespace

TimeOffset estimate_time_offset(const GyroSequence& a, const GyroSequence& b, double window) {
  a.validate();
  b.validate();
  if (!(window >= 0.0)) {
    throw InvalidArgument("search window must be non-negative");
  }
  const double step = a.sample_period();
  const auto half = static_cast<long>(std::floor(window / step + 1e-9));
  const std::size_t n = static_cast<std::size_t>(2 * half + 1);

  std::vector<double> costs(n);
  std::size_t best = n;
  for (std::size_t k = 0; k < n; ++k) {
    const double offset = (static_cast<long>(k) - half) * step;
    costs[k] = score(a, b, offset);
    if (!std::isnan(costs[k]) && (best == n || costs[k] < costs[best])) {
      best = k;
    }
  }
  if (best == n) {
    throw InsufficientOverlap();
  }

  TimeOffset result;
  result.step = step;
  result.grid_offset = (static_cast<long>(best) - half) * step;
  result.cost = costs[best];
  result.offset = result.grid_offset;
  if (best > 0 && best + 1 < n && !std::isnan(costs[best - 1]) && !std::isnan(costs[best + 1])) {
    const double left = costs[best - 1];
    const double mid = costs[best];
    const double right = costs[best + 1];
    const double denom = left - 2.0 * mid + right;
    if (denom > 0.0) {
      const double shift = 0.5 * (left - right) / denom;
      result.offset += std::clamp(shift, -0.5, 0.5) * step;
    }
  }
  return result;
}

GyroSequence read_gyro_csv(std::istream& in) {
  GyroSequence seq;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number == 1) {
      if (line != "t,wx,wy,wz") throw ParseError("expected header 't,wx,wy,wz'", number);
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> v;
    try {
      v = parse_real_list(line);
    } catch (const InvalidConfig&) {
      throw ParseError("malformed gyro row", number);
    }
    if (v.size() != 4) throw ParseError("expected 4 columns", number);
    if (!seq.t.empty() && !(v[0] > seq.t.back())) {
      throw ParseError("timestamps must be strictly increasing", number);
    }
    seq.t.push_back(v[0]);
    seq.rate.emplace_back(v[1], v[2], v[3]);
  }
  if (number == 0) throw ParseError("empty gyro log", 0);
  return seq;
}

GyroSequence read_gyro_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_gyro_csv(in);
}

void write_gyro_csv(const GyroSequence& seq, std::ostream& out) {
  out << "t,wx,wy,wz\n";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out << format_real(seq.t[i]) << ',' << format_real(seq.rate[i].x()) << ','
        << format_real(seq.rate[i].y()) << ',' << format_real(seq.rate[i].z()) << '\n';
  }
}

}  // namespace spincam
