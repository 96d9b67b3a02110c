#include "gln/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "gln/error.hpp"

namespace gln::data {

double ees(double x, const EesParams& p) {
  if (!(p.sigma > 0.0)) throw StructuralError("ees: sigma must be positive");
  const double two_var = 2.0 * p.sigma * p.sigma;
  const double d = x - p.a;
  return p.e1 * std::exp(-d * d / two_var) + p.e2 * std::exp(-x * x / two_var) +
         std::sin(p.omega * x);
}

double se(double x, const SeParams& p) {
  if (!(p.sigma > 0.0)) throw StructuralError("se: sigma must be positive");
  return p.e1 * std::sin(p.omega * x) * std::exp(-x * x / (2.0 * p.sigma * p.sigma));
}

std::vector<Sample> sample_domain(std::size_t n, double lo, double hi,
                                  const std::function<double(double)>& f) {
  if (n < 2 || !(lo < hi)) {
    throw StructuralError("sample_domain: need n >= 2 and lo < hi");
  }
  std::vector<Sample> out;
  out.reserve(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + 1 == n ? hi : lo + step * static_cast<double>(i);
    out.push_back({x, f(x)});
  }
  return out;
}

SunspotFile parse_sunspot(const std::string& text) {
  SunspotFile file;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ';', ' ');
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    SunspotRecord r;
    if (!(fields >> r.year >> r.count)) {
      throw DataError("sunspot file line " + std::to_string(line_no) +
                      ": expected year and count");
    }
    if (r.count == -1.0) {
      ++file.skipped_missing;
      continue;
    }
    file.records.push_back(r);
  }
  if (file.records.empty()) throw DataError("sunspot file has no usable records");
  return file;
}

SunspotFile load_sunspot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read sunspot file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sunspot(ss.str());
}

Sample SunspotScaling::forward(const SunspotRecord& r) const {
  return {2.0 * (r.year - year_min) / (year_max - year_min) - 1.0,
          (r.count - count_min) / (count_max - count_min)};
}

SunspotRecord SunspotScaling::inverse(const Sample& s) const {
  return {year_min + (s.x + 1.0) * 0.5 * (year_max - year_min),
          count_min + s.y * (count_max - count_min)};
}

NormalizedSunspots normalize_sunspot(std::span<const SunspotRecord> records) {
  if (records.empty()) throw StructuralError("normalize_sunspot: no records");
  SunspotScaling s{records[0].year, records[0].year, records[0].count, records[0].count};
  for (const auto& r : records) {
    s.year_min = std::min(s.year_min, r.year);
    s.year_max = std::max(s.year_max, r.year);
    s.count_min = std::min(s.count_min, r.count);
    s.count_max = std::max(s.count_max, r.count);
  }
  if (s.year_min == s.year_max || s.count_min == s.count_max) {
    throw StructuralError("normalize_sunspot: degenerate year or count range");
  }
  NormalizedSunspots out{{}, s};
  out.samples.reserve(records.size());
  for (const auto& r : records) out.samples.push_back(s.forward(r));
  return out;
}

DataSplit split(std::span<const Sample> data, std::uint64_t seed) {
  if (data.size() < 4) throw StructuralError("split: need at least 4 points");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n = static_cast<double>(data.size());
  const auto n_train = static_cast<std::size_t>(std::lround(0.5 * n));
  const auto n_val = static_cast<std::size_t>(std::lround(0.25 * n));

  DataSplit out;
  out.split_seed = seed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Sample& s = data[order[i]];
    if (i < n_train) {
      out.train.push_back(s);
    } else if (i < n_train + n_val) {
      out.validation.push_back(s);
    } else {
      out.test.push_back(s);
    }
  }
  return out;
}

void write_samples_csv(std::span<const Sample> samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "x,y\n";
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.x, s.y);
    out << buf;
  }
}

std::vector<Sample> read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y", 0) != 0) {
    throw DataError(path + ": missing x,y header");
  }
  std::vector<Sample> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Sample s;
    char comma = 0;
    std::istringstream fields(line);
    if (!(fields >> s.x >> comma >> s.y) || comma != ',') {
      throw DataError(path + " line " + std::to_string(line_no) + ": malformed record");
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace gln::data
