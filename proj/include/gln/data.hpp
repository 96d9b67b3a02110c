#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gln::data {

// Two Gaussians plus a sine: local bumps on a global wave.
struct EesParams {
  double e1 = 1.2;
  double e2 = 0.9;
  double a = 5.0;
  double sigma = 0.5;
  double omega = 1.0;
};

// Sine modulated by a Gaussian envelope.
struct SeParams {
  double e1 = 1.0;
  double sigma = 2.0;
  double omega = 6.0;
};

double ees(double x, const EesParams& p = {});
double se(double x, const SeParams& p = {});

struct Sample {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// n equispaced points on [lo, hi] (both ends included), paired with f(x).
std::vector<Sample> sample_domain(std::size_t n, double lo, double hi,
                                  const std::function<double(double)>& f);

struct SunspotRecord {
  double year = 0.0;
  double count = 0.0;
};

struct SunspotFile {
  std::vector<SunspotRecord> records;
  std::size_t skipped_missing = 0;  // records carrying the -1 sentinel
};

// Yearly sunspot numbers: one record per line, fields separated by ';' or
// whitespace, year and mean count first. Blank lines and lines starting with
// '#' are ignored.
SunspotFile load_sunspot(const std::string& path);
SunspotFile parse_sunspot(const std::string& text);

// Affine maps: years -> [-1, 1], counts -> [0, 1].
struct SunspotScaling {
  double year_min = 0.0;
  double year_max = 1.0;
  double count_min = 0.0;
  double count_max = 1.0;

  Sample forward(const SunspotRecord& r) const;
  SunspotRecord inverse(const Sample& s) const;
};

struct NormalizedSunspots {
  std::vector<Sample> samples;
  SunspotScaling scaling;
};

NormalizedSunspots normalize_sunspot(std::span<const SunspotRecord> records);

struct DataSplit {
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::vector<Sample> test;
  std::uint64_t split_seed = 0;
};

// Seeded uniform shuffle followed by a contiguous 50/25/25 partition.
DataSplit split(std::span<const Sample> data, std::uint64_t seed);

// CSV with header x,y.
void write_samples_csv(std::span<const Sample> samples, const std::string& path);
std::vector<Sample> read_samples_csv(const std::string& path);

}  // namespace gln::data
