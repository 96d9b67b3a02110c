#include "gln/records.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gln/error.hpp"

namespace gln {
namespace {

constexpr const char* kHeader =
    "task,dataset_or_problem,model,architecture,seed,test_mse,epochs_run,"
    "alpha_1,alpha_2,wall_time_s,status";
constexpr std::size_t kColumns = 11;

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

struct FieldReader {
  const std::string& source;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source + " line " + std::to_string(line) + ": " + what);
  }

  double real(const std::string& s, const char* column) const {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      fail(std::string("bad ") + column + " value '" + s + "'");
    }
    return v;
  }

  std::uint64_t integer(const std::string& s, const char* column) const {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail(std::string("bad ") + column + " value '" + s + "'");
    }
    return v;
  }
};

}  // namespace

std::string run_records_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const RunRecord& r : records) {
    if (r.alphas.size() > 2) {
      throw StructuralError("run record: at most two alpha columns are supported");
    }
    out << r.task << ',' << r.dataset_or_problem << ',' << r.model << ','
        << r.architecture << ',' << r.seed << ',' << real(r.test_mse) << ','
        << r.epochs_run << ',' << (r.alphas.size() > 0 ? real(r.alphas[0]) : "NA") << ','
        << (r.alphas.size() > 1 ? real(r.alphas[1]) : "NA") << ','
        << (r.wall_time ? real(*r.wall_time) : "NA") << ',' << r.status << '\n';
  }
  return out.str();
}

void write_run_records(const std::vector<RunRecord>& records, const std::string& path) {
  const std::string text = run_records_csv(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed for " + path);
}

std::vector<RunRecord> parse_run_records(const std::string& text,
                                         const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty run-record file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw DataError(source + ": unexpected run-record header");

  std::vector<RunRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const FieldReader rd{source, line_no};
    const auto f = split_fields(line);
    if (f.size() != kColumns) {
      rd.fail("expected " + std::to_string(kColumns) + " fields, got " +
              std::to_string(f.size()));
    }
    RunRecord r;
    r.task = f[0];
    r.dataset_or_problem = f[1];
    r.model = f[2];
    r.architecture = f[3];
    r.seed = rd.integer(f[4], "seed");
    r.test_mse = rd.real(f[5], "test_mse");
    r.epochs_run = rd.integer(f[6], "epochs_run");
    if (f[7] != "NA") r.alphas.push_back(rd.real(f[7], "alpha_1"));
    if (f[8] != "NA") {
      if (r.alphas.empty()) rd.fail("alpha_2 present without alpha_1");
      r.alphas.push_back(rd.real(f[8], "alpha_2"));
    }
    if (f[9] != "NA") r.wall_time = rd.real(f[9], "wall_time_s");
    r.status = f[10];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> read_run_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_records(ss.str(), path);
}

}  // namespace gln
