#include "gln/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gln/deq.hpp"
#include "gln/error.hpp"

namespace gln {

std::string_view to_string(TaskKind t) {
  return t == TaskKind::Regression ? "regression" : "deq";
}

std::string_view to_string(Architecture a) {
  return a == Architecture::OneHidden ? "one_hidden" : "two_hidden";
}

TaskKind parse_task(std::string_view s) {
  if (s == "regression") return TaskKind::Regression;
  if (s == "deq") return TaskKind::Deq;
  throw ConfigError("unknown task '" + std::string(s) + "' (expected regression or deq)");
}

Architecture parse_architecture(std::string_view s) {
  if (s == "one_hidden") return Architecture::OneHidden;
  if (s == "two_hidden") return Architecture::TwoHidden;
  throw ConfigError("unknown architecture '" + std::string(s) +
                    "' (expected one_hidden or two_hidden)");
}

std::size_t ExperimentSpec::input_dim() const {
  return task == TaskKind::Regression ? 1 : deq::problem_by_name(target).input_dim;
}

NetworkShape ExperimentSpec::shape() const {
  return architecture == Architecture::OneHidden ? NetworkShape::one_hidden(input_dim())
                                                 : NetworkShape::two_hidden(input_dim());
}

void ExperimentSpec::validate() const {
  if (task == TaskKind::Regression) {
    if (target != "ees" && target != "se" && target != "sunspot") {
      throw ConfigError("unknown data set '" + target + "' (expected ees, se or sunspot)");
    }
    if (target == "sunspot" && data_path.empty()) {
      throw ConfigError("sunspot experiments need [data] path");
    }
    if (target != "sunspot" && (points < 4 || !(lo < hi))) {
      throw ConfigError("[data] needs points >= 4 and lo < hi");
    }
  } else {
    try {
      deq::problem_by_name(target);
    } catch (const StructuralError& e) {
      throw ConfigError(e.what());
    }
    if (collocation < 2) throw ConfigError("[deq] collocation must be >= 2");
  }
  if (repetitions < 1) throw ConfigError("[experiment] repetitions must be >= 1");
  try {
    train.validate();
  } catch (const StructuralError& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Config files.

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"task", "target", "model", "architecture", "repetitions", "base_seed"}},
      {"data", {"points", "lo", "hi", "path"}},
      {"train", {"learning_rate", "batch_size", "max_epochs", "patience"}},
      {"deq", {"collocation", "epochs", "batch_size"}},
  };
  return keys;
}

template <class T>
T get_value(const pt::ptree& tree, const std::string& key, T fallback,
            const std::string& source) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '/'));
  if (!node) return fallback;
  const std::string raw = node->get_value<std::string>();
  std::istringstream in(raw);
  T value{};
  if constexpr (std::is_unsigned_v<T>) {
    if (!raw.empty() && raw[0] == '-') {
      throw ConfigError(source + ": " + key + " must be non-negative");
    }
  }
  if (!(in >> value) || !(in >> std::ws).eof()) {
    throw ConfigError(source + ": bad value '" + raw + "' for " + key);
  }
  return value;
}

std::string get_string(const pt::ptree& tree, const std::string& key,
                       const std::string& fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '/'));
  return node ? node->get_value<std::string>() : fallback;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text, const std::string& source) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) +
                      ")");
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      throw ConfigError(source + ": unknown section [" + section + "]");
    }
    if (body.empty()) {
      throw ConfigError(source + ": key '" + section + "' outside a section");
    }
    for (const auto& kv : body) {
      if (!it->second.count(kv.first)) {
        throw ConfigError(source + ": unknown key '" + kv.first + "' in [" + section + "]");
      }
    }
  }

  ExperimentSpec s;
  s.task = parse_task(get_string(tree, "experiment/task", "regression"));
  s.target = get_string(tree, "experiment/target", s.target);
  try {
    s.model = parse_model_kind(get_string(tree, "experiment/model", "gln"));
  } catch (const StructuralError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  s.architecture = parse_architecture(get_string(tree, "experiment/architecture", "one_hidden"));
  s.repetitions = get_value<std::size_t>(tree, "experiment/repetitions", s.repetitions, source);
  s.base_seed = get_value<std::uint64_t>(tree, "experiment/base_seed", s.base_seed, source);

  s.points = get_value<std::size_t>(tree, "data/points", s.points, source);
  s.lo = get_value<double>(tree, "data/lo", s.lo, source);
  s.hi = get_value<double>(tree, "data/hi", s.hi, source);
  s.data_path = get_string(tree, "data/path", "");

  s.train.learning_rate =
      get_value<double>(tree, "train/learning_rate", s.train.learning_rate, source);
  s.train.batch_size = get_value<std::size_t>(tree, "train/batch_size", s.train.batch_size, source);
  s.train.max_epochs = get_value<std::size_t>(tree, "train/max_epochs", s.train.max_epochs, source);
  s.train.patience = get_value<std::size_t>(tree, "train/patience", s.train.patience, source);

  s.collocation = get_value<std::size_t>(tree, "deq/collocation", s.collocation, source);
  s.epochs = get_value<std::size_t>(tree, "deq/epochs", s.epochs, source);
  s.deq_batch_size =
      get_value<std::size_t>(tree, "deq/batch_size", s.deq_batch_size, source);

  s.validate();
  return s;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentSpec s = parse_spec(ss.str(), path);
  // Relative data paths are resolved against the config file's directory.
  if (!s.data_path.empty() && s.data_path.front() != '/') {
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos) s.data_path = path.substr(0, slash + 1) + s.data_path;
  }
  return s;
}

std::string spec_to_ini(const ExperimentSpec& s) {
  std::ostringstream out;
  out.precision(17);
  out << "[experiment]\n"
      << "task = " << to_string(s.task) << "\n"
      << "target = " << s.target << "\n"
      << "model = " << to_string(s.model) << "\n"
      << "architecture = " << to_string(s.architecture) << "\n"
      << "repetitions = " << s.repetitions << "\n"
      << "base_seed = " << s.base_seed << "\n";
  if (s.task == TaskKind::Regression) {
    out << "\n[data]\n";
    if (s.target == "sunspot") {
      out << "path = " << s.data_path << "\n";
    } else {
      out << "points = " << s.points << "\n"
          << "lo = " << s.lo << "\n"
          << "hi = " << s.hi << "\n";
    }
    out << "\n[train]\n"
        << "learning_rate = " << s.train.learning_rate << "\n"
        << "batch_size = " << s.train.batch_size << "\n"
        << "max_epochs = " << s.train.max_epochs << "\n"
        << "patience = " << s.train.patience << "\n";
  } else {
    out << "\n[train]\n"
        << "learning_rate = " << s.train.learning_rate << "\n"
        << "\n[deq]\n"
        << "collocation = " << s.collocation << "\n"
        << "epochs = " << (s.epochs ? s.epochs : deq::problem_by_name(s.target).epochs)
        << "\n"
        << "batch_size = " << s.deq_batch_size << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Runs.

namespace {

std::vector<double> xs_of(const std::vector<data::Sample>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.x);
  return out;
}

std::vector<double> ys_of(const std::vector<data::Sample>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.y);
  return out;
}

std::vector<data::Sample> regression_data(const ExperimentSpec& spec) {
  if (spec.target == "ees") {
    return data::sample_domain(spec.points, spec.lo, spec.hi,
                               [](double x) { return data::ees(x); });
  }
  if (spec.target == "se") {
    return data::sample_domain(spec.points, spec.lo, spec.hi,
                               [](double x) { return data::se(x); });
  }
  const auto file = data::load_sunspot(spec.data_path);
  return data::normalize_sunspot(file.records).samples;
}

RunRecord base_record(const ExperimentSpec& spec, std::uint64_t seed) {
  RunRecord r;
  r.task = std::string(to_string(spec.task));
  r.dataset_or_problem = spec.target;
  r.model = std::string(to_string(spec.model));
  r.architecture = std::string(to_string(spec.architecture));
  r.seed = seed;
  return r;
}

void fill_outcome(RunRecord& r, const TrainOutcome& outcome) {
  for (const AlphaEntry& a : outcome.best_net.alpha_values()) r.alphas.push_back(a.alpha);
  if (outcome.status != TrainStatus::Ok) {
    r.status = kStatusFailed;
    r.test_mse = std::numeric_limits<double>::quiet_NaN();
  }
}

SolveResult solve_impl(const ExperimentSpec& spec, std::uint64_t seed) {
  const deq::DeqProblem prob = deq::problem_by_name(spec.target);
  TrainConfig cfg = spec.train;
  cfg.seed = seed;
  cfg.max_epochs = spec.epochs ? spec.epochs : prob.epochs;
  cfg.early_stopping = false;
  const bool full_batch = spec.deq_batch_size == 0;
  if (!full_batch) cfg.batch_size = spec.deq_batch_size;
  const deq::ResidualObjective objective(
      prob, deq::make_collocation(prob, spec.collocation, seed), full_batch);
  TrainOutcome outcome = train(init(spec.shape(), spec.model, seed), objective, cfg);

  RunRecord r = base_record(spec, seed);
  r.epochs_run = outcome.epochs_run;
  r.status = prob.has_analytic ? kStatusFixedBudget : kStatusFixedBudgetResidual;
  if (outcome.status == TrainStatus::Ok) {
    r.test_mse = deq::eval_error(outcome.best_net, prob, deq::test_grid(prob)).value;
  }
  fill_outcome(r, outcome);
  return {std::move(outcome), std::move(r)};
}

RunRecord regression_run(const ExperimentSpec& spec, std::uint64_t seed) {
  const auto parts = data::split(regression_data(spec), seed);
  TrainConfig cfg = spec.train;
  cfg.seed = seed;
  const RegressionObjective objective(1, xs_of(parts.train), ys_of(parts.train),
                                      xs_of(parts.validation), ys_of(parts.validation));
  const TrainOutcome outcome = train(init(spec.shape(), spec.model, seed), objective, cfg);

  RunRecord r = base_record(spec, seed);
  r.epochs_run = outcome.epochs_run;
  if (outcome.status == TrainStatus::Ok) {
    r.test_mse = regression_mse(outcome.best_net, xs_of(parts.test), ys_of(parts.test));
  }
  fill_outcome(r, outcome);
  return r;
}

}  // namespace

SolveResult solve(const ExperimentSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.task != TaskKind::Deq) throw ConfigError("solve needs a deq experiment");
  return solve_impl(spec, seed);
}

RunRecord run_single(const ExperimentSpec& spec, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord r = spec.task == TaskKind::Regression ? regression_run(spec, seed)
                                                  : solve_impl(spec, seed).record;
  if (spec.timing) {
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, std::size_t jobs) {
  spec.validate();
  if (spec.task == TaskKind::Regression && spec.target == "sunspot") {
    data::load_sunspot(spec.data_path);  // fail before spawning workers
  }
  const std::size_t n = spec.repetitions;
  std::vector<RunRecord> records(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        records[i] = run_single(spec, spec.base_seed + i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    // Numeric breakdowns are part of the record; anything else is a bug or a
    // bad input and aborts the batch.
    try {
      std::rethrow_exception(errors[i]);
    } catch (const EvalError&) {
      records[i] = base_record(spec, spec.base_seed + i);
      records[i].status = kStatusFailed;
      records[i].test_mse = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Reports.

std::string records_label(const std::vector<RunRecord>& records) {
  if (records.empty()) throw StructuralError("records_label: no records");
  return records.front().model + ":" + records.front().architecture;
}

CompareReport compare(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b,
                      const std::string& metric) {
  if (a.size() < 2 || b.size() < 2) {
    throw StructuralError("compare: each side needs at least 2 records");
  }
  const auto va = stats::metric_values(a, metric);
  const auto vb = stats::metric_values(b, metric);
  CompareReport r;
  r.label_a = records_label(a);
  r.label_b = records_label(b);
  r.metric = metric;
  r.failed_a = a.size() - va.size();
  r.failed_b = b.size() - vb.size();
  r.stats_a = stats::describe(va);
  r.stats_b = stats::describe(vb);
  r.ks = stats::ks_two_sample(va, vb);
  return r;
}

std::string ks_csv_header() { return "model_a,model_b,metric,D,p,reject"; }

std::string ks_csv_row(const CompareReport& r) {
  return r.label_a + "," + r.label_b + "," + r.metric + "," +
         stats::format_real(r.ks.d_statistic) + "," + stats::format_real(r.ks.p_value) +
         "," + (r.ks.reject_at_5pct ? "yes" : "no");
}

namespace {

std::string stats_fields(const stats::SampleStats& s) {
  using stats::format_real;
  return std::to_string(s.n) + "," + format_real(s.min) + "," + format_real(s.max) + "," +
         format_real(s.mean) + "," + format_real(s.median) + "," + format_real(s.std) + "," +
         stats::format_optional(s.cv);
}

}  // namespace

std::string stats_csv(const std::vector<RunRecord>& records, const std::string& metric) {
  std::map<std::string, std::vector<RunRecord>> groups;
  std::vector<std::string> order;
  for (const RunRecord& r : records) {
    const std::string key =
        r.task + "," + r.dataset_or_problem + "," + r.model + "," + r.architecture;
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r);
  }
  std::string out =
      "task,dataset_or_problem,model,architecture,metric,n,min,max,mean,median,std,cv,failed\n";
  for (const std::string& key : order) {
    const auto& g = groups[key];
    const auto values = stats::metric_values(g, metric);
    // Fewer than two successful runs have no spread; report the count only.
    const std::string fields = values.size() >= 2
                                   ? stats_fields(stats::describe(values))
                                   : std::to_string(values.size()) + ",NA,NA,NA,NA,NA,NA";
    out += key + "," + metric + "," + fields + "," +
           std::to_string(g.size() - values.size()) + "\n";
  }
  return out;
}

std::string alphas_csv(const std::vector<stats::LayerAlphaStats>& layers) {
  std::string out = "layer,n,min,max,mean,median,std,cv\n";
  for (const auto& l : layers) {
    out += std::to_string(l.layer) + "," + stats_fields(l.stats) + "\n";
  }
  return out;
}

}  // namespace gln
