#include "sparse_ridge/io.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sridge {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(ch);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

double parse_number(const std::string& cell, const std::string& path, std::size_t row) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw IoError(path + ": row " + std::to_string(row) + ": '" + cell + "' is not a number");
  }
  return v;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

RawTable read_table(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  RawTable table;
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split_row(line);
    if (first && header) {
      table.header = std::move(cells);
      width = table.header.size();
      first = false;
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw IoError(path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                    " fields, expected " + std::to_string(width));
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (const auto& c : cells) values.push_back(parse_number(c, path, row));
    table.rows.push_back(std::move(values));
    first = false;
  }
  if (in.bad()) throw IoError("error while reading " + path);
  if (table.rows.empty()) throw IoError(path + " contains no data rows");
  return table;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  return out;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path, const CsvOptions& opts) {
  const RawTable t = read_table(path, opts.header);
  const std::size_t width = t.rows.front().size();
  if (width < 2) throw InvalidArgument(path + " needs at least one feature column and a response column");

  std::size_t response = width - 1;
  if (opts.response_col != "last") {
    const std::string& r = opts.response_col;
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(r.data(), r.data() + r.size(), idx);
    if (ec == std::errc() && ptr == r.data() + r.size()) {
      response = idx;
    } else {
      auto it = std::find(t.header.begin(), t.header.end(), r);
      if (it == t.header.end()) throw InvalidArgument("response column '" + r + "' not found in header");
      response = static_cast<std::size_t>(it - t.header.begin());
    }
    if (response >= width) throw InvalidArgument("response column index is out of range");
  }

  const Index n = static_cast<Index>(t.rows.size());
  const Index p = static_cast<Index>(width - 1);
  Matrix x(n, p);
  Vector y(n);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < width && !t.header.empty(); ++c) {
    if (c != response) names.push_back(t.header[c]);
  }
  for (Index i = 0; i < n; ++i) {
    Index col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      const double v = t.rows[static_cast<std::size_t>(i)][c];
      if (c == response) {
        y(i) = v;
      } else {
        x(i, col++) = v;
      }
    }
  }
  return Dataset(std::move(x), std::move(y), std::move(names));
}

Matrix read_matrix_csv(const std::string& path, bool header) {
  const RawTable t = read_table(path, header);
  const Index rows = static_cast<Index>(t.rows.size());
  const Index cols = static_cast<Index>(t.rows.front().size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  auto out = open_out(path);
  for (Index j = 0; j < data.p(); ++j) {
    out << (data.feature_names().empty() ? "x" + std::to_string(j + 1) : data.feature_names()[static_cast<std::size_t>(j)])
        << ',';
  }
  out << "y\n";
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.p(); ++j) out << data.x()(i, j) << ',';
    out << data.y()(i) << '\n';
  }
  if (!out) throw IoError("error while writing " + path);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("error while writing " + path);
}

Json to_json(const Support& s) { return Json(std::vector<Index>(s.begin(), s.end())); }

Json to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const SparseEstimator& e) {
  return Json{{"support", to_json(e.support)}, {"beta", to_json(e.beta)}, {"objective", e.objective}};
}

Json to_json(const GreedyTrace& t) {
  Json arr = Json::array();
  for (const auto& s : t) {
    arr.push_back({{"chosen", s.chosen}, {"gain", s.gain}, {"value", s.value}, {"zero_gain", s.zero_gain}});
  }
  return arr;
}

Json to_json(const RelaxationSolution& r) {
  Json j{{"value", r.value},
         {"z", to_json(r.z)},
         {"iterations", r.iterations},
         {"kkt_residual", r.kkt_residual},
         {"converged", r.converged}};
  if (r.beta) j["beta"] = to_json(*r.beta);
  return j;
}

Json to_json(const RandomizedStats& s) {
  return Json{{"trials", s.trials},
              {"best_value", s.best_value},
              {"best_support", to_json(s.best_support)},
              {"mean_cardinality", s.mean_cardinality},
              {"p_exceed_bound", s.p_exceed_bound},
              {"alpha", s.alpha}};
}

Json to_json(const std::vector<BisectionStep>& trace) {
  Json arr = Json::array();
  for (const auto& s : trace) {
    arr.push_back({{"iter", s.iter},
                   {"L", s.lower},
                   {"U", s.upper},
                   {"q", s.q},
                   {"l1", s.l1 ? Json(*s.l1) : Json(nullptr)},
                   {"zeros", s.zeros},
                   {"branch", s.branch}});
  }
  return arr;
}

Json to_json(const BnbResult& r) {
  return Json{{"value", r.value},
              {"support", to_json(r.estimator.support)},
              {"gap", r.gap},
              {"nodes", r.nodes},
              {"root_bound", r.root_bound},
              {"lower_bound", r.lower_bound},
              {"proven", r.proven}};
}

Json to_json(const SolverConfig& c) {
  return Json{{"method", c.method},   {"delta", c.delta},         {"trials", c.trials},
              {"seed", c.seed},       {"repair", c.repair},       {"alpha", c.alpha},
              {"delta_hat", c.delta_hat}, {"gap_tol", c.gap_tol}, {"node_cap", c.node_cap}};
}

Json to_json(const SolverOutcome& o) {
  Json j{{"method", o.method}, {"value", o.value}, {"estimator", to_json(o.estimator)}, {"warnings", o.warnings}};
  if (o.greedy_trace) j["greedy_trace"] = to_json(*o.greedy_trace);
  if (o.relaxation) j["relaxation"] = to_json(*o.relaxation);
  if (o.randomized) {
    j["randomized"] = to_json(o.randomized->stats);
    j["randomized"]["best_trial"] = o.randomized->best_trial;
    j["randomized"]["best_raw_value"] = o.randomized->best.value;
    j["randomized"]["best_raw_support"] = to_json(o.randomized->best.support);
  }
  if (o.bisection) {
    j["bisection"] = {{"value", o.bisection->value},
                      {"L", o.bisection->final_lower},
                      {"U", o.bisection->final_upper},
                      {"trace", to_json(o.bisection->trace)}};
  }
  if (o.bnb) j["bnb"] = to_json(*o.bnb);
  return j;
}

Json to_json(const GcvReport& r) {
  Json grid = Json::array();
  Json scores = Json::array();
  Json points = Json::array();
  for (const auto& p : r.points) {
    grid.push_back(p.lambda);
    scores.push_back(p.score ? Json(*p.score) : Json(nullptr));
    Json pj{{"lambda", p.lambda}, {"score", p.score ? Json(*p.score) : Json(nullptr)}, {"support", to_json(p.support)}};
    if (!p.error.empty()) pj["error"] = p.error;
    points.push_back(std::move(pj));
  }
  return Json{{"grid", grid},
              {"scores", scores},
              {"best_lambda", r.best_lambda},
              {"best_estimator", to_json(r.best_estimator)},
              {"points", points},
              {"warnings", r.warnings}};
}

Json to_json(const SyntheticConfig& c) {
  return Json{{"n", c.n},
              {"p", c.p},
              {"k_true", c.k_true},
              {"rho", c.rho},
              {"snr", c.snr},
              {"coef_low", c.coef_low},
              {"coef_high", c.coef_high},
              {"seed", c.seed},
              {"resample_small", c.resample_small}};
}

Json to_json(const BenchConfig& c) {
  Json methods = Json::array();
  for (const auto& m : c.methods) methods.push_back(to_json(m));
  return Json{{"p", c.ps},
              {"n", c.ns},
              {"k", c.ks},
              {"methods", methods},
              {"reps", c.reps},
              {"seed", c.seed},
              {"lambda", c.lambda},
              {"rho", c.rho},
              {"snr", c.snr},
              {"coef_low", c.coef_low},
              {"coef_high", c.coef_high},
              {"resample_small", c.resample_small},
              {"time_budget_s", c.time_budget_s},
              {"workers", c.workers},
              {"serial_timing", c.serial_timing}};
}

namespace {

// A misspelled key would otherwise fall back to its default without notice.
void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> known, const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidArgument(std::string("unknown key '") + key + "' in " + what);
    }
  }
}

SolverConfig solver_config_from_json(const Json& j) {
  SolverConfig c;
  if (j.is_string()) {
    c.method = j.get<std::string>();
  } else if (j.is_object()) {
    reject_unknown_keys(j, {"method", "delta", "trials", "seed", "repair", "alpha", "delta_hat", "gap_tol", "node_cap"},
                        "method entry");
    c.method = j.value("method", c.method);
    c.delta = j.value("delta", c.delta);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.repair = j.value("repair", c.repair);
    c.alpha = j.value("alpha", c.alpha);
    c.delta_hat = j.value("delta_hat", c.delta_hat);
    c.gap_tol = j.value("gap_tol", c.gap_tol);
    c.node_cap = j.value("node_cap", c.node_cap);
  } else {
    throw InvalidArgument("method entries must be names or objects");
  }
  if (!is_solver(c.method)) throw InvalidArgument("unknown method '" + c.method + "'");
  return c;
}

std::vector<Index> index_list(const Json& j, const char* key, std::vector<Index> fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (v.is_number_integer()) return {v.get<Index>()};
  return v.get<std::vector<Index>>();
}

}  // namespace

BenchConfig bench_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("benchmark config must be a JSON object");
  reject_unknown_keys(j,
                      {"p", "n", "k", "methods", "reps", "seed", "lambda", "rho", "snr", "coef_low", "coef_high",
                       "resample_small", "time_budget_s", "workers", "serial_timing"},
                      "benchmark config");
  try {
    BenchConfig c;
    c.ps = index_list(j, "p", c.ps);
    c.ns = index_list(j, "n", c.ns);
    c.ks = index_list(j, "k", c.ks);
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(solver_config_from_json(m));
    }
    c.reps = j.value("reps", c.reps);
    c.seed = j.value("seed", c.seed);
    c.lambda = j.value("lambda", c.lambda);
    c.rho = j.value("rho", c.rho);
    c.snr = j.value("snr", c.snr);
    c.coef_low = j.value("coef_low", c.coef_low);
    c.coef_high = j.value("coef_high", c.coef_high);
    c.resample_small = j.value("resample_small", c.resample_small);
    c.time_budget_s = j.value("time_budget_s", c.time_budget_s);
    c.workers = j.value("workers", c.workers);
    c.serial_timing = j.value("serial_timing", c.serial_timing);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed benchmark config: ") + e.what());
  }
}

void write_bench_records_csv(const std::string& path, const BenchReport& report) {
  auto out = open_out(path);
  out << "method,p,n,k,rep,data_seed,objective,seconds,false_alarm,timed_out,failed,parallelism,error\n";
  for (const auto& r : report.records) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out << r.method << ',' << r.cell.p << ',' << r.cell.n << ',' << r.cell.k << ',' << r.rep << ',' << r.data_seed
        << ',' << r.objective << ',' << r.seconds << ',' << r.false_alarm << ',' << (r.timed_out ? 1 : 0) << ','
        << (r.failed ? 1 : 0) << ',' << r.parallelism << ",\"" << err << "\"\n";
  }
  if (!out) throw IoError("error while writing " + path);
}

void write_bench_summary_csv(const std::string& path, const BenchReport& report) {
  auto out = open_out(path);
  out << "method,p,n,k,count,mean_objective,mean_seconds,mean_false_alarm\n";
  for (const auto& a : report.aggregates) {
    out << a.method << ',' << a.cell.p << ',' << a.cell.n << ',' << a.cell.k << ',' << a.count << ','
        << a.mean_objective << ',' << a.mean_seconds << ',' << a.mean_false_alarm << '\n';
  }
  if (!out) throw IoError("error while writing " + path);
}

}  // namespace sridge
