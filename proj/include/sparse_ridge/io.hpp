#pragma once

// CSV ingestion and JSON/CSV serialization for the command-line tool.

#include "sparse_ridge/bench.hpp"
#include "sparse_ridge/extensions.hpp"
#include "sparse_ridge/methods.hpp"
#include "sparse_ridge/synthetic.hpp"

#include <json.hpp>

#include <string>

namespace sridge {

using Json = nlohmann::ordered_json;

struct CsvOptions {
  bool header = true;
  // "last", a 0-based column number, or a header name.
  std::string response_col = "last";
};

/// Throws IoError when the file cannot be read or a cell is not numeric,
/// InvalidArgument when the response column cannot be resolved.
Dataset read_dataset_csv(const std::string& path, const CsvOptions& opts = {});

/// All-numeric CSV matrix (optionally skipping a header row).
Matrix read_matrix_csv(const std::string& path, bool header = false);

/// Writes x columns followed by y, with a header row.
void write_dataset_csv(const std::string& path, const Dataset& data);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

Json to_json(const Support& s);
Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const SparseEstimator& e);
Json to_json(const GreedyTrace& t);
Json to_json(const RelaxationSolution& r);
Json to_json(const RandomizedStats& s);
Json to_json(const std::vector<BisectionStep>& trace);
Json to_json(const BnbResult& r);
Json to_json(const SolverConfig& c);
Json to_json(const SolverOutcome& o);
Json to_json(const GcvReport& r);
Json to_json(const SyntheticConfig& c);
Json to_json(const BenchConfig& c);

/// Missing keys keep their defaults; unknown methods or malformed values
/// throw InvalidArgument.
BenchConfig bench_config_from_json(const Json& j);

/// One row per record.
void write_bench_records_csv(const std::string& path, const BenchReport& report);
/// One row per (cell, method) aggregate.
void write_bench_summary_csv(const std::string& path, const BenchReport& report);

}  // namespace sridge
