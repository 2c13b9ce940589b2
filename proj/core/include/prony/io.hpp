#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "prony/experiment.hpp"
#include "prony/model.hpp"
#include "prony/solvers.hpp"
#include "prony/stability.hpp"

namespace prony {

// Model files are JSON:
//   {"nodes":[[re,im],...], "multiplicities":[l1,...],
//    "magnitudes":[[[re,im],...],...]}
// Readers throw InputError on malformed text or mismatched lengths.
ConfluentModel model_from_json(const std::string& text);
std::string model_to_json(const ConfluentModel& model);
ConfluentModel read_model_file(const std::filesystem::path& path);

// Measurement CSV: header "k,re,im", then one row per k = 0..S-1.
void write_measurements_csv(std::ostream& out, const MeasurementVector& m);
MeasurementVector read_measurements_csv(std::istream& in);

// "param,acc_loc,row_l1,c1,epsilon"
void write_bounds_csv(std::ostream& out, const AccuracyBounds& bounds);

/// {"method", "model", "diagnostics"}; non-finite numbers become strings.
std::string solve_report_to_json(const SolveReport& report);

// Experiment tables: "# key: value" metadata lines, then the header
// "sweep_value,trial,method,param,abs_error,predicted_bound".
void write_table_csv(std::ostream& out, const ExperimentTable& table);
ExperimentTable read_table_csv(std::istream& in);

/// {kind, slopes: {method: {param: slope}}, failures: {method: n}, seed}.
/// Slopes that cannot be fitted are null.
std::string sweep_summary_json(const SweepSpec& spec, const ExperimentTable& table);

}  // namespace prony
