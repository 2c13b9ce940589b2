#include "prony/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace prony {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw InputError("not a number: '" + field + "'");
  }
  while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
  if (used != field.size()) throw InputError("not a number: '" + field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  for (std::string f; std::getline(in, f, ',');) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : f.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("complex numbers must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json model_json(const ConfluentModel& model) {
  json j;
  j["nodes"] = json::array();
  for (const Complex& xi : model.nodes) j["nodes"].push_back(complex_to_json(xi));
  j["multiplicities"] = model.multiplicities;
  j["magnitudes"] = json::array();
  for (const auto& a : model.magnitudes) {
    json row = json::array();
    for (const Complex& v : a) row.push_back(complex_to_json(v));
    j["magnitudes"].push_back(row);
  }
  return j;
}

}  // namespace

ConfluentModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j.contains("multiplicities") ||
      !j.contains("magnitudes")) {
    throw InputError("model JSON needs nodes, multiplicities and magnitudes");
  }
  ConfluentModel model;
  for (const auto& xi : j.at("nodes")) model.nodes.push_back(complex_from_json(xi));
  for (const auto& l : j.at("multiplicities")) {
    if (!l.is_number_integer()) throw InputError("multiplicities must be integers");
    model.multiplicities.push_back(l.get<int>());
  }
  for (const auto& row : j.at("magnitudes")) {
    if (!row.is_array()) throw InputError("magnitudes must be a list of lists");
    std::vector<Complex> a;
    for (const auto& v : row) a.push_back(complex_from_json(v));
    model.magnitudes.push_back(std::move(a));
  }
  check_model(model);
  return model;
}

std::string model_to_json(const ConfluentModel& model) {
  return model_json(model).dump();
}

ConfluentModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

void write_measurements_csv(std::ostream& out, const MeasurementVector& m) {
  out << "k,re,im\n";
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    out << k << ',' << format_double(m(k).real()) << ','
        << format_double(m(k).imag()) << '\n';
  }
}

MeasurementVector read_measurements_csv(std::istream& in) {
  std::vector<Complex> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (first && !fields.empty() && fields[0] == "k") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 3) {
      throw InputError("measurement rows need k,re,im: '" + line + "'");
    }
    if (parse_double(fields[0]) != static_cast<double>(values.size())) {
      throw InputError("measurement rows must be ordered k = 0, 1, ...");
    }
    values.emplace_back(parse_double(fields[1]), parse_double(fields[2]));
  }
  if (values.empty()) throw InputError("no measurements found");
  return Eigen::Map<const MeasurementVector>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

void write_bounds_csv(std::ostream& out, const AccuracyBounds& bounds) {
  out << "param,acc_loc,row_l1,c1,epsilon\n";
  for (std::size_t p = 0; p < bounds.per_parameter.size(); ++p) {
    out << bounds.per_parameter.labels[p] << ','
        << format_double(bounds.per_parameter.values[p]) << ','
        << format_double(bounds.row_l1_norms.values[p]) << ','
        << format_double(bounds.c1) << ',' << format_double(bounds.epsilon) << '\n';
  }
}

std::string solve_report_to_json(const SolveReport& report) {
  json j;
  j["method"] = method_name(report.method);
  j["model"] = model_json(report.recovered);
  json diagnostics = json::object();
  for (const auto& [key, value] : report.diagnostics) {
    diagnostics[key] = number_or_string(value);
  }
  j["diagnostics"] = diagnostics;
  return j.dump(2);
}

void write_table_csv(std::ostream& out, const ExperimentTable& table) {
  for (const auto& [key, value] : table.metadata) {
    out << "# " << key << ": " << value << '\n';
  }
  out << "sweep_value,trial,method,param,abs_error,predicted_bound\n";
  for (const auto& row : table.rows) {
    out << format_double(row.sweep_value) << ',' << row.trial << ','
        << method_name(row.method) << ',' << row.param << ','
        << format_double(row.abs_error) << ',' << format_double(row.predicted_bound)
        << '\n';
  }
}

ExperimentTable read_table_csv(std::istream& in) {
  ExperimentTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ", 2);
      if (colon == std::string::npos) throw InputError("bad metadata line '" + line + "'");
      table.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (!header_seen) {
      if (line != "sweep_value,trial,method,param,abs_error,predicted_bound") {
        throw InputError("unexpected experiment table header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 6) throw InputError("experiment rows need 6 fields: '" + line + "'");
    ExperimentRow row;
    row.sweep_value = parse_double(f[0]);
    row.trial = static_cast<int>(parse_double(f[1]));
    row.method = parse_method(f[2]);
    row.param = f[3];
    row.abs_error = parse_double(f[4]);
    row.predicted_bound = parse_double(f[5]);
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw InputError("experiment table has no header");
  return table;
}

std::string sweep_summary_json(const SweepSpec& spec, const ExperimentTable& table) {
  json j;
  j["kind"] = sweep_kind_name(spec.kind);
  j["seed"] = spec.seed;
  j["slopes"] = json::object();
  j["failures"] = json::object();
  for (Method method : spec.methods) {
    json slopes = json::object();
    std::vector<std::string> params;
    for (const auto& row : table.rows) {
      if (row.method == method &&
          std::find(params.begin(), params.end(), row.param) == params.end()) {
        params.push_back(row.param);
      }
    }
    for (const auto& param : params) {
      try {
        slopes[param] = slope_estimate(table, method, param);
      } catch (const NumericalError&) {
        slopes[param] = nullptr;
      }
    }
    j["slopes"][method_name(method)] = slopes;
    j["failures"][method_name(method)] = failure_count(table, method);
  }
  return j.dump(2);
}

}  // namespace prony
