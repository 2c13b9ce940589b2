#include "prony/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace prony {

int ConfluentModel::num_magnitudes() const {
  return total_multiplicity(multiplicities);
}

ConfluentModel make_model(std::vector<Complex> nodes,
                          std::vector<std::vector<Complex>> magnitudes) {
  ConfluentModel model;
  model.multiplicities.reserve(magnitudes.size());
  for (const auto& a : magnitudes) {
    model.multiplicities.push_back(static_cast<int>(a.size()));
  }
  model.nodes = std::move(nodes);
  model.magnitudes = std::move(magnitudes);
  check_model(model);
  return model;
}

void check_model(const ConfluentModel& model) {
  const auto n = model.nodes.size();
  if (n == 0) throw InputError("model has no nodes");
  if (model.multiplicities.size() != n || model.magnitudes.size() != n) {
    throw InputError("model field lengths disagree: " + std::to_string(n) +
                     " nodes, " + std::to_string(model.multiplicities.size()) +
                     " multiplicities, " +
                     std::to_string(model.magnitudes.size()) +
                     " magnitude lists");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (model.multiplicities[i] < 1) {
      throw InputError("multiplicity of node " + std::to_string(i + 1) +
                       " must be positive");
    }
    if (static_cast<int>(model.magnitudes[i].size()) != model.multiplicities[i]) {
      throw InputError("node " + std::to_string(i + 1) + " has " +
                       std::to_string(model.magnitudes[i].size()) +
                       " magnitudes but multiplicity " +
                       std::to_string(model.multiplicities[i]));
    }
  }
}

int total_multiplicity(std::span<const int> multiplicities) {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

int parameter_count(std::span<const int> multiplicities) {
  return total_multiplicity(multiplicities) +
         static_cast<int>(multiplicities.size());
}

ParameterVector encode_params(const ConfluentModel& model) {
  check_model(model);
  ParameterVector v(model.num_params());
  int p = 0;
  for (int i = 0; i < model.num_nodes(); ++i) {
    for (const Complex& a : model.magnitudes[i]) v(p++) = a;
    v(p++) = model.nodes[i];
  }
  return v;
}

ConfluentModel decode_params(const ParameterVector& v,
                             std::span<const int> multiplicities) {
  for (int l : multiplicities) {
    if (l < 1) throw InputError("multiplicities must be positive");
  }
  if (multiplicities.empty()) throw InputError("no multiplicities given");
  const int expected = parameter_count(multiplicities);
  if (v.size() != expected) {
    throw InputError("malformed parameter vector: length " +
                     std::to_string(v.size()) + ", expected " +
                     std::to_string(expected));
  }
  ConfluentModel model;
  model.multiplicities.assign(multiplicities.begin(), multiplicities.end());
  int p = 0;
  for (int l : multiplicities) {
    std::vector<Complex> a(l);
    for (int j = 0; j < l; ++j) a[j] = v(p++);
    model.magnitudes.push_back(std::move(a));
    model.nodes.push_back(v(p++));
  }
  return model;
}

int PerParameterValues::find(const std::string& label) const {
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels[p] == label) return static_cast<int>(p);
  }
  return -1;
}

std::vector<std::string> parameter_labels(std::span<const int> multiplicities) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    const std::string node = std::to_string(i + 1);
    for (int j = 0; j < multiplicities[i]; ++j) {
      labels.push_back("a[" + node + "][" + std::to_string(j) + "]");
    }
    labels.push_back("xi[" + node + "]");
  }
  return labels;
}

int magnitude_index(std::span<const int> multiplicities, int node, int order) {
  int p = 0;
  for (int i = 0; i < node; ++i) p += multiplicities[i] + 1;
  return p + order;
}

int node_index(std::span<const int> multiplicities, int node) {
  return magnitude_index(multiplicities, node, multiplicities[node]);
}

std::string RegularityReport::describe() const {
  if (regular) return "regular";
  std::ostringstream out;
  const char* sep = "";
  for (auto [i, j] : coincident_nodes) {
    out << sep << "coincident nodes xi[" << i + 1 << "] and xi[" << j + 1 << "]";
    sep = "; ";
  }
  for (int i : vanishing_leading) {
    out << sep << "vanishing leading magnitude of node " << i + 1;
    sep = "; ";
  }
  return out.str();
}

RegularityReport validate(const ConfluentModel& model, double tol) {
  check_model(model);
  RegularityReport report;
  const int n = model.num_nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(model.nodes[i] - model.nodes[j]) <= tol) {
        report.coincident_nodes.emplace_back(i, j);
      }
    }
    if (std::abs(model.leading(i)) <= tol) report.vanishing_leading.push_back(i);
  }
  report.regular =
      report.coincident_nodes.empty() && report.vanishing_leading.empty();
  return report;
}

}  // namespace prony
