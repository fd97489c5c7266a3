#include "hdvgrid/model_ir.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "hdvgrid/config_io.hpp"

namespace hdvgrid {

namespace {

char sense_code(Sense s) {
  switch (s) {
    case Sense::LessEqual: return 'L';
    case Sense::Equal: return 'E';
    case Sense::GreaterEqual: return 'G';
  }
  return '?';
}

Sense sense_from_code(const std::string& c) {
  if (c == "L") return Sense::LessEqual;
  if (c == "E") return Sense::Equal;
  if (c == "G") return Sense::GreaterEqual;
  throw ConfigError("", 0, "sense", "unknown constraint sense '" + c + "'");
}

double parse_number(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ConfigError("", 0, "", "expected a number, got '" + s + "'");
  return v;
}

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word)
    throw ConfigError("", 0, "", "ModelIR text: expected '" + word + "', got '" + got + "'");
}

}  // namespace

int ModelIR::add_variable(std::string tag, double lower, double upper, double cost) {
  var_index_.clear();
  variables_.push_back({std::move(tag), lower, upper, cost});
  return static_cast<int>(variables_.size() - 1);
}

int ModelIR::add_constraint(std::string tag, Sense sense, double rhs) {
  row_index_.clear();
  constraints_.push_back({std::move(tag), sense, rhs});
  return static_cast<int>(constraints_.size() - 1);
}

void ModelIR::add_coefficient(int row, int col, double value) {
  if (value == 0.0) return;
  coefficients_.push_back({row, col, value});
}

int ModelIR::find_variable(const std::string& tag) const {
  if (var_index_.empty() && !variables_.empty())
    for (std::size_t j = 0; j < variables_.size(); ++j)
      var_index_.emplace(variables_[j].tag, static_cast<int>(j));
  auto it = var_index_.find(tag);
  return it == var_index_.end() ? -1 : it->second;
}

int ModelIR::find_constraint(const std::string& tag) const {
  if (row_index_.empty() && !constraints_.empty())
    for (std::size_t i = 0; i < constraints_.size(); ++i)
      row_index_.emplace(constraints_[i].tag, static_cast<int>(i));
  auto it = row_index_.find(tag);
  return it == row_index_.end() ? -1 : it->second;
}

void ModelIR::validate() const {
  const int n = static_cast<int>(variables_.size());
  const int m = static_cast<int>(constraints_.size());
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw ValidationError("variable '" + v.tag + "': lower bound <= upper bound");
    if (!std::isfinite(v.cost))
      throw ValidationError("variable '" + v.tag + "': objective coefficient must be finite");
  }
  for (const auto& c : constraints_)
    if (!std::isfinite(c.rhs))
      throw ValidationError("constraint '" + c.tag + "': rhs must be finite");
  for (const auto& t : coefficients_) {
    if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n)
      throw ValidationError("coefficient references unknown row/column (" + std::to_string(t.row) +
                            "," + std::to_string(t.col) + ")");
    if (!std::isfinite(t.value)) throw ValidationError("coefficient value must be finite");
  }
}

double ModelIR::objective(const std::vector<double>& x) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) obj += variables_[j].cost * x[j];
  return obj;
}

std::vector<double> ModelIR::activities(const std::vector<double>& x) const {
  std::vector<double> act(constraints_.size(), 0.0);
  for (const auto& t : coefficients_) act[static_cast<std::size_t>(t.row)] += t.value * x[static_cast<std::size_t>(t.col)];
  return act;
}

void ModelIR::write(std::ostream& out) const {
  out << "HDVLP 1\nminimize\n";
  out << "variables " << variables_.size() << '\n';
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const auto& v = variables_[j];
    out << j << ' ' << format_number(v.lower) << ' ' << format_number(v.upper) << ' '
        << format_number(v.cost) << ' ' << v.tag << '\n';
  }
  out << "constraints " << constraints_.size() << '\n';
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = constraints_[i];
    out << i << ' ' << sense_code(c.sense) << ' ' << format_number(c.rhs) << ' ' << c.tag << '\n';
  }
  out << "coefficients " << coefficients_.size() << '\n';
  for (const auto& t : coefficients_)
    out << t.row << ' ' << t.col << ' ' << format_number(t.value) << '\n';
  out << "end\n";
}

ModelIR ModelIR::read(std::istream& in) {
  ModelIR ir;
  expect(in, "HDVLP");
  expect(in, "1");
  expect(in, "minimize");
  std::size_t count = 0;
  std::string a, b, c, tag;
  expect(in, "variables");
  in >> count;
  for (std::size_t j = 0; j < count; ++j) {
    std::size_t idx = 0;
    if (!(in >> idx >> a >> b >> c >> tag) || idx != j)
      throw ConfigError("", 0, "variables", "malformed variable record " + std::to_string(j));
    ir.add_variable(tag, parse_number(a), parse_number(b), parse_number(c));
  }
  expect(in, "constraints");
  in >> count;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx = 0;
    if (!(in >> idx >> a >> b >> tag) || idx != i)
      throw ConfigError("", 0, "constraints", "malformed constraint record " + std::to_string(i));
    ir.add_constraint(tag, sense_from_code(a), parse_number(b));
  }
  expect(in, "coefficients");
  in >> count;
  for (std::size_t k = 0; k < count; ++k) {
    int row = 0, col = 0;
    if (!(in >> row >> col >> a))
      throw ConfigError("", 0, "coefficients", "malformed triplet " + std::to_string(k));
    ir.add_coefficient(row, col, parse_number(a));
  }
  expect(in, "end");
  ir.validate();
  return ir;
}

}  // namespace hdvgrid
