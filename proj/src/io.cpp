// Copyright 2026 The pimas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pimas/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "pimas/errors.hpp"
#include "pimas/inference.hpp"

namespace pimas::io {
namespace {

using nlohmann::json;

constexpr std::uint64_t kHolidayGraphSeed = 7;
constexpr int kHolidayMaxWidth = 10;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ParseError("field '" + path + "': " + what);
}

const json& require(const json& node, const std::string& key, const std::string& path) {
  if (!node.is_object()) field_error(path, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) field_error(path, "expected a number");
  return node.get<double>();
}

int as_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) field_error(path, "expected an integer");
  return node.get<int>();
}

// Points may be given as scalars (1-d) or as arrays of coordinates.
Eigen::MatrixXd as_points(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) field_error(path, "expected a non-empty list of points");
  const bool scalar = node.front().is_number();
  const Eigen::Index rows = static_cast<Eigen::Index>(node.size());
  const Eigen::Index cols = scalar ? 1 : static_cast<Eigen::Index>(node.front().size());
  if (cols < 1) field_error(path, "points need at least one coordinate");
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string item = path + "[" + std::to_string(i) + "]";
    const json& p = node[static_cast<std::size_t>(i)];
    if (scalar) {
      out(i, 0) = as_number(p, item);
      continue;
    }
    if (!p.is_array() || static_cast<Eigen::Index>(p.size()) != cols) {
      field_error(item, "expected " + std::to_string(cols) + " coordinates");
    }
    for (Eigen::Index d = 0; d < cols; ++d) {
      out(i, d) = as_number(p[static_cast<std::size_t>(d)], item);
    }
  }
  return out;
}

Eigen::VectorXd as_vector(const json& node, const std::string& path) {
  if (!node.is_array()) field_error(path, "expected a list of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) out[static_cast<Eigen::Index>(i)] = as_number(node[i], path);
  return out;
}

json points_json(const Eigen::MatrixXd& points) {
  json out = json::array();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    json p = json::array();
    for (Eigen::Index d = 0; d < points.cols(); ++d) p.push_back(points(i, d));
    out.push_back(std::move(p));
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

RelationGraph parse_relations(const json& node, int num_agents) {
  const std::string path = "relations";
  if (node.contains("random_regular")) {
    const json& spec = node["random_regular"];
    const std::string sub = path + ".random_regular";
    const int degree = as_int(require(spec, "degree", sub), sub + ".degree");
    const double strength = spec.contains("strength") ? as_number(spec["strength"], sub + ".strength") : 1.0;
    std::uint64_t seed = spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : 1;
    const int max_width = spec.contains("max_width") ? as_int(spec["max_width"], sub + ".max_width") : kHolidayMaxWidth;
    for (int attempt = 0; attempt < 1000; ++attempt, ++seed) {
      RelationGraph graph = random_regular_graph(num_agents, degree, strength, seed);
      std::vector<std::vector<int>> scopes;
      for (const Relation& r : graph.edges) scopes.push_back({r.a, r.b});
      if (min_degree_order(scopes, num_agents).induced_width <= max_width) return graph;
    }
    field_error(sub, "no graph with induced width <= " + std::to_string(max_width) + " found");
  }
  const json& edges = require(node, "edges", path);
  if (!edges.is_array()) field_error(path + ".edges", "expected a list of [a, b, strength]");
  RelationGraph graph;
  graph.num_nodes = num_agents;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string item = path + ".edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 3) field_error(item, "expected [a, b, strength]");
    graph.edges.push_back({as_int(e[0], item) - 1, as_int(e[1], item) - 1, as_number(e[2], item)});
  }
  return graph;
}

FactoredEndCost parse_end_cost(const json& node, int num_agents, int num_targets,
                               const std::optional<RelationGraph>& relations) {
  const std::string path = "end_cost";
  if (node.contains("firemen")) {
    const json& spec = node["firemen"];
    const double c = spec.contains("c") ? as_number(spec["c"], path + ".firemen.c") : 1.0;
    if (!(c > 0.0)) field_error(path + ".firemen.c", "must be > 0");
    return firemen_factors(num_agents, num_targets, c);
  }
  if (node.contains("holiday")) {
    if (!relations) field_error(path + ".holiday", "requires a 'relations' block");
    return holiday_factors(*relations, num_targets);
  }
  FactoredEndCost cost;
  cost.num_labels = num_targets;
  if (node.contains("constant_offset")) {
    cost.constant_offset = as_number(node["constant_offset"], path + ".constant_offset");
  }
  const json& factors = require(node, "factors", path);
  if (!factors.is_array()) field_error(path + ".factors", "expected a list");
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const std::string item = path + ".factors[" + std::to_string(f) + "]";
    Factor factor;
    const json& scope = require(factors[f], "scope", item);
    if (!scope.is_array()) field_error(item + ".scope", "expected a list of agents");
    for (const json& a : scope) factor.scope.push_back(as_int(a, item + ".scope") - 1);
    const Eigen::VectorXd table = as_vector(require(factors[f], "table", item), item + ".table");
    factor.table.assign(table.data(), table.data() + table.size());
    cost.factors.push_back(std::move(factor));
  }
  return cost;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");
  const json& p = require(doc, "params", "");
  RawParams raw;
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!p.contains(key)) return std::nullopt;
    return as_number(p[key], std::string("params.") + key);
  };
  raw.nu = opt("nu");
  raw.R = opt("R");
  raw.lambda = opt("lambda");
  raw.alpha = opt("alpha");
  raw.epsilon = opt("epsilon");
  raw.T = opt("T");
  const ControlParams params = validate_params(raw);

  TargetSet targets(as_points(require(doc, "targets", ""), "targets"));
  const json& agents = require(doc, "agents", "");
  const double t0 = agents.contains("t0") ? as_number(agents["t0"], "agents.t0") : 0.0;
  JointState initial(t0, as_points(require(agents, "positions", "agents"), "agents.positions"));

  std::optional<RelationGraph> relations;
  if (doc.contains("relations")) relations = parse_relations(doc["relations"], initial.num_agents());
  FactoredEndCost end_cost = parse_end_cost(require(doc, "end_cost", ""), initial.num_agents(),
                                            targets.size(), relations);

  DriftSpec drift;
  if (doc.contains("drift")) {
    const json& d = doc["drift"];
    if (d.contains("gain")) drift.gain = as_number(d["gain"], "drift.gain");
    if (d.contains("offset")) drift.offset = as_vector(d["offset"], "drift.offset");
  }
  PotentialSpec potential;
  if (doc.contains("potential")) {
    const json& v = doc["potential"];
    if (v.contains("level")) potential.level = as_number(v["level"], "potential.level");
    if (v.contains("curvature")) potential.curvature = as_number(v["curvature"], "potential.curvature");
    if (v.contains("center")) potential.center = as_vector(v["center"], "potential.center");
  }

  Scenario scenario{doc.value("name", std::string("scenario")),
                    std::move(targets),
                    std::move(end_cost),
                    params,
                    std::move(initial),
                    std::move(drift),
                    std::move(potential),
                    std::move(relations)};
  scenario.validate();
  return scenario;
}

Scenario reference_scenario(std::string name, int num_agents, TargetSet targets,
                            FactoredEndCost end_cost) {
  return Scenario{std::move(name),
                  std::move(targets),
                  std::move(end_cost),
                  reference_params(),
                  JointState(0.0, Eigen::MatrixXd::Zero(num_agents, 1)),
                  {},
                  {},
                  std::nullopt};
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"firemen-2x2", "firemen-6x3", "holiday-42"};
  return names;
}

Scenario builtin_scenario(std::string_view name) {
  if (name == "firemen-2x2") {
    FactoredEndCost cost;
    cost.num_labels = 2;
    // E(1,1) = E(2,2) = 2, E(1,2) = E(2,1) = 0
    cost.factors.push_back({{0, 1}, {2.0, 0.0, 0.0, 2.0}});
    Scenario s = reference_scenario("firemen-2x2", 2, TargetSet::on_line({-1.0, 1.0}), std::move(cost));
    s.validate();
    return s;
  }
  if (name == "firemen-6x3") {
    Scenario s = reference_scenario("firemen-6x3", 6, TargetSet::on_line({-1.0, 0.0, 1.0}),
                                    firemen_factors(6, 3, 1.0));
    s.validate();
    return s;
  }
  if (name == "holiday-42") {
    const json relations = {{"random_regular",
                             {{"degree", 3}, {"strength", 1.0}, {"seed", kHolidayGraphSeed},
                              {"max_width", kHolidayMaxWidth}}}};
    RelationGraph graph = parse_relations(relations, 42);
    Scenario s = reference_scenario("holiday-42", 42, TargetSet::on_line({-1.0, 0.0, 1.0}),
                                    holiday_factors(graph, 3));
    s.relations = std::move(graph);
    s.validate();
    return s;
  }
  throw ValidationError("unknown built-in scenario '" + std::string(name) + "'");
}

Scenario load_scenario(const std::string& name_or_path) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin_scenario(name_or_path);
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw ValidationError("scenario '" + name_or_path +
                          "' is neither a built-in name nor a readable file");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(name_or_path + ": " + e.what());
  }
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  try {
    return scenario_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string dump_scenario(const Scenario& scenario) {
  const ControlParams& p = scenario.params;
  json doc;
  doc["name"] = scenario.name;
  doc["params"] = {{"nu", p.noise()},           {"R", p.control_weight()},
                   {"lambda", p.temperature()}, {"alpha", p.end_stiffness()},
                   {"epsilon", p.step_fraction()}, {"T", p.horizon()}};
  doc["targets"] = points_json(scenario.targets.positions());
  doc["agents"] = {{"t0", scenario.initial.time()},
                   {"positions", points_json(scenario.initial.positions())}};
  json factors = json::array();
  for (const Factor& f : scenario.end_cost.factors) {
    json scope = json::array();
    for (int a : f.scope) scope.push_back(a + 1);
    factors.push_back({{"scope", scope}, {"table", f.table}});
  }
  doc["end_cost"] = {{"constant_offset", scenario.end_cost.constant_offset}, {"factors", factors}};
  if (scenario.relations) {
    json edges = json::array();
    for (const Relation& r : scenario.relations->edges) edges.push_back({r.a + 1, r.b + 1, r.strength});
    doc["relations"] = {{"edges", edges}};
  }
  doc["drift"] = {{"gain", scenario.drift.gain}, {"offset", vector_json(scenario.drift.offset)}};
  doc["potential"] = {{"level", scenario.potential.level},
                      {"curvature", scenario.potential.curvature},
                      {"center", vector_json(scenario.potential.center)}};
  return doc.dump(2) + "\n";
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::vector<std::string> trajectory_header(int num_agents, int dim, int num_targets,
                                           bool record_marginals) {
  std::vector<std::string> header{"t"};
  for (const char* prefix : {"x", "u", "mubar"}) {
    for (int a = 1; a <= num_agents; ++a) {
      const std::string base = std::string(prefix) + "_" + std::to_string(a);
      if (dim == 1) {
        header.push_back(base);
        continue;
      }
      for (int d = 1; d <= dim; ++d) header.push_back(base + "_" + std::to_string(d));
    }
  }
  if (record_marginals) {
    for (int s = 1; s < num_targets; ++s) {
      for (int a = 1; a <= num_agents; ++a) {
        header.push_back("p_" + std::to_string(a) + "_" + std::to_string(s));
      }
    }
  }
  return header;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool record_marginals) {
  if (trajectory.records.empty()) return;
  const TrajectoryRecord& first = trajectory.records.front();
  const int n = static_cast<int>(first.x.rows());
  const int k = static_cast<int>(first.x.cols());
  const int m = static_cast<int>(first.marginals.cols());
  const auto header = trajectory_header(n, k, m, record_marginals);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const TrajectoryRecord& r : trajectory.records) {
    out << format_double(r.t);
    for (const Eigen::MatrixXd* block : {&r.x, &r.u, &r.mubar}) {
      for (int a = 0; a < n; ++a) {
        for (int d = 0; d < k; ++d) out << ',' << format_double((*block)(a, d));
      }
    }
    if (record_marginals) {
      for (int s = 0; s + 1 < m; ++s) {
        for (int a = 0; a < n; ++a) out << ',' << format_double(r.marginals(a, s));
      }
    }
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in, const ControlParams& params, int num_agents,
                               int dim, int num_targets, bool record_marginals) {
  const auto expected = trajectory_header(num_agents, dim, num_targets, record_marginals);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory CSV is empty");
  {
    std::vector<std::string> header;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) header.push_back(cell);
    if (header != expected) throw ParseError("trajectory CSV header does not match the scenario shape");
  }
  Trajectory trajectory{0, params, {}, 0.0};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      const auto res = std::from_chars(p, comma, v);
      if (res.ec != std::errc() || res.ptr != comma) {
        throw ParseError("trajectory CSV line " + std::to_string(line_no) + ", column " +
                         std::to_string(values.size() + 1) + ": not a number");
      }
      values.push_back(v);
      p = comma + 1;
    }
    if (values.size() != expected.size()) {
      throw ParseError("trajectory CSV line " + std::to_string(line_no) + " has " +
                       std::to_string(values.size()) + " fields, expected " +
                       std::to_string(expected.size()));
    }
    TrajectoryRecord r;
    std::size_t c = 0;
    r.t = values[c++];
    for (Eigen::MatrixXd* block : {&r.x, &r.u, &r.mubar}) {
      block->resize(num_agents, dim);
      for (int a = 0; a < num_agents; ++a) {
        for (int d = 0; d < dim; ++d) (*block)(a, d) = values[c++];
      }
    }
    if (record_marginals) {
      r.marginals.resize(num_agents, num_targets);
      for (int s = 0; s + 1 < num_targets; ++s) {
        for (int a = 0; a < num_agents; ++a) r.marginals(a, s) = values[c++];
      }
      for (int a = 0; a < num_agents; ++a) {
        r.marginals(a, num_targets - 1) =
            1.0 - r.marginals.row(a).head(num_targets - 1).sum();
      }
    }
    trajectory.records.push_back(std::move(r));
  }
  if (!trajectory.records.empty()) trajectory.end_time = trajectory.records.back().t;
  return trajectory;
}

std::string trajectory_svg(const Trajectory& trajectory, const TargetSet& targets,
                           std::string_view title) {
  constexpr double kWidth = 800.0;
  constexpr double kPanelHeight = 300.0;
  constexpr double kMargin = 50.0;
  static const char* const kColours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                         "#bcbd22", "#17becf"};
  std::ostringstream svg;
  svg << std::setprecision(6);
  const double height = 2.0 * kPanelHeight + kMargin;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"14\">" << title << "</text>\n";
  if (trajectory.records.empty()) {
    svg << "</svg>\n";
    return svg.str();
  }

  const double t0 = trajectory.records.front().t;
  const double t1 = std::max(trajectory.records.back().t, t0 + 1e-12);
  double lo = targets.positions().col(0).minCoeff();
  double hi = targets.positions().col(0).maxCoeff();
  for (const TrajectoryRecord& r : trajectory.records) {
    lo = std::min({lo, r.x.col(0).minCoeff(), r.mubar.col(0).minCoeff()});
    hi = std::max({hi, r.x.col(0).maxCoeff(), r.mubar.col(0).maxCoeff()});
  }
  const double pad = 0.05 * std::max(hi - lo, 1e-9);
  lo -= pad;
  hi += pad;

  const int n = static_cast<int>(trajectory.records.front().x.rows());
  const char* const labels[] = {"(a) positions x", "(b) expected targets mubar"};
  for (int panel = 0; panel < 2; ++panel) {
    const double top = 30.0 + panel * kPanelHeight;
    const double plot_h = kPanelHeight - kMargin;
    const double plot_w = kWidth - 2.0 * kMargin;
    auto px = [&](double t) { return kMargin + (t - t0) / (t1 - t0) * plot_w; };
    auto py = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };
    svg << "<g>\n<rect x=\"" << kMargin << "\" y=\"" << top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kMargin << "\" y=\"" << top - 4 << "\" font-family=\"sans-serif\""
        << " font-size=\"12\">" << labels[panel] << "</text>\n";
    svg << "<text x=\"" << kMargin << "\" y=\"" << top + plot_h + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\">t = " << t0 << "</text>\n";
    svg << "<text x=\"" << kMargin + plot_w << "\" y=\"" << top + plot_h + 16
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">t = " << t1
        << "</text>\n";
    for (int s = 0; s < targets.size(); ++s) {
      const double y = py(targets.positions()(s, 0));
      svg << "<line x1=\"" << kMargin << "\" y1=\"" << y << "\" x2=\"" << kMargin + plot_w
          << "\" y2=\"" << y << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
      svg << "<text x=\"" << kMargin - 4 << "\" y=\"" << y + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << targets.positions()(s, 0) << "</text>\n";
    }
    for (int a = 0; a < n; ++a) {
      svg << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << kColours[a % 10]
          << "\" points=\"";
      for (const TrajectoryRecord& r : trajectory.records) {
        const double v = panel == 0 ? r.x(a, 0) : r.mubar(a, 0);
        svg << px(r.t) << ',' << py(v) << ' ';
      }
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pimas::io
