#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "optcon/report_io.h"
#include "optcon/scenario.h"

namespace optcon {
namespace {

using json = nlohmann::json;

// Checks the subset of JSON Schema used by docs/report.schema.json: type
// (single or list), required, properties, additionalProperties, items,
// minItems, minimum, maximum, exclusiveMinimum and local $ref.
void Validate(const json& schema, const json& root, const json& v, const std::string& path,
              std::vector<std::string>& errors) {
  if (schema.contains("$ref")) {
    const std::string ref = schema["$ref"];
    const std::string name = ref.substr(ref.rfind('/') + 1);
    Validate(root["$defs"][name], root, v, path, errors);
    return;
  }
  if (schema.contains("type")) {
    std::vector<std::string> types;
    if (schema["type"].is_array()) {
      for (const auto& t : schema["type"]) types.push_back(t);
    } else {
      types.push_back(schema["type"]);
    }
    bool ok = false;
    for (const auto& t : types) {
      ok = ok || (t == "object" && v.is_object()) || (t == "array" && v.is_array()) ||
           (t == "string" && v.is_string()) || (t == "boolean" && v.is_boolean()) ||
           (t == "null" && v.is_null()) || (t == "number" && v.is_number()) ||
           (t == "integer" && v.is_number_integer());
    }
    if (!ok) {
      errors.push_back(path + ": wrong type");
      return;
    }
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) errors.push_back(path + ": below minimum");
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) errors.push_back(path + ": above maximum");
    if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>()) {
      errors.push_back(path + ": not above exclusiveMinimum");
    }
  }
  if (v.is_object()) {
    for (const auto& r : schema.value("required", json::array())) {
      if (!v.contains(r.get<std::string>())) errors.push_back(path + ": missing " + r.get<std::string>());
    }
    const json props = schema.value("properties", json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        Validate(props[it.key()], root, it.value(), path + "." + it.key(), errors);
      } else if (schema.contains("additionalProperties") && !schema["additionalProperties"].get<bool>()) {
        errors.push_back(path + ": unexpected " + it.key());
      }
    }
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>()) {
      errors.push_back(path + ": too few items");
    }
    if (schema.contains("items")) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        Validate(schema["items"], root, v[k], path + "[" + std::to_string(k) + "]", errors);
      }
    }
  }
}

std::vector<std::string> SchemaErrors(const json& doc) {
  const json schema =
      json::parse(ReadTextFile(std::string(OPTCON_DOCS_DIR) + "/report.schema.json"));
  std::vector<std::string> errors;
  Validate(schema, schema, doc, "$", errors);
  return errors;
}

RunResult ShortRun() {
  const Scenario sc = ParseScenario(
      ReadTextFile(std::string(OPTCON_SCENARIO_DIR) + "/example2.json"),
      {{}, {"integrator.T=2", "integrator.log_every=250"}});
  return RunClosedLoop(sc);
}

TEST(ReportJson, RunReportIsSchemaValid) {
  const RunResult res = ShortRun();
  const json doc = json::parse(ReportToJson(res.report));
  const auto errors = SchemaErrors(doc);
  EXPECT_TRUE(errors.empty()) << errors.front();
  EXPECT_EQ(doc["final_output_errors"].size(), 4u);
  EXPECT_EQ(doc["y_star"].get<double>(), res.report.y_star);
}

TEST(ReportJson, ValidatorCatchesBrokenReports) {
  json doc = json::parse(ReportToJson(ShortRun().report));
  doc.erase("semistable");
  doc["extra"] = 1;
  doc["exp_fit"]["r_squared"] = 2.0;
  EXPECT_EQ(SchemaErrors(doc).size(), 3u);
}

TEST(ReportJson, NonFiniteValuesBecomeNull) {
  RunReport r;
  r.final_output_errors = Eigen::Vector2d(0.1, std::nan(""));
  r.theta_final = Eigen::Vector2d(0, 0);
  r.max_state_norm = INFINITY;
  const json doc = json::parse(ReportToJson(r));
  EXPECT_TRUE(doc["final_output_errors"][1].is_null());
  EXPECT_TRUE(doc["max_state_norm"].is_null());
}

TEST(TrajectoryCsv, HeaderAndRoundTrip) {
  const RunResult res = ShortRun();
  std::ostringstream out;
  WriteTrajectoryCsv(out, res.trajectory);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "t,y_1,y_2,y_3,y_4,r_1,r_2,r_3,r_4,u_1,u_2,u_3,u_4,"
            "theta_1,theta_2,theta_3,theta_4,v_1,v_2,v_3,v_4");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    ASSERT_EQ(cells.size(), 21u);
    EXPECT_EQ(cells[0], res.trajectory.times[rows]);
    EXPECT_EQ(cells[1], res.trajectory.outputs[rows](0));
    EXPECT_EQ(cells[12], res.trajectory.inputs[rows](3));
    EXPECT_EQ(cells[20], res.trajectory.v[rows](3));
    ++rows;
  }
  EXPECT_EQ(rows, res.trajectory.size());
}

TEST(LaplacianJson, Fields) {
  const Digraph g = Digraph::FromEdges(2, {{0, 1, 1}, {1, 0, 1}});
  const json doc = json::parse(LaplacianReportToJson(BuildLaplacian(g)));
  EXPECT_EQ(doc["n"], 2);
  EXPECT_DOUBLE_EQ(doc["lambda2"].get<double>(), 2.0);
  EXPECT_TRUE(doc["weight_balanced"].get<bool>());
  EXPECT_EQ(doc["laplacian"][0][1].get<double>(), -1.0);
}

}  // namespace
}  // namespace optcon
