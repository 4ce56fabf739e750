#include "treespectra/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treespectra/errors.hpp"

namespace treespectra {

namespace {

using nlohmann::json;

std::string id_of(const json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ModelError(std::string(what) + " must be a string or an integer");
}

double real_of(const json& j, const char* what) {
  if (!j.is_number()) throw ModelError(std::string(what) + " must be a number");
  return j.get<double>();
}

const json& required(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ModelError(std::string(where) + " is missing \"" + key + "\"");
  return *it;
}

}  // namespace

ModelDescription parse_model_description(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("malformed model document: top level must be an object");

  ModelDescription d;
  if (auto it = doc.find("degree_bound"); it != doc.end()) {
    if (!it->is_number_integer()) throw ModelError("degree_bound must be an integer");
    d.degree_bound = it->get<int>();
  }
  d.origin = id_of(required(doc, "origin", "model"), "origin");

  const json& vertices = required(doc, "vertices", "model");
  if (!vertices.is_array()) throw ModelError("\"vertices\" must be an array");
  for (const auto& v : vertices) {
    if (!v.is_object()) throw ModelError("vertex entries must be objects");
    ModelDescription::VertexSpec vs;
    vs.id = id_of(required(v, "id", "vertex"), "vertex id");
    vs.potential = v.contains("potential") ? real_of(v["potential"], "potential") : 0.0;
    if (v.contains("diagonal")) vs.diagonal = real_of(v["diagonal"], "diagonal");
    d.vertices.push_back(std::move(vs));
  }

  const json& edges = required(doc, "edges", "model");
  if (!edges.is_array()) throw ModelError("\"edges\" must be an array");
  for (const auto& e : edges) {
    if (!e.is_object()) throw ModelError("edge entries must be objects");
    ModelDescription::EdgeSpec es;
    es.a = id_of(required(e, "a", "edge"), "edge endpoint");
    es.b = id_of(required(e, "b", "edge"), "edge endpoint");
    if (e.contains("weight")) es.weight = real_of(e["weight"], "weight");
    d.edges.push_back(std::move(es));
  }

  if (auto it = doc.find("tail"); it != doc.end() && !it->is_null()) {
    const json& t = *it;
    if (!t.is_object()) throw ModelError("\"tail\" must be an object");
    ModelDescription::TailSpec ts;
    const json& frontier = required(t, "frontier", "tail");
    if (!frontier.is_array()) throw ModelError("tail frontier must be an array");
    for (const auto& f : frontier) ts.frontier.push_back(id_of(f, "frontier id"));
    const json& q = required(t, "branching", "tail");
    if (!q.is_number_integer()) throw ModelError("tail branching must be an integer");
    ts.branching = q.get<int>();
    ts.potential = t.contains("potential") ? real_of(t["potential"], "tail potential") : 0.0;
    if (t.contains("weight")) ts.weight = real_of(t["weight"], "tail weight");
    d.tail = std::move(ts);
  }
  return d;
}

TreeModel load_model(std::string_view document) { return TreeModel(parse_model_description(document)); }

TreeModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string to_document(const ModelDescription& d) {
  json doc;
  doc["degree_bound"] = d.degree_bound;
  doc["origin"] = d.origin;
  doc["vertices"] = json::array();
  for (const auto& v : d.vertices) {
    json j{{"id", v.id}, {"potential", v.potential}};
    if (v.diagonal) j["diagonal"] = *v.diagonal;
    doc["vertices"].push_back(std::move(j));
  }
  doc["edges"] = json::array();
  for (const auto& e : d.edges) {
    json j{{"a", e.a}, {"b", e.b}};
    if (e.weight) j["weight"] = *e.weight;
    doc["edges"].push_back(std::move(j));
  }
  if (d.tail) {
    json t{{"frontier", d.tail->frontier}, {"branching", d.tail->branching}, {"potential", d.tail->potential}};
    if (d.tail->weight) t["weight"] = *d.tail->weight;
    doc["tail"] = std::move(t);
  }
  return doc.dump(2);
}

}  // namespace treespectra
