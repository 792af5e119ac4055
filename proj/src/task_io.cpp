#include "sfebound/task_io.hpp"

#include <fstream>
#include <stdexcept>

namespace sfebound {

namespace {

std::int64_t get_int(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
  return it->get<std::int64_t>();
}

}  // namespace

SfeTask task_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("task document must be a JSON object");
  for (const char* key : {"prior", "x_prior", "y_prior", "distribution"}) {
    if (doc.contains(key)) throw std::invalid_argument("non-uniform input priors are not supported");
  }

  if (doc.contains("family")) {
    if (!doc["family"].is_string()) throw std::invalid_argument("'family' must be a string");
    FamilyParams params;
    params.family = parse_family(doc["family"].get<std::string>());
    const auto params_it = doc.find("params");
    if (params_it == doc.end() || !params_it->is_object()) throw std::invalid_argument("family task needs a 'params' object");
    if (params_it->contains("alphabet")) params.alphabet = get_int(*params_it, "alphabet");
    params.n = get_int(*params_it, "n");
    if (params_it->contains("k")) params.k = get_int(*params_it, "k");
    auto task = make_family(params);
    if (doc.contains("name") && doc["name"].is_string()) task.name = doc["name"].get<std::string>();
    return task;
  }

  SfeTask task;
  task.name = doc.value("name", std::string("task"));
  task.x_size = get_int(doc, "x_size");
  task.y_size = get_int(doc, "y_size");
  task.b_size = get_int(doc, "b_size");
  const auto table_it = doc.find("table");
  if (table_it == doc.end() || !table_it->is_array()) throw std::invalid_argument("explicit task needs a 'table' array");
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(table_it->size());
  for (const auto& row : *table_it) {
    if (!row.is_array()) throw std::invalid_argument("table rows must be arrays");
    auto& out = rows.emplace_back();
    out.reserve(row.size());
    for (const auto& cell : row) {
      if (!cell.is_number_integer()) throw std::invalid_argument("table entries must be integers");
      out.push_back(cell.get<std::int64_t>());
    }
  }
  task.table = std::move(rows);
  return task;
}

nlohmann::json task_to_json(const SfeTask& task) {
  nlohmann::json doc;
  if (task.family) {
    const auto& p = *task.family;
    doc["family"] = std::string(family_tag(p.family));
    nlohmann::json params = {{"n", p.n}};
    if (p.family == Family::kOneOfNOt || p.family == Family::kKOfNOt) params["alphabet"] = p.alphabet;
    if (p.family == Family::kKOfNOt) params["k"] = p.k;
    doc["params"] = params;
    return doc;
  }
  doc["name"] = task.name;
  doc["x_size"] = task.x_size;
  doc["y_size"] = task.y_size;
  doc["b_size"] = task.b_size;
  doc["table"] = task.table ? nlohmann::json(*task.table) : nlohmann::json::array();
  return doc;
}

SfeTask load_task_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open task file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed task file " + path.string() + ": " + e.what());
  }
  return task_from_json(doc);
}

}  // namespace sfebound
