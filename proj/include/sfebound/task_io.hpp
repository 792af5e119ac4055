#pragma once

#include <filesystem>

#include <json.hpp>

#include "sfebound/task_model.hpp"

namespace sfebound {

/// Parses either {"name", "x_size", "y_size", "b_size", "table"} with
/// table[x][y] = f(x, y), or {"family": tag, "params": {...}}. Inputs are
/// always uniform; a document carrying a prior is rejected. Throws
/// std::invalid_argument on malformed input; explicit tables are returned
/// even when they fail validate_task, so callers can report the defects.
SfeTask task_from_json(const nlohmann::json& doc);

/// Family tasks serialize in parametric form, explicit tasks with their table.
nlohmann::json task_to_json(const SfeTask& task);

SfeTask load_task_file(const std::filesystem::path& path);

}  // namespace sfebound
