// Copyright 2026 The ambr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <istream>
#include <ostream>

#include "ambr/harness.h"

namespace ambr {

using nlohmann::json;

namespace {

[[noreturn]] void SchemaFail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kSchemaError, "field '" + field + "' " + why);
}

std::vector<double> NumberList(const json& j, const std::string& field) {
  if (!j.is_array()) SchemaFail(field, "must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) SchemaFail(field, "must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Instance InstanceFromJson(const json& j) {
  if (!j.is_object()) SchemaFail("<root>", "must be a JSON object");
  Instance inst;

  auto id = j.find("id");
  if (id == j.end()) SchemaFail("id", "is required");
  if (id->is_string()) {
    inst.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    inst.id = id->dump();
  } else {
    SchemaFail("id", "must be a string");
  }

  auto cands = j.find("candidates");
  if (cands == j.end()) SchemaFail("candidates", "is required");
  if (!cands->is_array()) SchemaFail("candidates", "must be an array of strings");
  for (const auto& c : *cands) {
    if (!c.is_string()) SchemaFail("candidates", "must be an array of strings");
    inst.candidates.push_back(c.get<std::string>());
  }

  if (auto e = j.find("embeddings"); e != j.end() && !e->is_null()) {
    if (!e->is_array()) SchemaFail("embeddings", "must be an array of arrays");
    std::vector<std::vector<double>> vectors;
    for (const auto& row : *e) vectors.push_back(NumberList(row, "embeddings"));
    inst.embeddings = std::move(vectors);
  }

  if (auto r = j.find("rewards"); r != j.end() && !r->is_null()) {
    inst.rewards = NumberList(*r, "rewards");
  }

  if (auto m = j.find("utility_matrix"); m != j.end() && !m->is_null()) {
    if (!m->is_array()) SchemaFail("utility_matrix", "must be an array of rows");
    const std::size_t n = m->size();
    SquareMatrix grid(n);
    for (std::size_t i = 0; i < n; ++i) {
      const json& row = (*m)[i];
      if (!row.is_array() || row.size() != n) {
        SchemaFail("utility_matrix", "must be N rows of N numbers");
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (row[k].is_number()) {
          grid.at(i, k) = row[k].get<double>();
        } else if (!(i == k && row[k].is_null())) {
          SchemaFail("utility_matrix", "must hold numbers off the diagonal");
        }
      }
    }
    inst.utility_matrix = std::move(grid);
  }

  inst.Validate();
  return inst;
}

json InstanceToJson(const Instance& instance) {
  json j;
  j["id"] = instance.id;
  j["candidates"] = instance.candidates;
  if (instance.embeddings) j["embeddings"] = *instance.embeddings;
  if (instance.rewards) j["rewards"] = *instance.rewards;
  if (instance.utility_matrix) {
    const SquareMatrix& m = *instance.utility_matrix;
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < m.size(); ++k) {
        row.push_back(i == k ? json(nullptr) : json(m.at(i, k)));
      }
      rows.push_back(std::move(row));
    }
    j["utility_matrix"] = std::move(rows);
  }
  return j;
}

std::vector<Instance> ParseInstances(std::istream& in,
                                     const std::string& source) {
  std::vector<Instance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParseError, where + ": " + e.what());
    }
    try {
      out.push_back(InstanceFromJson(j));
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchemaError, where + ": " + e.what());
    }
  }
  return out;
}

std::vector<Instance> LoadInstances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  return ParseInstances(in, path);
}

void WriteInstances(std::ostream& out, std::span<const Instance> instances) {
  for (const Instance& inst : instances) out << InstanceToJson(inst).dump() << '\n';
}

}  // namespace ambr
