// Copyright 2026 The qumem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qumem/common.hpp"
#include "qumem/hysteresis.hpp"

namespace qumem::io {

/// Writes to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string trace_csv(const hysteresis::Trace& trace);
nlohmann::json trace_metadata(const hysteresis::Trace& trace);

/// Fixed-precision decimal so that repeated runs emit identical bytes.
std::string format_number(double x);

nlohmann::json matrix_json(const CMatrix& m);
nlohmann::json vector_json(const RVector& v);

}  // namespace qumem::io
