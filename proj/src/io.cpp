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

#include "qumem/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qumem::io {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw DataError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string trace_csv(const hysteresis::Trace& trace) {
  std::ostringstream out;
  out << "t,n_in,n_out,R\n";
  for (const auto& row : trace.rows)
    out << format_number(row.t) << ',' << format_number(row.n_in) << ',' << format_number(row.n_out) << ','
        << format_number(row.r) << '\n';
  return out.str();
}

nlohmann::json trace_metadata(const hysteresis::Trace& trace) {
  return {{"window_s", trace.window}, {"t_osc_s", trace.t_osc}, {"f_cut_hz", trace.f_cut},
          {"law", trace.law},         {"noise", trace.noise},   {"seed", trace.seed},
          {"rows", trace.rows.size()}};
}

nlohmann::json matrix_json(const CMatrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json vector_json(const RVector& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace qumem::io
