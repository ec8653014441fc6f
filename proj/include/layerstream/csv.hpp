// Copyright 2026 The layerstream Authors
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

#pragma once

#include <string>
#include <vector>

namespace layerstream {

// Minimal string-cell CSV table (no quoting; our outputs never need it).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::string to_string() const;

  static CsvTable parse(const std::string& text, const std::string& name);
  static CsvTable load(const std::string& path);
  void save(const std::string& path) const;
};

std::string format_double(double value);

}  // namespace layerstream
