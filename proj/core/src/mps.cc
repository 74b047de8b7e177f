// Copyright 2026 The rpdhg Authors.
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

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rpdhg/errors.h"
#include "rpdhg/model.h"

namespace rpdhg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitFree(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> SplitFixed(const std::string& line) {
  static const int kStart[] = {1, 4, 14, 24, 39, 49};
  static const int kLen[] = {2, 8, 8, 12, 8, 12};
  std::vector<std::string> out;
  for (int f = 0; f < 6; ++f) {
    if (static_cast<int>(line.size()) <= kStart[f]) break;
    const std::string field = Trim(line.substr(kStart[f], kLen[f]));
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

double ParseNumber(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') {
    throw ParseError("invalid number '" + tok + "'", line);
  }
  return v;
}

enum class Section {
  kNone, kName, kRows, kColumns, kRhs, kRanges, kBounds, kObjSense, kEnd
};

class MpsParser {
 public:
  explicit MpsParser(MpsFormat format) : format_(format) {}

  RawLp Parse(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (Trim(line).empty() || line[0] == '*') continue;
      if (line[0] != ' ' && line[0] != '\t') {
        Header(line, lineno);
        if (section_ == Section::kEnd) break;
        continue;
      }
      Data(line, lineno);
    }
    if (section_ != Section::kEnd) {
      lp_.warnings.push_back("missing ENDATA section");
    }
    if (lp_.objective_row.empty()) {
      lp_.warnings.push_back("no objective row; using zero objective");
    }
    if (maximize_) {
      for (double& v : lp_.objective) v = -v;
      lp_.objective_constant = -lp_.objective_constant;
      lp_.warnings.push_back("OBJSENSE MAX converted to minimization");
    }
    return std::move(lp_);
  }

 private:
  void Header(const std::string& line, int lineno) {
    const std::vector<std::string> tok = SplitFree(line);
    const std::string& key = tok[0];
    if (key == "NAME") {
      section_ = Section::kName;
      if (tok.size() > 1) lp_.name = tok[1];
    } else if (key == "ROWS") {
      section_ = Section::kRows;
    } else if (key == "COLUMNS") {
      section_ = Section::kColumns;
    } else if (key == "RHS") {
      section_ = Section::kRhs;
    } else if (key == "RANGES") {
      section_ = Section::kRanges;
    } else if (key == "BOUNDS") {
      section_ = Section::kBounds;
    } else if (key == "OBJSENSE") {
      section_ = Section::kObjSense;
      if (tok.size() > 1) SetSense(tok[1], lineno);
    } else if (key == "ENDATA") {
      section_ = Section::kEnd;
    } else {
      throw ParseError("unsupported section '" + key + "'", lineno);
    }
  }

  void SetSense(const std::string& s, int lineno) {
    if (s == "MAX" || s == "MAXIMIZE") {
      maximize_ = true;
    } else if (s != "MIN" && s != "MINIMIZE") {
      throw ParseError("unknown objective sense '" + s + "'", lineno);
    }
  }

  void Data(const std::string& line, int lineno) {
    const std::vector<std::string> tok =
        format_ == MpsFormat::kFixed ? SplitFixed(line) : SplitFree(line);
    if (tok.empty()) return;
    switch (section_) {
      case Section::kRows: Row(tok, lineno); break;
      case Section::kColumns: Column(tok, lineno); break;
      case Section::kRhs: Rhs(tok, lineno); break;
      case Section::kRanges: Ranges(tok, lineno); break;
      case Section::kBounds: Bound(tok, lineno); break;
      case Section::kObjSense: SetSense(tok[0], lineno); break;
      default:
        throw ParseError("data line outside a section", lineno);
    }
  }

  void Row(const std::vector<std::string>& tok, int lineno) {
    if (tok.size() != 2) throw ParseError("ROWS line needs type and name", lineno);
    const std::string& type = tok[0];
    const std::string& name = tok[1];
    if (type != "N" && type != "E" && type != "L" && type != "G") {
      throw ParseError("unknown row type '" + type + "'", lineno);
    }
    if (row_index_.count(name) || name == lp_.objective_row) {
      throw ParseError("duplicate row name '" + name + "'", lineno);
    }
    if (type == "N" && lp_.objective_row.empty()) {
      lp_.objective_row = name;
      return;
    }
    row_index_[name] = static_cast<int>(lp_.row_names.size());
    lp_.row_names.push_back(name);
    lp_.row_types.push_back(type[0]);
    lp_.rhs.push_back(0.0);
    lp_.range.push_back(std::numeric_limits<double>::quiet_NaN());
  }

  int ColumnIndex(const std::string& name) {
    auto it = col_index_.find(name);
    if (it != col_index_.end()) return it->second;
    const int j = static_cast<int>(lp_.col_names.size());
    col_index_[name] = j;
    lp_.col_names.push_back(name);
    lp_.objective.push_back(0.0);
    lp_.lower.push_back(0.0);
    lp_.upper.push_back(kInf);
    return j;
  }

  void Column(const std::vector<std::string>& tok, int lineno) {
    if (tok.size() >= 2 && tok[1] == "'MARKER'") return;
    if (tok.size() != 3 && tok.size() != 5) {
      throw ParseError("COLUMNS line needs 3 or 5 fields", lineno);
    }
    const int j = ColumnIndex(tok[0]);
    for (size_t k = 1; k + 1 < tok.size(); k += 2) {
      const double v = ParseNumber(tok[k + 1], lineno);
      if (tok[k] == lp_.objective_row) {
        lp_.objective[j] += v;
        continue;
      }
      auto it = row_index_.find(tok[k]);
      if (it == row_index_.end()) {
        throw ParseError("unknown row '" + tok[k] + "'", lineno);
      }
      lp_.entries.push_back({it->second, j, v});
    }
  }

  // RHS and RANGES lines carry an optional set name.
  template <typename F>
  void Pairs(const std::vector<std::string>& tok, int lineno, F&& apply) {
    const size_t first = tok.size() % 2 == 1 ? 1 : 0;
    if (tok.size() - first != 2 && tok.size() - first != 4) {
      throw ParseError("expected name/value pairs", lineno);
    }
    for (size_t k = first; k + 1 < tok.size(); k += 2) {
      apply(tok[k], ParseNumber(tok[k + 1], lineno));
    }
  }

  void Rhs(const std::vector<std::string>& tok, int lineno) {
    Pairs(tok, lineno, [&](const std::string& row, double v) {
      if (row == lp_.objective_row) {
        lp_.objective_constant = -v;
        return;
      }
      auto it = row_index_.find(row);
      if (it == row_index_.end()) {
        throw ParseError("unknown row '" + row + "'", lineno);
      }
      lp_.rhs[it->second] = v;
    });
  }

  void Ranges(const std::vector<std::string>& tok, int lineno) {
    Pairs(tok, lineno, [&](const std::string& row, double v) {
      auto it = row_index_.find(row);
      if (it == row_index_.end()) {
        throw ParseError("unknown row '" + row + "'", lineno);
      }
      lp_.range[it->second] = v;
    });
  }

  void Bound(const std::vector<std::string>& tok, int lineno) {
    const std::string& type = tok[0];
    static const char* kValued[] = {"UP", "LO", "FX", "LI", "UI"};
    static const char* kUnvalued[] = {"FR", "MI", "PL", "BV"};
    bool valued = false, known = false;
    for (const char* k : kValued) valued = valued || type == k;
    for (const char* k : kUnvalued) known = known || type == k;
    if (!valued && !known) {
      throw ParseError("unknown bound key '" + type + "'", lineno);
    }
    // Set name is optional: valued lines have 3 or 4 fields, others 2 or 3.
    const size_t expected = valued ? 4 : 3;
    if (tok.size() != expected && tok.size() != expected - 1) {
      throw ParseError("malformed bound line for key '" + type + "'", lineno);
    }
    const size_t col_pos = tok.size() == expected ? 2 : 1;
    auto it = col_index_.find(tok[col_pos]);
    if (it == col_index_.end()) {
      throw ParseError("unknown column '" + tok[col_pos] + "'", lineno);
    }
    const int j = it->second;
    const double v = valued ? ParseNumber(tok[col_pos + 1], lineno) : 0.0;
    if (type == "UP" || type == "UI") {
      lp_.upper[j] = v;
      if (v < 0.0 && lp_.lower[j] == 0.0) {
        lp_.lower[j] = -kInf;
        lp_.warnings.push_back("negative UP bound on '" + tok[col_pos] +
                               "' sets lower bound to -inf");
      }
    } else if (type == "LO" || type == "LI") {
      lp_.lower[j] = v;
    } else if (type == "FX") {
      lp_.lower[j] = v;
      lp_.upper[j] = v;
    } else if (type == "FR") {
      lp_.lower[j] = -kInf;
      lp_.upper[j] = kInf;
    } else if (type == "MI") {
      lp_.lower[j] = -kInf;
    } else if (type == "PL") {
      lp_.upper[j] = kInf;
    } else if (type == "BV") {
      lp_.lower[j] = 0.0;
      lp_.upper[j] = 1.0;
    }
  }

  MpsFormat format_;
  Section section_ = Section::kNone;
  bool maximize_ = false;
  RawLp lp_;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<std::string, int> col_index_;
};

}  // namespace

RawLp ParseMps(std::istream& in, MpsFormat format) {
  return MpsParser(format).Parse(in);
}

RawLp ReadMps(const std::string& path, MpsFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return ParseMps(in, format);
}

}  // namespace rpdhg
