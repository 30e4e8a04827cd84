#pragma once

// Minimal header-keyed CSV reading shared by the loaders. Fields are
// comma-separated without quoting; identifiers in this domain never contain
// commas.

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trackrec/error.hpp"

namespace trackrec::detail {

inline std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline void split(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

class Header {
 public:
  explicit Header(std::string_view line) {
    if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    std::vector<std::string_view> fields;
    split(line, fields);
    for (auto field : fields) names_.emplace_back(trim(field));
  }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }

  std::size_t require(std::string_view name) const {
    auto col = find(name);
    if (!col) throw Error(ErrorCode::kMissingColumn, "header lacks '" + std::string(name) + "'");
    return *col;
  }

 private:
  std::vector<std::string> names_;
};

}  // namespace trackrec::detail
