#pragma once

// KnotInfo PD notation and data files.
//
// Accepted PD strings:
//
//   PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]
//   [[1,5,2,4],[3,1,4,6],[5,3,6,2]]
//
// The data file is a CSV (comma or '|' separated, double-quote quoting) with
// a name column and a PD column.

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "pseudobracket/errors.hpp"

namespace pseudobracket {

  // KnotInfo PD notation to text PD terms. An empty code is the unknot.
  inline std::string knotinfo_pd_to_text(std::string_view pd) {
    std::string s(pd);
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.rfind("PD", 0) == 0) {
      s = s.substr(2);
    }
    if (s.empty() || s == "[]") {
      return "";
    }
    static std::regex const quad(R"((?:X)?\[(\d+),(\d+),(\d+),(\d+)\])");

    std::string out;
    std::string rest;
    std::string tail = s;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), quad); it != std::sregex_iterator();
         ++it) {
      auto const& m = *it;
      rest += m.prefix().str();
      tail = m.suffix().str();
      if (!out.empty()) {
        out += ' ';
      }
      out += "X(" + m[1].str() + "," + m[2].str() + "," + m[3].str() + "," + m[4].str() + ")";
    }
    rest += tail;
    // Only the enclosing brackets and separators may be left over.
    bool const clean = std::all_of(rest.begin(), rest.end(),
                                   [](char c) { return c == '[' || c == ']' || c == ','; });
    if (out.empty() || !clean) {
      throw ParseError("malformed PD notation: '" + std::string(pd) + "'");
    }
    return out + "\n";
  }

  namespace detail {

    inline std::vector<std::vector<std::string>> parse_csv(std::string_view text, char delim) {
      std::vector<std::vector<std::string>> rows;
      std::vector<std::string>              row;
      std::string                           field;
      bool                                  quoted   = false;
      bool                                  any      = false;
      for (std::size_t i = 0; i < text.size(); ++i) {
        char const c = text[i];
        if (quoted) {
          if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            ++i;
          } else if (c == '"') {
            quoted = false;
          } else {
            field += c;
          }
          continue;
        }
        if (c == '"') {
          quoted = true;
          any    = true;
        } else if (c == delim) {
          row.push_back(std::move(field));
          field.clear();
          any = true;
        } else if (c == '\n' || c == '\r') {
          if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            ++i;
          }
          if (any || !field.empty()) {
            row.push_back(std::move(field));
            rows.push_back(std::move(row));
          }
          row.clear();
          field.clear();
          any = false;
        } else {
          field += c;
          any = true;
        }
      }
      if (quoted) {
        throw ParseError("unterminated quoted field in CSV");
      }
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      return rows;
    }

    inline std::string lower(std::string s) {
      std::transform(s.begin(), s.end(), s.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      return s;
    }

    // "11n_1", "11n1" and "K11n1" all name the same knot.
    inline std::string knot_key(std::string const& name) {
      std::string k;
      for (char c : lower(name)) {
        if (c != '_' && !std::isspace(static_cast<unsigned char>(c))) {
          k += c;
        }
      }
      if (k.size() > 1 && k[0] == 'k' && std::isdigit(static_cast<unsigned char>(k[1]))) {
        k.erase(0, 1);
      }
      return k;
    }

  }  // namespace detail

  // PD notation for `name` from a KnotInfo CSV, or nullopt if absent.
  inline std::optional<std::string> knotinfo_lookup(std::string_view csv,
                                                    std::string const& name) {
    auto const first_nl = csv.find('\n');
    auto const header   = csv.substr(0, first_nl);
    char const delim    = std::count(header.begin(), header.end(), '|')
                                 > std::count(header.begin(), header.end(), ',')
                              ? '|'
                              : ',';
    auto rows = detail::parse_csv(csv, delim);
    if (rows.empty()) {
      throw ParseError("empty KnotInfo file");
    }
    auto const& head = rows.front();
    auto find_col = [&head](auto pred) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < head.size(); ++i) {
        if (pred(detail::lower(head[i]))) {
          return i;
        }
      }
      return std::nullopt;
    };
    auto name_col = find_col([](std::string const& h) { return h == "name"; });
    auto pd_col   = find_col([](std::string const& h) {
      return h == "pd_notation" || h == "pd notation" || h == "pd";
    });
    if (!name_col || !pd_col) {
      throw ParseError("KnotInfo file needs 'name' and 'pd_notation' columns");
    }

    std::optional<std::string> fuzzy;
    std::string const          key = detail::knot_key(name);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      auto const& row = rows[r];
      if (row.size() <= std::max(*name_col, *pd_col)) {
        continue;
      }
      if (row[*name_col] == name) {
        return row[*pd_col];
      }
      if (!fuzzy && detail::knot_key(row[*name_col]) == key) {
        fuzzy = row[*pd_col];
      }
    }
    return fuzzy;
  }

}  // namespace pseudobracket
