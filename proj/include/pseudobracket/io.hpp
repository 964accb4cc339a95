#pragma once

// Reading and writing diagrams and polynomials.
//
// Text PD (knots only):
//
//   # comment
//   X(1,5,2,4) X(3,1,4,6) P(5,3,6,2)
//
// Arcs are numbered 1..2n and arc k is followed by arc k+1 (2n by 1). An
// input with no terms is the zero-crossing unknot.
//
// JSON PD (links allowed):
//
//   {"crossings":[{"kind":"X","arcs":[1,5,2,4]}, ...],
//    "successor":{"1":2, ...}}

#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pseudobracket/diagram.hpp"
#include "pseudobracket/errors.hpp"
#include "pseudobracket/obstruction.hpp"
#include "pseudobracket/polynomial.hpp"

namespace pseudobracket {

  using json = nlohmann::json;

  ////////////////////////////////////////////////////////////////////////
  // Text PD
  ////////////////////////////////////////////////////////////////////////

  inline PseudoDiagram parse_pd_text(std::string_view input) {
    std::vector<Crossing> crossings;
    std::size_t           line = 1;
    std::size_t           i    = 0;

    auto fail = [&line](std::string const& what) {
      throw ParseError("line " + std::to_string(line) + ": " + what);
    };

    while (i < input.size()) {
      char const c = input[i];
      if (c == '\n') {
        ++line;
        ++i;
      } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        ++i;
      } else if (c == '#') {
        while (i < input.size() && input[i] != '\n') {
          ++i;
        }
      } else if (c == 'X' || c == 'P') {
        Crossing x;
        x.kind = c == 'X' ? CrossingKind::classical : CrossingKind::pseudo;
        ++i;
        if (i >= input.size() || input[i] != '(') {
          fail(std::string("expected '(' after ") + c);
        }
        ++i;
        std::vector<long long> nums;
        std::string            cur;
        for (; i < input.size() && input[i] != ')'; ++i) {
          char const d = input[i];
          if (std::isdigit(static_cast<unsigned char>(d)) || (d == '-' && cur.empty())) {
            cur += d;
          } else if (d == ',' || std::isspace(static_cast<unsigned char>(d))) {
            if (d == '\n') {
              ++line;
            }
            if (!cur.empty()) {
              try {
                nums.push_back(std::stoll(cur));
              } catch (std::exception const&) {
                fail("bad arc id '" + cur + "'");
              }
              cur.clear();
            }
          } else {
            fail(std::string("unexpected character '") + d + "' in crossing term");
          }
        }
        if (i >= input.size()) {
          fail("unterminated crossing term");
        }
        ++i;  // ')'
        if (!cur.empty()) {
          try {
            nums.push_back(std::stoll(cur));
          } catch (std::exception const&) {
            fail("bad arc id '" + cur + "'");
          }
        }
        if (nums.size() != 4) {
          fail("crossing term has " + std::to_string(nums.size()) + " arcs (expected 4)");
        }
        for (int s = 0; s < 4; ++s) {
          if (nums[s] <= 0 || nums[s] > 1'000'000'000) {
            fail("arc id " + std::to_string(nums[s]) + " out of range");
          }
          x.arcs[s] = static_cast<ArcId>(nums[s]);
        }
        crossings.push_back(x);
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
    }

    if (crossings.empty()) {
      return PseudoDiagram::unknot();
    }

    std::size_t const n_arcs = 2 * crossings.size();
    std::vector<int>  count(n_arcs + 1, 0);
    for (auto const& x : crossings) {
      for (ArcId a : x.arcs) {
        if (static_cast<std::size_t>(a) > n_arcs) {
          throw ValidationError("arc " + std::to_string(a) + " exceeds 2n = "
                                + std::to_string(n_arcs));
        }
        ++count[a];
      }
    }
    for (std::size_t a = 1; a <= n_arcs; ++a) {
      if (count[a] != 2) {
        throw ValidationError("arc " + std::to_string(a) + " appears "
                              + std::to_string(count[a]) + " times (expected 2)");
      }
    }
    std::map<ArcId, ArcId> succ;
    for (std::size_t a = 1; a <= n_arcs; ++a) {
      succ[static_cast<ArcId>(a)] = static_cast<ArcId>(a == n_arcs ? 1 : a + 1);
    }
    return PseudoDiagram(std::move(crossings), std::move(succ));
  }

  // Needs a knot numbered 1..m in order along the orientation.
  inline std::string render_pd_text(PseudoDiagram const& D) {
    std::size_t const m = D.num_arcs();
    for (auto const& [a, b] : D.successor()) {
      ArcId const want = static_cast<std::size_t>(a) == m ? 1 : a + 1;
      if (a < 1 || static_cast<std::size_t>(a) > m || b != want) {
        throw ValidationError("text PD needs a single component with arcs numbered "
                              "consecutively; use JSON or relabel_sequential");
      }
    }
    if (D.size() == 0) {
      return "";
    }
    std::string out;
    for (auto const& c : D.crossings()) {
      if (!out.empty()) {
        out += ' ';
      }
      out += c.is_classical() ? "X(" : "P(";
      for (int s = 0; s < 4; ++s) {
        out += std::to_string(c.arcs[s]);
        out += s == 3 ? ")" : ",";
      }
    }
    return out + "\n";
  }

  ////////////////////////////////////////////////////////////////////////
  // JSON PD
  ////////////////////////////////////////////////////////////////////////

  inline PseudoDiagram pd_from_json(json const& j) {
    try {
      if (!j.is_object() || !j.contains("crossings") || !j.contains("successor")) {
        throw ParseError("expected an object with \"crossings\" and \"successor\"");
      }
      std::vector<Crossing> crossings;
      for (auto const& c : j.at("crossings")) {
        Crossing          x;
        std::string const kind = c.at("kind").get<std::string>();
        if (kind == "X") {
          x.kind = CrossingKind::classical;
        } else if (kind == "P") {
          x.kind = CrossingKind::pseudo;
        } else {
          throw ParseError("crossing kind must be \"X\" or \"P\", got \"" + kind + "\"");
        }
        auto const& arcs = c.at("arcs");
        if (!arcs.is_array() || arcs.size() != 4) {
          throw ParseError("each crossing needs exactly 4 arcs");
        }
        for (int s = 0; s < 4; ++s) {
          x.arcs[s] = arcs.at(s).get<ArcId>();
        }
        crossings.push_back(x);
      }
      std::map<ArcId, ArcId> succ;
      for (auto const& item : j.at("successor").items()) {
        std::string const key = item.key();
        std::size_t       pos = 0;
        ArcId const a   = std::stoi(key, &pos);
        if (pos != key.size()) {
          throw ParseError("successor key '" + key + "' is not an integer");
        }
        succ[a] = item.value().get<ArcId>();
      }
      return PseudoDiagram(std::move(crossings), std::move(succ));
    } catch (json::exception const& e) {
      throw ParseError(std::string("bad diagram JSON: ") + e.what());
    } catch (std::invalid_argument const&) {
      throw ParseError("bad diagram JSON: non-integer successor key");
    } catch (std::out_of_range const&) {
      throw ParseError("bad diagram JSON: arc id out of range");
    }
  }

  inline PseudoDiagram parse_pd_json(std::string_view input) {
    json j;
    try {
      j = json::parse(input);
    } catch (json::parse_error const& e) {
      throw ParseError(std::string("bad JSON: ") + e.what());
    }
    return pd_from_json(j);
  }

  inline json pd_to_json(PseudoDiagram const& D) {
    json crossings = json::array();
    for (auto const& c : D.crossings()) {
      crossings.push_back({{"kind", c.is_classical() ? "X" : "P"},
                           {"arcs", {c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3]}}});
    }
    json succ = json::object();
    for (auto const& [a, b] : D.successor()) {
      succ[std::to_string(a)] = b;
    }
    return {{"crossings", crossings}, {"successor", succ}};
  }

  inline std::string render_pd_json(PseudoDiagram const& D) {
    return pd_to_json(D).dump() + "\n";
  }

  inline std::string read_file(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ParseError("cannot read " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  // By extension: .json is JSON PD, anything else text PD.
  inline PseudoDiagram load_diagram(std::string const& path) {
    std::string const text    = read_file(path);
    bool const        is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return is_json ? parse_pd_json(text) : parse_pd_text(text);
  }

  ////////////////////////////////////////////////////////////////////////
  // Polynomials and reports
  ////////////////////////////////////////////////////////////////////////

  // {"<v degree>": [[a_exponent, "coefficient"], ...], ...}
  inline json to_json(PseudoPoly const& p) {
    json out = json::object();
    for (auto const& [v, c] : p.coeffs()) {
      json terms = json::array();
      for (auto const& [a, k] : c.terms()) {
        terms.push_back({a, k.str()});
      }
      out[std::to_string(v)] = terms;
    }
    return out;
  }

  inline PseudoPoly pseudo_poly_from_json(json const& j) {
    try {
      if (!j.is_object()) {
        throw ParseError("polynomial JSON must be an object");
      }
      PseudoPoly p;
      for (auto const& item : j.items()) {
        int const v = std::stoi(item.key());
        if (v < 0) {
          throw ParseError("negative V degree in polynomial JSON");
        }
        for (auto const& t : item.value()) {
          p += PseudoPoly::v_power(
              LaurentPoly::monomial(Integer(t.at(1).get<std::string>().c_str()),
                                    t.at(0).get<int>()),
              v);
        }
      }
      return p;
    } catch (ParseError const&) {
      throw;
    } catch (std::exception const& e) {
      throw ParseError(std::string("bad polynomial JSON: ") + e.what());
    }
  }

  inline json to_json(ObstructionReport const& r) {
    return {{"crossing", r.index},
            {"sign", to_int(r.sign)},
            {"verdict", to_string(r.verdict)},
            {"v_part", to_json(r.v_part)},
            {"v_part_text", to_string(r.v_part)},
            {"bracket_square", to_json(r.bracket_square)},
            {"bracket_plus", to_json(r.bracket_plus)},
            {"bracket_minus", to_json(r.bracket_minus)},
            {"relation_plus_ok", r.relation_plus_ok},
            {"relation_minus_ok", r.relation_minus_ok}};
  }

}  // namespace pseudobracket
