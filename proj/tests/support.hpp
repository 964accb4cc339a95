#pragma once

// Shared test helpers: an independent state-sum oracle, random diagram
// generators and fixture loading.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pseudobracket/bracket.hpp"
#include "pseudobracket/diagram.hpp"
#include "pseudobracket/io.hpp"
#include "pseudobracket/knotinfo.hpp"
#include "pseudobracket/moves.hpp"

namespace testing {

  namespace pb = pseudobracket;

  inline std::string fixture(std::string const& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
  }

  ////////////////////////////////////////////////////////////////////////
  // Oracle
  //
  // Works from the raw crossing tuples and successor map only. Polynomials
  // are maps (V degree, A exponent) -> coefficient.
  ////////////////////////////////////////////////////////////////////////

  using OPoly = std::map<std::pair<int, int>, long long>;

  inline OPoly o_mul(OPoly const& x, OPoly const& y) {
    OPoly out;
    for (auto const& [kx, cx] : x) {
      for (auto const& [ky, cy] : y) {
        out[{kx.first + ky.first, kx.second + ky.second}] += cx * cy;
      }
    }
    std::erase_if(out, [](auto const& t) { return t.second == 0; });
    return out;
  }

  inline void o_add(OPoly& x, OPoly const& y) {
    for (auto const& [k, c] : y) {
      x[k] += c;
    }
    std::erase_if(x, [](auto const& t) { return t.second == 0; });
  }

  inline OPoly o_from(pb::PseudoPoly const& p) {
    OPoly out;
    for (auto const& [v, c] : p.coeffs()) {
      for (auto const& [a, k] : c.terms()) {
        out[{v, a}] = k.convert_to<long long>();
      }
    }
    return out;
  }

  // nullopt if the data does not fix the strand directions the oracle needs.
  inline std::optional<OPoly> oracle_bracket(pb::PseudoDiagram const& D) {
    auto const& xs   = D.crossings();
    auto const& succ = D.successor();
    std::size_t const n = xs.size();

    // in[i][strand] = incoming slot of strand (0: slots 0/2, 1: slots 1/3).
    // Candidates come from the successor map; pick any choice in which every
    // arc has exactly one incoming end.
    std::vector<std::array<std::vector<int>, 2>> cand(n);
    std::vector<std::pair<std::size_t, int>>     open;
    for (std::size_t i = 0; i < n; ++i) {
      auto const& a = xs[i].arcs;
      for (int st = 0; st < 2; ++st) {
        if (st == 0 && xs[i].is_classical()) {
          cand[i][0] = {0};
          continue;
        }
        if (succ.at(a[st]) == a[st + 2]) {
          cand[i][st].push_back(st);
        }
        if (succ.at(a[st + 2]) == a[st]) {
          cand[i][st].push_back(st + 2);
        }
        if (cand[i][st].empty()) {
          return std::nullopt;
        }
        if (cand[i][st].size() == 2) {
          open.push_back({i, st});
        }
      }
    }
    if (open.size() > 16) {
      return std::nullopt;
    }
    std::vector<std::array<int, 2>> in(n);
    bool                            found = false;
    for (std::uint32_t mask = 0; mask < (1u << open.size()) && !found; ++mask) {
      for (std::size_t i = 0; i < n; ++i) {
        for (int st = 0; st < 2; ++st) {
          in[i][st] = cand[i][st][0];
        }
      }
      for (std::size_t k = 0; k < open.size(); ++k) {
        auto [i, st] = open[k];
        in[i][st]    = cand[i][st][(mask >> k) & 1u];
      }
      std::map<pb::ArcId, int> heads;
      for (std::size_t i = 0; i < n; ++i) {
        for (int st = 0; st < 2; ++st) {
          ++heads[xs[i].arcs[in[i][st]]];
        }
      }
      found = true;
      for (auto const& [arc, unused] : succ) {
        bool const attached = std::any_of(xs.begin(), xs.end(), [arc](auto const& c) {
          return std::find(c.arcs.begin(), c.arcs.end(), arc) != c.arcs.end();
        });
        if (attached && heads[arc] != 1) {
          found = false;
        }
      }
    }
    if (!found) {
      return std::nullopt;
    }

    // Vertical: each incoming slot joined to its outgoing neighbour.
    auto vertical = [&](std::size_t i) {
      std::array<bool, 4> incoming{};
      incoming[in[i][0]] = incoming[in[i][1]] = true;
      std::vector<std::pair<int, int>> pairs;
      for (int s = 0; s < 4; ++s) {
        if (!incoming[s]) {
          continue;
        }
        int const nb = incoming[(s + 1) % 4] ? (s + 3) % 4 : (s + 1) % 4;
        pairs.push_back({s, nb});
      }
      return pairs;
    };
    // The two non-crossing matchings of four cyclic slots are {01,23} and
    // {03,12}; horizontal is whichever vertical is not.
    auto horizontal = [&](std::size_t i) {
      auto const v      = vertical(i);
      bool const has_01 = std::any_of(v.begin(), v.end(), [](auto const& p) {
        return (p.first == 0 && p.second == 1) || (p.first == 1 && p.second == 0);
      });
      return has_01 ? std::vector<std::pair<int, int>>{{0, 3}, {1, 2}}
                    : std::vector<std::pair<int, int>>{{0, 1}, {2, 3}};
    };

    // Endpoint graph: node 4*i + s. Arc edges are fixed.
    std::map<pb::ArcId, std::vector<int>> arc_nodes;
    for (std::size_t i = 0; i < n; ++i) {
      for (int s = 0; s < 4; ++s) {
        arc_nodes[xs[i].arcs[s]].push_back(static_cast<int>(4 * i + s));
      }
    }
    std::vector<int> arc_mate(4 * n);
    for (auto const& [arc, nodes] : arc_nodes) {
      arc_mate[nodes[0]] = nodes[1];
      arc_mate[nodes[1]] = nodes[0];
    }
    std::size_t const free_loops = succ.size() - arc_nodes.size();

    OPoly const d{{{0, 2}, -1}, {{0, -2}, -1}};
    OPoly const V{{{1, 0}, 1}};
    OPoly       H{{{0, 0}, 1}};
    for (auto const& [k, c] : o_mul(V, d)) {
      H[k] -= c;
    }

    OPoly total;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
      std::vector<int> state_mate(4 * n);
      OPoly            w{{{0, 0}, 1}};
      int              a_exp = 0;
      for (std::size_t i = 0; i < n; ++i) {
        bool const vert  = ((mask >> i) & 1u) == 0;
        auto const pairs = vert ? vertical(i) : horizontal(i);
        for (auto const& [s, t] : pairs) {
          state_mate[4 * i + s] = static_cast<int>(4 * i + t);
          state_mate[4 * i + t] = static_cast<int>(4 * i + s);
        }
        if (xs[i].is_classical()) {
          int const sign = in[i][1] == 3 ? 1 : -1;
          a_exp += vert ? sign : -sign;
        } else {
          w = o_mul(w, vert ? V : H);
        }
      }
      std::vector<bool> seen(4 * n, false);
      std::size_t       loops = free_loops;
      for (std::size_t s = 0; s < 4 * n; ++s) {
        if (seen[s]) {
          continue;
        }
        ++loops;
        int cur = static_cast<int>(s);
        while (!seen[cur]) {
          seen[cur]            = true;
          int const other      = arc_mate[cur];
          seen[other]          = true;
          cur                  = state_mate[other];
        }
      }
      OPoly term = o_mul(w, OPoly{{{0, a_exp}, 1}});
      for (std::size_t k = 1; k < loops; ++k) {
        term = o_mul(term, d);
      }
      o_add(total, term);
    }
    return total;
  }

  ////////////////////////////////////////////////////////////////////////
  // Generators
  ////////////////////////////////////////////////////////////////////////

  using Rng = std::mt19937_64;

  inline std::string random_braid_word(Rng& rng, int strands, int length, double p_pseudo) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::string                            w;
    for (int k = 0; k < length; ++k) {
      int const   pos = 1 + static_cast<int>(rng() % static_cast<unsigned>(strands - 1));
      double const r  = u(rng);
      std::string prefix = r < p_pseudo ? "p" : (rng() % 2 ? "-" : "");
      w += prefix + std::to_string(pos) + " ";
    }
    return w;
  }

  // A closed braid with 1..max_crossings crossings; knots only if asked.
  inline pb::PseudoDiagram random_braid_diagram(Rng& rng, int max_crossings, double p_pseudo,
                                                bool knot_only = false) {
    for (;;) {
      int const strands = 2 + static_cast<int>(rng() % 3);
      int const length  = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_crossings));
      try {
        auto D = pb::braid_closure(strands, random_braid_word(rng, strands, length, p_pseudo));
        if (!knot_only || D.num_components() == 1) {
          return D;
        }
      } catch (pb::Error const&) {
        // orientation not fixed by the PD code; draw again
      }
    }
  }

  inline std::vector<std::pair<std::string, pb::PseudoDiagram>> knotinfo_knots(
      int max_crossings) {
    std::string const csv = pb::read_file(fixture("knotinfo.csv"));
    auto              rows = pb::detail::parse_csv(csv, ',');
    std::vector<std::pair<std::string, pb::PseudoDiagram>> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (std::stoi(rows[r][1]) <= max_crossings) {
        out.emplace_back(rows[r][0], pb::parse_pd_text(pb::knotinfo_pd_to_text(rows[r][2])));
      }
    }
    return out;
  }

  // Braid closures and move-walk diagrams, with some crossings made pseudo.
  inline pb::PseudoDiagram random_diagram(Rng& rng, int max_crossings, double p_pseudo) {
    if (rng() % 2 == 0) {
      return random_braid_diagram(rng, max_crossings, p_pseudo);
    }
    static auto const bases = knotinfo_knots(6);
    auto D = bases[rng() % bases.size()].second;
    while (static_cast<int>(D.size()) > max_crossings - 2) {
      D = bases[rng() % bases.size()].second;
    }
    std::vector<pb::MoveKind> kinds{pb::MoveKind::r1_positive, pb::MoveKind::r1_negative,
                                    pb::MoveKind::r2};
    if (p_pseudo > 0) {
      kinds.push_back(pb::MoveKind::p1);
    }
    while (true) {
      auto m = pb::random_site(D, kinds[rng() % kinds.size()], rng);
      int const grow = m && m->kind == pb::MoveKind::r2 ? 2 : 1;
      if (!m || static_cast<int>(D.size()) + grow > max_crossings || rng() % 4 == 0) {
        break;
      }
      D = pb::apply(D, *m);
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < D.size(); ++i) {
      if (!D.crossing(i).is_classical()) {
        continue;
      }
      if (u(rng) < 0.3) {
        D = pb::switch_crossing(D, i);
      }
      if (u(rng) < p_pseudo) {
        D = pb::make_pseudo(D, i);
      }
    }
    return D;
  }

  // Classical knot diagrams with at most max_crossings crossings.
  inline pb::PseudoDiagram random_classical_knot(Rng& rng, int max_crossings) {
    for (;;) {
      auto D = random_diagram(rng, max_crossings, 0.0);
      if (D.num_components() == 1 && D.size() > 0) {
        return D;
      }
    }
  }

  inline pb::LaurentPoly random_laurent(Rng& rng, int terms = 4, int span = 6) {
    pb::LaurentPoly p;
    int const       n = static_cast<int>(rng() % static_cast<unsigned>(terms + 1));
    for (int k = 0; k < n; ++k) {
      int const e = static_cast<int>(rng() % static_cast<unsigned>(2 * span + 1)) - span;
      long long c = static_cast<long long>(rng() % 19) - 9;
      p += pb::LaurentPoly::monomial(c, e);
    }
    return p;
  }

  inline pb::PseudoPoly random_pseudo(Rng& rng) {
    pb::PseudoPoly p;
    for (int v = 0; v < 3; ++v) {
      p += pb::PseudoPoly::v_power(random_laurent(rng), v);
    }
    return p;
  }

}  // namespace testing
