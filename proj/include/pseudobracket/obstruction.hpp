#pragma once

// Cosmetic crossing obstruction.
//
// For a crossing c of a classical knot diagram D let D+ / D- be D with c
// made positive / negative and D# the diagram with c made pseudo. If c is
// cosmetic then <D#> carries no power of V, and then
//
//   <D+> = -A^3  <D#>
//   <D-> = -A^-3 <D#>
//
// A crossing whose <D#> has a V term is therefore not cosmetic. A V-free
// <D#> proves nothing.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pseudobracket/bracket.hpp"
#include "pseudobracket/diagram.hpp"
#include "pseudobracket/errors.hpp"
#include "pseudobracket/polynomial.hpp"

namespace pseudobracket {

  enum class Verdict : std::uint8_t { not_cosmetic, inconclusive };

  inline std::string to_string(Verdict v) {
    return v == Verdict::not_cosmetic ? "NOT-COSMETIC" : "INCONCLUSIVE";
  }

  struct ObstructionReport {
    std::size_t  index = 0;
    CrossingSign sign  = CrossingSign::positive;
    PseudoPoly   v_part;
    PseudoPoly   bracket_square;
    PseudoPoly   bracket_plus;
    PseudoPoly   bracket_minus;
    bool         relation_plus_ok  = false;
    bool         relation_minus_ok = false;
    Verdict      verdict           = Verdict::inconclusive;
  };

  namespace detail {

    inline void require_classical_knot(PseudoDiagram const& D) {
      if (!D.is_classical()) {
        throw HasPseudoCrossings("diagram has " + std::to_string(D.num_pseudo())
                                 + " pseudo crossing(s)");
      }
      if (D.num_components() != 1) {
        throw MultiComponent("diagram has " + std::to_string(D.num_components())
                             + " components; the obstruction applies to knots");
      }
    }

    // Does p == q * expected hold, checked by dividing p by q?
    inline bool divides_as(PseudoPoly const& p, PseudoPoly const& q,
                           LaurentPoly const& expected) {
      if (!p.is_v_free() || !q.is_v_free() || q.is_zero()) {
        return false;
      }
      auto quotient = exact_divide(p.constant_part(), q.constant_part());
      return quotient && *quotient == expected;
    }

    inline ObstructionReport obstruct_unchecked(PseudoDiagram const& D, std::size_t i,
                                                Engine engine) {
      require_classical(D, i);
      ObstructionReport r;
      r.index = i;
      r.sign  = crossing_sign(D, i);

      PseudoDiagram const switched = switch_crossing(D, i);
      bool const          positive = r.sign == CrossingSign::positive;
      r.bracket_plus   = bracket(positive ? D : switched, engine);
      r.bracket_minus  = bracket(positive ? switched : D, engine);
      r.bracket_square = bracket(make_pseudo(D, i), engine);
      r.v_part         = pseudobracket::v_part(r.bracket_square);

      r.relation_plus_ok
          = divides_as(r.bracket_plus, r.bracket_square, -LaurentPoly::A(3));
      r.relation_minus_ok
          = divides_as(r.bracket_minus, r.bracket_square, -LaurentPoly::A(-3));
      r.verdict = r.v_part.is_zero() ? Verdict::inconclusive : Verdict::not_cosmetic;

      if (r.v_part.is_zero() && !(r.relation_plus_ok && r.relation_minus_ok)) {
        throw std::logic_error("crossing " + std::to_string(i)
                               + ": V-free square bracket but the D+/D- relations fail");
      }
      return r;
    }

  }  // namespace detail

  inline ObstructionReport obstruct(PseudoDiagram const& D, std::size_t i,
                                    Engine engine = Engine::contract) {
    detail::require_classical_knot(D);
    return detail::obstruct_unchecked(D, i, engine);
  }

  // One report per crossing, in crossing order. Crossings are evaluated
  // concurrently.
  inline std::vector<ObstructionReport> scan(PseudoDiagram const& D,
                                             Engine engine = Engine::contract) {
    detail::require_classical_knot(D);
    std::vector<std::future<ObstructionReport>> jobs;
    std::vector<ObstructionReport>              out;
    std::size_t const workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < D.size(); start += workers) {
      jobs.clear();
      for (std::size_t i = start; i < std::min(D.size(), start + workers); ++i) {
        jobs.push_back(std::async(std::launch::async, [&D, i, engine] {
          return detail::obstruct_unchecked(D, i, engine);
        }));
      }
      for (auto& j : jobs) {
        out.push_back(j.get());
      }
    }
    return out;
  }

  // Aligned table: crossing, sign, verdict, V part of <D#>.
  inline std::string render_reports(std::vector<ObstructionReport> const& reports) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "crossing" << std::setw(6) << "sign"
       << std::setw(14) << "verdict"
       << "v_part\n";
    for (auto const& r : reports) {
      os << std::left << std::setw(10) << r.index << std::setw(6)
         << (r.sign == CrossingSign::positive ? "+1" : "-1") << std::setw(14)
         << to_string(r.verdict) << to_string(r.v_part) << "\n";
    }
    return os.str();
  }

}  // namespace pseudobracket
