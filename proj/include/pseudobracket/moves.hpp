#pragma once

// Reidemeister and pseudo moves on PD diagrams.
//
// Insertions keep every existing arc id: the split arc keeps its id for the
// piece leaving its tail and new pieces get fresh ids above the current
// maximum. New crossings are appended. Removing a kink that was just inserted
// therefore gives back the identical diagram.
//
// R3, P2 and P3 are exercised through fixture pairs built from closed braids
// (see braid_closure and the *_fixture_pairs functions).

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pseudobracket/diagram.hpp"
#include "pseudobracket/errors.hpp"

namespace pseudobracket {

  enum class MoveKind : std::uint8_t { r1_positive, r1_negative, p1, r2, r3, p2, p3 };

  // Which of the two arcs goes over in an R2 poke.
  enum class Over : std::uint8_t { first, second };

  inline std::string to_string(MoveKind k) {
    switch (k) {
      case MoveKind::r1_positive:
        return "r1+";
      case MoveKind::r1_negative:
        return "r1-";
      case MoveKind::p1:
        return "p1";
      case MoveKind::r2:
        return "r2";
      case MoveKind::r3:
        return "r3";
      case MoveKind::p2:
        return "p2";
      case MoveKind::p3:
        return "p3";
    }
    return "?";
  }

  // A concrete insertion site.
  struct Move {
    MoveKind kind = MoveKind::p1;
    ArcId    arc  = 0;
    ArcId    arc2 = 0;  // r2 only
    Side     side = Side::left;
    Over     over = Over::first;

    friend bool operator==(Move const&, Move const&) = default;
  };

  inline std::string to_string(Move const& m) {
    std::string s = to_string(m.kind) + " arc=" + std::to_string(m.arc);
    if (m.kind == MoveKind::r2) {
      s += " arc2=" + std::to_string(m.arc2);
      s += m.over == Over::first ? " over=first" : " over=second";
    } else {
      s += m.side == Side::left ? " side=left" : " side=right";
    }
    return s;
  }

  namespace detail {

    inline ArcId max_arc(PseudoDiagram const& D) {
      return D.successor().empty() ? 0 : D.successor().rbegin()->first;
    }

    inline void require_arc(PseudoDiagram const& D, ArcId a) {
      if (!D.has_arc(a)) {
        throw UnknownArc("no arc with id " + std::to_string(a));
      }
    }

    // Split `arc` as arc -> pieces[0] -> pieces[1] -> ... -> old successor.
    // The arc's head endpoint moves to the last piece.
    inline void split_arc(PseudoDiagram const&     D,
                          ArcId                    arc,
                          std::vector<ArcId> const& pieces,
                          std::vector<Crossing>&   crossings,
                          std::map<ArcId, ArcId>&  succ) {
      ArcId const old_next = D.successor(arc);
      ArcId       prev     = arc;
      for (ArcId p : pieces) {
        succ[prev] = p;
        prev       = p;
      }
      succ[prev] = old_next;
      if (auto h = D.head(arc)) {
        crossings[h->crossing].arcs[h->slot] = prev;
      }
    }

    inline PseudoDiagram insert_kink(PseudoDiagram const& D,
                                     ArcId                arc,
                                     CrossingKind         kind,
                                     CrossingSign         sign,
                                     Side                 side) {
      require_arc(D, arc);
      auto        crossings = D.crossings();
      auto        succ      = D.successor();
      ArcId const loop      = max_arc(D) + 1;
      ArcId       out       = max_arc(D) + 2;
      bool const  was_free  = !D.tail(arc).has_value();
      if (was_free) {
        // A free loop closes up on itself: the arc leaving the kink is the
        // same arc that enters it.
        out       = arc;
        succ[arc] = loop;
        succ[loop] = arc;
      } else {
        split_arc(D, arc, {loop, out}, crossings, succ);
      }
      ArcId const in = arc;
      // Loop on the right of the strand: ccw (in, loop, loop, out);
      // on the left: (in, out, loop, loop). Start from whichever pass is under.
      std::array<ArcId, 4> arcs{};
      if (side == Side::right) {
        arcs = (kind == CrossingKind::classical && sign == CrossingSign::positive)
                   ? std::array<ArcId, 4>{loop, loop, out, in}
                   : std::array<ArcId, 4>{in, loop, loop, out};
      } else {
        arcs = (kind == CrossingKind::classical && sign == CrossingSign::negative)
                   ? std::array<ArcId, 4>{loop, in, out, loop}
                   : std::array<ArcId, 4>{in, out, loop, loop};
      }
      crossings.push_back({kind, arcs});
      return PseudoDiagram(std::move(crossings), std::move(succ), D.orientation());
    }

    inline PseudoDiagram remove_kink(PseudoDiagram const& D, std::size_t i, CrossingKind kind) {
      auto const& c = D.crossing(i);
      if (c.kind != kind) {
        throw std::invalid_argument("crossing " + std::to_string(i) + " has the wrong kind");
      }
      // Find the loop arc: both of its ends sit at crossing i in adjacent slots.
      // On a one-crossing component both arcs qualify; the newer id goes.
      std::optional<ArcId> loop;
      for (int s = 0; s < 4; ++s) {
        ArcId const a = c.arcs[s];
        auto        t = D.tail(a);
        auto        h = D.head(a);
        if (t->crossing == i && h->crossing == i
            && ((t->slot + 1) % 4 == h->slot || (t->slot + 3) % 4 == h->slot)) {
          loop = std::max(loop.value_or(a), a);
        }
      }
      if (!loop) {
        throw std::invalid_argument("crossing " + std::to_string(i) + " is not a kink");
      }
      int const loop_tail = D.tail(*loop)->slot;
      int const loop_head = D.head(*loop)->slot;
      ArcId     in        = 0;
      ArcId     out       = 0;
      for (int s = 0; s < 4; ++s) {
        if (s == loop_tail || s == loop_head) {
          continue;
        }
        (D.is_incoming(i, s) ? in : out) = c.arcs[s];
      }
      auto crossings = D.crossings();
      crossings.erase(crossings.begin() + static_cast<std::ptrdiff_t>(i));
      auto hint = D.orientation();
      hint.erase(hint.begin() + static_cast<std::ptrdiff_t>(i));
      auto succ = D.successor();
      succ.erase(*loop);
      if (in == out) {
        succ[in] = in;
      } else {
        ArcId const next = D.successor(out);
        succ.erase(out);
        succ[in] = next;
        if (auto h = D.head(out)) {
          std::size_t hc = h->crossing;
          if (hc > i) {
            --hc;
          }
          crossings[hc].arcs[h->slot] = in;
        }
      }
      return PseudoDiagram(std::move(crossings), std::move(succ), hint);
    }

  }  // namespace detail

  // Adds a classical kink of the given sign on `arc`; the writhe changes by
  // the sign and the raw bracket by a factor -A^(3 sign).
  inline PseudoDiagram r1_insert(PseudoDiagram const& D,
                                 ArcId                arc,
                                 CrossingSign         chirality,
                                 Side                 side = Side::left) {
    return detail::insert_kink(D, arc, CrossingKind::classical, chirality, side);
  }

  // Adds a pseudo kink on `arc`; both brackets are unchanged since Vd + H = 1.
  inline PseudoDiagram p1_insert(PseudoDiagram const& D, ArcId arc, Side side = Side::left) {
    return detail::insert_kink(D, arc, CrossingKind::pseudo, CrossingSign::positive, side);
  }

  inline PseudoDiagram r1_remove(PseudoDiagram const& D, std::size_t i) {
    return detail::remove_kink(D, i, CrossingKind::classical);
  }

  inline PseudoDiagram p1_remove(PseudoDiagram const& D, std::size_t i) {
    return detail::remove_kink(D, i, CrossingKind::pseudo);
  }

  // Index of a face having both arcs on its boundary, if any.
  inline std::optional<std::size_t> common_face(PseudoDiagram const& D, ArcId x, ArcId y) {
    auto const& fs = D.faces();
    for (std::size_t f = 0; f < fs.size(); ++f) {
      bool hx = false;
      bool hy = false;
      for (auto const& side : fs[f]) {
        hx = hx || side.arc == x;
        hy = hy || side.arc == y;
      }
      if (hx && hy) {
        return f;
      }
    }
    return std::nullopt;
  }

  // Pushes a finger of arc1 across a face shared with arc2, creating two
  // crossings of opposite sign. The writhe and the bracket are unchanged.
  inline PseudoDiagram r2_insert(PseudoDiagram const& D, ArcId arc1, ArcId arc2, Over over) {
    detail::require_arc(D, arc1);
    detail::require_arc(D, arc2);
    if (arc1 == arc2) {
      throw NotSameFace("r2_insert needs two different arcs");
    }
    auto const face = common_face(D, arc1, arc2);
    if (!face) {
      throw NotSameFace("arcs " + std::to_string(arc1) + " and " + std::to_string(arc2)
                        + " do not bound a common face");
    }
    auto side_of = [&](ArcId a) {
      for (auto const& s : D.faces()[*face]) {
        if (s.arc == a) {
          return s.side;
        }
      }
      return Side::left;
    };
    bool const mirrored = side_of(arc1) == Side::right;
    bool       y_left   = side_of(arc2) == Side::left;
    if (mirrored) {
      y_left = !y_left;
    }

    auto        crossings = D.crossings();
    auto        succ      = D.successor();
    ArcId const top       = detail::max_arc(D);
    ArcId const xa = arc1, xb = top + 1, xc = top + 2;
    ArcId const ya = arc2, yb = top + 3, yc = top + 4;
    detail::split_arc(D, arc1, {xb, xc}, crossings, succ);
    detail::split_arc(D, arc2, {yb, yc}, crossings, succ);

    // Local picture: arc1 runs left to right with the face above it, pokes up
    // through arc2 at k1 and comes back down at k2.
    bool const x_under = over == Over::second;
    std::array<ArcId, 4> k1{};
    std::array<ArcId, 4> k2{};
    if (!y_left) {
      // arc2 runs left to right: meets k1 first.
      k1 = x_under ? std::array{xa, yb, xb, ya} : std::array{ya, xa, yb, xb};
      k2 = x_under ? std::array{xb, yb, xc, yc} : std::array{yb, xc, yc, xb};
    } else {
      // arc2 runs right to left: meets k2 first.
      k1 = x_under ? std::array{xa, yb, xb, yc} : std::array{yb, xb, yc, xa};
      k2 = x_under ? std::array{xb, yb, xc, ya} : std::array{ya, xb, yb, xc};
    }
    if (mirrored) {
      std::swap(k1[1], k1[3]);
      std::swap(k2[1], k2[3]);
    }
    crossings.push_back({CrossingKind::classical, k1});
    crossings.push_back({CrossingKind::classical, k2});
    return PseudoDiagram(std::move(crossings), std::move(succ), D.orientation());
  }

  ////////////////////////////////////////////////////////////////////////
  // Closed braids and fixture pairs
  ////////////////////////////////////////////////////////////////////////

  // One braid letter: strands at positions `pos` and `pos + 1` cross.
  // positive: the strand coming from the left goes over; negative: under.
  struct BraidLetter {
    enum class Type : std::uint8_t { positive, negative, pseudo };
    int  pos;
    Type type;
  };

  // Parses "1 -2 p1" style words: k is sigma_k, -k its inverse, pk a pseudo
  // crossing at sigma_k's position.
  inline std::vector<BraidLetter> parse_braid(std::string const& word) {
    std::vector<BraidLetter> out;
    std::size_t             i = 0;
    while (i < word.size()) {
      while (i < word.size() && word[i] == ' ') {
        ++i;
      }
      if (i == word.size()) {
        break;
      }
      auto type = BraidLetter::Type::positive;
      if (word[i] == '-') {
        type = BraidLetter::Type::negative;
        ++i;
      } else if (word[i] == 'p') {
        type = BraidLetter::Type::pseudo;
        ++i;
      }
      std::size_t j = i;
      while (j < word.size() && std::isdigit(static_cast<unsigned char>(word[j]))) {
        ++j;
      }
      if (j == i) {
        throw ParseError("bad braid word: " + word);
      }
      int const k = std::stoi(word.substr(i, j - i));
      if (k < 1) {
        throw ParseError("braid generators start at 1: " + word);
      }
      out.push_back({k, type});
      i = j;
    }
    return out;
  }

  // PD diagram of the closure of a braid on `strands` strands. Strands run
  // upward; the closing arcs pass around on the right.
  inline PseudoDiagram braid_closure(int strands, std::vector<BraidLetter> const& word) {
    ArcId                  next = 1;
    std::vector<ArcId>     bottom(static_cast<std::size_t>(strands));
    for (auto& b : bottom) {
      b = next++;
    }
    std::vector<ArcId>     cur = bottom;
    std::vector<Crossing>  crossings;
    std::map<ArcId, ArcId> succ;
    for (auto const& letter : word) {
      if (letter.pos < 1 || letter.pos >= strands) {
        throw std::invalid_argument("braid letter out of range for "
                                    + std::to_string(strands) + " strands");
      }
      auto const  p     = static_cast<std::size_t>(letter.pos - 1);
      ArcId const l_in  = cur[p];
      ArcId const r_in  = cur[p + 1];
      ArcId const l_out = next++;  // continues the left strand, now on the right
      ArcId const r_out = next++;
      succ[l_in]        = l_out;
      succ[r_in]        = r_out;
      // Counterclockwise from the lower left: l_in, r_in, l_out, r_out.
      switch (letter.type) {
        case BraidLetter::Type::positive:
          crossings.push_back({CrossingKind::classical, {r_in, l_out, r_out, l_in}});
          break;
        case BraidLetter::Type::negative:
          crossings.push_back({CrossingKind::classical, {l_in, r_in, l_out, r_out}});
          break;
        case BraidLetter::Type::pseudo:
          crossings.push_back({CrossingKind::pseudo, {l_in, r_in, l_out, r_out}});
          break;
      }
      cur[p]     = r_out;
      cur[p + 1] = l_out;
    }
    // Close up: the top arc at each position continues as the bottom arc.
    std::map<ArcId, ArcId> rename;
    for (std::size_t p = 0; p < cur.size(); ++p) {
      if (cur[p] == bottom[p]) {
        succ[bottom[p]] = bottom[p];
      } else {
        rename[bottom[p]] = cur[p];
      }
    }
    auto resolve = [&rename](ArcId a) {
      auto it = rename.find(a);
      return it == rename.end() ? a : it->second;
    };
    std::map<ArcId, ArcId> merged;
    for (auto const& [a, b] : succ) {
      if (rename.count(a)) {
        continue;
      }
      merged[a] = resolve(b);
    }
    for (auto const& [b, top] : rename) {
      merged[top] = resolve(succ.at(b));
    }
    for (auto& c : crossings) {
      for (auto& a : c.arcs) {
        a = resolve(a);
      }
    }
    return relabel_sequential(PseudoDiagram(std::move(crossings), std::move(merged)));
  }

  inline PseudoDiagram braid_closure(int strands, std::string const& word) {
    return braid_closure(strands, parse_braid(word));
  }

  struct FixturePair {
    std::string   name;
    PseudoDiagram before;
    PseudoDiagram after;
  };

  namespace detail {

    // Braid words for the ambient diagrams a local move is embedded in. The
    // local move sits on strands 1-3; `tail` closes it up.
    struct Ambient {
      int         strands;
      std::string tail;
    };

    inline std::vector<Ambient> const& ambients() {
      // Each closes the triangle up into a knot of 4 to 8 crossings.
      static std::vector<Ambient> const a{
          {3, "1"},
          {3, "-2 1 1"},
          {3, "2 -1 2 2 -1"},
          {4, "1 1 2 3"},
          {4, "p1 1 2 -3"},
      };
      return a;
    }

    inline std::vector<FixturePair> embed(std::string const& name,
                                          std::string const& lhs,
                                          std::string const& rhs) {
      std::vector<FixturePair> out;
      int                      n = 0;
      for (auto const& amb : ambients()) {
        std::string const l = lhs + " " + amb.tail;
        std::string const r = rhs + " " + amb.tail;
        out.push_back({name + "/" + std::to_string(n++), braid_closure(amb.strands, l),
                       braid_closure(amb.strands, r)});
      }
      return out;
    }

    inline std::vector<FixturePair> triangle_family(std::string const&              prefix,
                                                    std::vector<std::string> const& thirds) {
      std::vector<FixturePair> out;
      for (auto const& t : thirds) {
        // Strand 1 passes over (then under) the crossing between the other
        // two, on both sides of the triangle; likewise strand 3.
        std::vector<std::array<std::string, 3>> const forms{
            {"over-left", "1 2 " + t + "1", t + "2 1 2"},
            {"under-left", "-1 -2 " + t + "1", t + "2 -1 -2"},
            {"over-right", "2 1 " + t + "2", t + "1 2 1"},
            {"under-right", "-2 -1 " + t + "2", t + "1 -2 -1"},
        };
        for (auto const& [label, lhs, rhs] : forms) {
          std::string const kind = t.empty() ? "pos" : (t == "-" ? "neg" : "pseudo");
          for (auto& p : embed(prefix + "/" + label + "/" + kind, lhs, rhs)) {
            out.push_back(std::move(p));
          }
        }
      }
      return out;
    }

  }  // namespace detail

  // A strand slides across a classical crossing.
  inline std::vector<FixturePair> r3_fixture_pairs() {
    return detail::triangle_family("r3", {"", "-"});
  }

  // A strand slides over or under a pseudo crossing.
  inline std::vector<FixturePair> p3_fixture_pairs() {
    return detail::triangle_family("p3", {"p"});
  }

  // A strand slides across a pseudo crossing that sits inside a twist
  // region: the pseudo crossing is conjugated by a classical crossing. Once
  // the pseudo crossing is smoothed, either side reduces by R2 moves.
  inline std::vector<FixturePair> p2_fixture_pairs() {
    std::vector<FixturePair> out;
    for (auto& p : detail::embed("p2/pos", "1 p2 -1", "-2 p1 2")) {
      out.push_back(std::move(p));
    }
    for (auto& p : detail::embed("p2/neg", "-1 p2 1", "2 p1 -2")) {
      out.push_back(std::move(p));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Random walks
  ////////////////////////////////////////////////////////////////////////

  inline PseudoDiagram apply(PseudoDiagram const& D, Move const& m) {
    switch (m.kind) {
      case MoveKind::r1_positive:
        return r1_insert(D, m.arc, CrossingSign::positive, m.side);
      case MoveKind::r1_negative:
        return r1_insert(D, m.arc, CrossingSign::negative, m.side);
      case MoveKind::p1:
        return p1_insert(D, m.arc, m.side);
      case MoveKind::r2:
        return r2_insert(D, m.arc, m.arc2, m.over);
      default:
        throw std::invalid_argument("move " + to_string(m.kind)
                                    + " has no insertion rewrite; use the fixture pairs");
    }
  }

  // A uniformly chosen insertion site for `kind`, or nullopt if there is none.
  template <typename Rng>
  std::optional<Move> random_site(PseudoDiagram const& D, MoveKind kind, Rng& rng) {
    auto pick = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    if (D.num_arcs() == 0) {
      return std::nullopt;
    }
    std::vector<ArcId> arcs;
    for (auto const& [a, unused] : D.successor()) {
      arcs.push_back(a);
    }
    Move m;
    m.kind = kind;
    if (kind == MoveKind::r2) {
      std::vector<std::size_t> usable;
      for (std::size_t f = 0; f < D.faces().size(); ++f) {
        std::set<ArcId> distinct;
        for (auto const& s : D.faces()[f]) {
          distinct.insert(s.arc);
        }
        if (distinct.size() >= 2) {
          usable.push_back(f);
        }
      }
      if (usable.empty()) {
        return std::nullopt;
      }
      auto const&        face = D.faces()[usable[pick(usable.size())]];
      std::vector<ArcId> on_face;
      for (auto const& s : face) {
        if (std::find(on_face.begin(), on_face.end(), s.arc) == on_face.end()) {
          on_face.push_back(s.arc);
        }
      }
      std::size_t const i = pick(on_face.size());
      std::size_t       j = pick(on_face.size() - 1);
      if (j >= i) {
        ++j;
      }
      m.arc  = on_face[i];
      m.arc2 = on_face[j];
      m.over = pick(2) == 0 ? Over::first : Over::second;
      return m;
    }
    if (kind != MoveKind::r1_positive && kind != MoveKind::r1_negative
        && kind != MoveKind::p1) {
      return std::nullopt;
    }
    m.arc  = arcs[pick(arcs.size())];
    m.side = pick(2) == 0 ? Side::left : Side::right;
    return m;
  }

  using WalkObserver
      = std::function<void(std::size_t step, Move const& move, PseudoDiagram const& after)>;

  // Applies n_steps random insertions drawn from `allowed`. Steps whose move
  // kind has no site are skipped. Deterministic for a given seed.
  inline PseudoDiagram random_move_walk(PseudoDiagram              D,
                                        std::uint64_t              seed,
                                        std::size_t                n_steps,
                                        std::vector<MoveKind> const& allowed,
                                        WalkObserver const&        observe = {}) {
    if (allowed.empty()) {
      return D;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t step = 0; step < n_steps; ++step) {
      MoveKind const kind = allowed[rng() % allowed.size()];
      auto           site = random_site(D, kind, rng);
      if (!site) {
        continue;
      }
      D = apply(D, *site);
      if (observe) {
        observe(step, *site, D);
      }
    }
    return D;
  }

}  // namespace pseudobracket
