#pragma once

// Oriented pseudo link diagrams in planar diagram (PD) form.
//
// Each crossing lists four arc ids counterclockwise. For a classical crossing
// slot 0 holds the incoming under-arc and slot 2 the outgoing under-arc; the
// over-strand occupies slots 1 and 3 in either direction. For a pseudo
// crossing the slot order is bookkeeping only and both strands may run
// either way; slot 0 incoming is assumed only where the successor map leaves
// the direction open. The successor map sends each arc to the next arc along
// its component; arcs that touch no crossing form zero-crossing unknots.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pseudobracket/errors.hpp"

namespace pseudobracket {

  using ArcId = int;

  enum class CrossingKind : std::uint8_t { classical, pseudo };

  enum class CrossingSign : int { negative = -1, positive = 1 };

  constexpr int to_int(CrossingSign s) noexcept {
    return static_cast<int>(s);
  }

  constexpr CrossingSign operator-(CrossingSign s) noexcept {
    return s == CrossingSign::positive ? CrossingSign::negative
                                       : CrossingSign::positive;
  }

  struct Crossing {
    CrossingKind         kind = CrossingKind::classical;
    std::array<ArcId, 4> arcs{};

    bool is_classical() const noexcept {
      return kind == CrossingKind::classical;
    }

    bool is_pseudo() const noexcept {
      return kind == CrossingKind::pseudo;
    }

    friend bool operator==(Crossing const&, Crossing const&) = default;
  };

  // One end of an arc: the crossing it sits at and the slot it occupies.
  struct Endpoint {
    std::size_t crossing;
    int         slot;

    friend bool operator==(Endpoint const&, Endpoint const&) = default;
  };

  enum class Side : std::uint8_t { left, right };

  // One side of one arc, relative to the arc's orientation.
  struct ArcSide {
    ArcId arc;
    Side  side;

    friend bool operator==(ArcSide const&, ArcSide const&) = default;
    friend auto operator<=>(ArcSide const&, ArcSide const&) = default;
  };

  using Face = std::vector<ArcSide>;

  class PseudoDiagram {
   public:
    // Validates and orients. Throws ValidationError (or AmbiguousOrientation)
    // if the data does not describe a planar oriented diagram.
    PseudoDiagram(std::vector<Crossing> crossings, std::map<ArcId, ArcId> successor)
        : _crossings(std::move(crossings)), _successor(std::move(successor)) {
      validate();
    }

    // As above, but strands the data leaves undirected follow `hint`, an
    // incoming flag per slot of (a prefix of) the crossings.
    PseudoDiagram(std::vector<Crossing>                   crossings,
                  std::map<ArcId, ArcId>                  successor,
                  std::vector<std::array<bool, 4>> const& hint)
        : _crossings(std::move(crossings)), _successor(std::move(successor)) {
      validate(&hint);
    }

    // The zero-crossing unknot on a single arc.
    static PseudoDiagram unknot(ArcId arc = 1) {
      return PseudoDiagram({}, {{arc, arc}});
    }

    std::vector<Crossing> const& crossings() const noexcept {
      return _crossings;
    }

    Crossing const& crossing(std::size_t i) const {
      check_index(i);
      return _crossings[i];
    }

    std::size_t size() const noexcept {
      return _crossings.size();
    }

    std::map<ArcId, ArcId> const& successor() const noexcept {
      return _successor;
    }

    ArcId successor(ArcId a) const {
      auto it = _successor.find(a);
      if (it == _successor.end()) {
        throw UnknownArc("unknown arc " + std::to_string(a));
      }
      return it->second;
    }

    bool has_arc(ArcId a) const {
      return _successor.count(a) != 0;
    }

    std::size_t num_arcs() const noexcept {
      return _successor.size();
    }

    std::size_t num_components() const noexcept {
      return _num_components;
    }

    std::size_t num_pseudo() const noexcept {
      return static_cast<std::size_t>(
          std::count_if(_crossings.begin(), _crossings.end(), [](auto const& c) {
            return c.is_pseudo();
          }));
    }

    bool is_classical() const noexcept {
      return num_pseudo() == 0;
    }

    // True if the arc at (crossing i, slot s) enters the crossing there.
    bool is_incoming(std::size_t i, int s) const {
      check_index(i);
      return _incoming[i][s & 3];
    }

    // Arcs that touch no crossing; each one lies on a zero-crossing component.
    std::vector<ArcId> const& free_arcs() const noexcept {
      return _free_arcs;
    }

    // Where the arc starts (tail) and ends (head). Empty for free arcs.
    std::optional<Endpoint> tail(ArcId a) const {
      auto it = _ends.find(a);
      return it == _ends.end() ? std::nullopt : std::optional(it->second.first);
    }

    std::optional<Endpoint> head(ArcId a) const {
      auto it = _ends.find(a);
      return it == _ends.end() ? std::nullopt : std::optional(it->second.second);
    }

    // The four slots of crossing i paired into the orientation-compatible
    // smoothing: each incoming end joined to its neighbouring outgoing end.
    std::array<std::pair<int, int>, 2> oriented_pairing(std::size_t i) const {
      check_index(i);
      auto const& in = _incoming[i];
      // Incoming slots are cyclically adjacent; find the first of the pair.
      int first_in = 0;
      while (!(in[first_in] && in[(first_in + 1) % 4])) {
        ++first_in;
      }
      int const second_in = (first_in + 1) % 4;
      // second_in's other neighbour and first_in's other neighbour are outs.
      return {{{second_in, (second_in + 1) % 4}, {first_in, (first_in + 3) % 4}}};
    }

    // The other smoothing.
    std::array<std::pair<int, int>, 2> unoriented_pairing(std::size_t i) const {
      int const x = oriented_pairing(i)[0].first;
      return {{{x, (x + 3) % 4}, {(x + 1) % 4, (x + 2) % 4}}};
    }

    std::vector<Face> const& faces() const noexcept {
      return _faces;
    }

    // Incoming flags per slot, suitable as a hint for a derived diagram.
    std::vector<std::array<bool, 4>> const& orientation() const noexcept {
      return _incoming;
    }

    friend bool operator==(PseudoDiagram const& x, PseudoDiagram const& y) {
      return x._crossings == y._crossings && x._successor == y._successor;
    }

   private:
    void check_index(std::size_t i) const {
      if (i >= _crossings.size()) {
        throw std::out_of_range("crossing index " + std::to_string(i)
                                + " out of range (" + std::to_string(_crossings.size())
                                + " crossings)");
      }
    }

    using Hint = std::vector<std::array<bool, 4>>;

    void validate(Hint const* hint = nullptr);
    void solve_orientation(std::map<ArcId, std::vector<Endpoint>> const& occ, Hint const* hint);
    void compute_faces();

    std::vector<Crossing>                           _crossings;
    std::map<ArcId, ArcId>                          _successor;
    std::size_t                                     _num_components = 0;
    std::vector<std::array<bool, 4>>                _incoming;
    std::vector<ArcId>                              _free_arcs;
    std::map<ArcId, std::pair<Endpoint, Endpoint>>  _ends;
    std::vector<Face>                               _faces;
  };

  ////////////////////////////////////////////////////////////////////////
  // Validation
  ////////////////////////////////////////////////////////////////////////

  inline void PseudoDiagram::validate(Hint const* hint) {
    for (auto const& [a, b] : _successor) {
      if (a <= 0 || b <= 0) {
        throw ValidationError("arc ids must be positive");
      }
    }
    {
      std::set<ArcId> images;
      for (auto const& [a, b] : _successor) {
        if (_successor.count(b) == 0) {
          throw ValidationError("successor of arc " + std::to_string(a) + " is "
                                + std::to_string(b) + ", which is not an arc");
        }
        if (!images.insert(b).second) {
          throw ValidationError("successor map is not a permutation: arc "
                                + std::to_string(b) + " has two predecessors");
        }
      }
    }

    std::map<ArcId, std::vector<Endpoint>> occ;
    for (std::size_t i = 0; i < _crossings.size(); ++i) {
      for (int s = 0; s < 4; ++s) {
        ArcId const a = _crossings[i].arcs[s];
        if (_successor.count(a) == 0) {
          throw ValidationError("arc " + std::to_string(a) + " at crossing "
                                + std::to_string(i) + " is missing from the successor map");
        }
        occ[a].push_back({i, s});
      }
    }
    for (auto const& [a, ends] : occ) {
      if (ends.size() != 2) {
        throw ValidationError("arc " + std::to_string(a) + " appears "
                              + std::to_string(ends.size()) + " times (expected 2)");
      }
    }

    // Components, and the rule that a cycle is either entirely free or
    // entirely attached to crossings.
    _free_arcs.clear();
    _num_components = 0;
    std::set<ArcId> seen;
    for (auto const& [start, unused] : _successor) {
      if (seen.count(start)) {
        continue;
      }
      ++_num_components;
      std::size_t n_free = 0;
      std::size_t n_len  = 0;
      ArcId       a      = start;
      do {
        seen.insert(a);
        ++n_len;
        if (occ.count(a) == 0) {
          ++n_free;
        }
        a = _successor.at(a);
      } while (a != start);
      if (n_free != 0 && n_free != n_len) {
        throw ValidationError("component through arc " + std::to_string(start)
                              + " mixes free arcs with arcs at crossings");
      }
      if (n_free != 0) {
        if (n_len != 1) {
          throw ValidationError("zero-crossing component through arc "
                                + std::to_string(start) + " must be a single arc");
        }
        _free_arcs.push_back(start);
      }
    }

    solve_orientation(occ, hint);

    _ends.clear();
    for (auto const& [a, ends] : occ) {
      Endpoint const& e0 = ends[0];
      Endpoint const& e1 = ends[1];
      // Head is the occurrence where the arc is incoming.
      if (_incoming[e0.crossing][e0.slot]) {
        _ends.emplace(a, std::make_pair(e1, e0));
      } else {
        _ends.emplace(a, std::make_pair(e0, e1));
      }
    }

    compute_faces();
  }

  // Each strand (slots {0,2} or {1,3}) of each crossing runs one of two ways.
  // An arc has exactly one head and one tail, which ties the direction of the
  // strands at its two ends together; successor data restricts the choices.
  inline void PseudoDiagram::solve_orientation(
      std::map<ArcId, std::vector<Endpoint>> const& occ, Hint const* hint) {
    std::size_t const n_vars = 2 * _crossings.size();
    // Candidate values for each strand variable: value v means the strand
    // enters at slot (lo + 2v), where lo is 0 or 1.
    std::vector<std::array<bool, 2>> allowed(n_vars, {true, true});
    for (std::size_t i = 0; i < _crossings.size(); ++i) {
      auto const& arcs = _crossings[i].arcs;
      for (int lo = 0; lo < 2; ++lo) {
        auto& cand = allowed[2 * i + lo];
        cand[0]    = _successor.at(arcs[lo]) == arcs[lo + 2];
        cand[1]    = _successor.at(arcs[lo + 2]) == arcs[lo];
        if (_crossings[i].is_classical() && lo == 0) {
          if (!cand[0]) {
            throw ValidationError("crossing " + std::to_string(i)
                                  + ": under-strand arcs " + std::to_string(arcs[0])
                                  + " -> " + std::to_string(arcs[2])
                                  + " are not consecutive along the component");
          }
          cand[1] = false;
        }
        if (!cand[0] && !cand[1]) {
          throw ValidationError("crossing " + std::to_string(i) + ": strand through slots "
                                + std::to_string(lo) + "," + std::to_string(lo + 2)
                                + " is inconsistent with the successor map");
        }
      }
    }

    // head(e) == (value(var(e)) == e.slot / 2)
    auto var_of  = [](Endpoint const& e) { return 2 * e.crossing + (e.slot & 1); };
    auto head_of = [](Endpoint const& e, int value) { return value == e.slot / 2; };

    // Arc links: the two endpoints of each arc have opposite head status.
    std::vector<std::vector<std::pair<Endpoint, Endpoint>>> links(n_vars);
    for (auto const& [a, ends] : occ) {
      links[var_of(ends[0])].emplace_back(ends[0], ends[1]);
      links[var_of(ends[1])].emplace_back(ends[1], ends[0]);
    }

    std::vector<int> value(n_vars, -1);

    // Assign with propagation; returns false on contradiction and undoes
    // nothing (callers work on copies).
    auto propagate = [&](std::vector<int>& val, std::size_t v0, int x0) -> bool {
      std::vector<std::pair<std::size_t, int>> stack{{v0, x0}};
      while (!stack.empty()) {
        auto [v, x] = stack.back();
        stack.pop_back();
        if (val[v] != -1) {
          if (val[v] != x) {
            return false;
          }
          continue;
        }
        if (!allowed[v][x]) {
          return false;
        }
        val[v] = x;
        for (auto const& [mine, other] : links[v]) {
          bool const mine_is_head = head_of(mine, x);
          // other must be the opposite role
          int const other_val = (mine_is_head ? 1 - other.slot / 2 : other.slot / 2);
          stack.emplace_back(var_of(other), other_val);
        }
      }
      return true;
    };

    for (std::size_t v = 0; v < n_vars; ++v) {
      auto const& cand = allowed[v];
      if (cand[0] != cand[1] && value[v] == -1) {
        if (!propagate(value, v, cand[0] ? 0 : 1)) {
          throw ValidationError("crossing " + std::to_string(v / 2)
                                + ": strand directions are inconsistent");
        }
      }
    }

    // Directions carried over from the diagram this one was derived from.
    if (hint) {
      for (std::size_t v = 0; v < n_vars && v / 2 < hint->size(); ++v) {
        if (value[v] == -1) {
          std::vector<int> trial = value;
          if (propagate(trial, v, (*hint)[v / 2][v & 1u] ? 0 : 1)) {
            value = std::move(trial);
          }
        }
      }
    }

    // A pseudo crossing also lists its arcs from an incoming arc by
    // convention; use that wherever the successor map leaves a choice.
    for (std::size_t i = 0; i < _crossings.size(); ++i) {
      std::size_t const v = 2 * i;
      if (_crossings[i].is_pseudo() && value[v] == -1 && allowed[v][0]) {
        std::vector<int> trial = value;
        if (propagate(trial, v, 0)) {
          value = std::move(trial);
        }
      }
    }

    // Whatever is left is a union of whole components whose direction the
    // data does not fix. That is harmless unless such a component crosses a
    // strand outside the undetermined group.
    for (std::size_t v = 0; v < n_vars; ++v) {
      if (value[v] != -1) {
        continue;
      }
      std::size_t const i      = v / 2;
      int const         lo     = static_cast<int>(v & 1u);
      bool const        hinted = hint && i < hint->size();
      int const         first  = hinted && !(*hint)[i][lo] ? 1 : 0;
      std::vector<int>  trial  = value;
      int               chosen = -1;
      for (int k = 0; k < 2 && chosen == -1; ++k) {
        trial = value;
        if (propagate(trial, v, first ^ k)) {
          chosen = first ^ k;
        }
      }
      if (chosen == -1) {
        throw ValidationError("crossing " + std::to_string(i)
                              + ": no consistent strand direction");
      }
      if (hinted) {
        value = std::move(trial);
        continue;
      }
      auto in_group = [&](std::size_t u) { return value[u] == -1 && trial[u] != -1; };
      for (std::size_t u = 0; u < n_vars; ++u) {
        if (in_group(u) && !in_group(u ^ 1u)) {
          throw AmbiguousOrientation(
              "crossing " + std::to_string(u / 2)
              + ": direction of a strand is not determined by the PD code");
        }
      }
      value = std::move(trial);
    }

    _incoming.assign(_crossings.size(), {false, false, false, false});
    for (std::size_t v = 0; v < n_vars; ++v) {
      std::size_t const i  = v / 2;
      int const         lo = static_cast<int>(v & 1u);
      _incoming[i][lo + 2 * value[v]] = true;
    }
  }

  // Faces of the 4-valent plane graph from the counterclockwise rotation at
  // each crossing. The wedge (c, s) is the corner between slots s and s+1;
  // walking the face boundary moves from that corner along the arc at slot
  // s+1 to its other end.
  inline void PseudoDiagram::compute_faces() {
    std::size_t const n = _crossings.size();
    _faces.clear();

    std::map<std::pair<std::size_t, int>, Endpoint> other_end;
    for (auto const& [a, ends] : _ends) {
      other_end[{ends.first.crossing, ends.first.slot}]   = ends.second;
      other_end[{ends.second.crossing, ends.second.slot}] = ends.first;
    }

    std::vector<std::array<bool, 4>> visited(n, {false, false, false, false});
    std::vector<std::size_t>         face_component;
    for (std::size_t c = 0; c < n; ++c) {
      for (int s = 0; s < 4; ++s) {
        if (visited[c][s]) {
          continue;
        }
        Face        face;
        std::size_t cc = c;
        int         ss = s;
        while (!visited[cc][ss]) {
          visited[cc][ss]   = true;
          int const   slot  = (ss + 1) % 4;
          ArcId const arc   = _crossings[cc].arcs[slot];
          // Walking outward along an outgoing arc keeps this corner on the
          // arc's right.
          face.push_back({arc, _incoming[cc][slot] ? Side::left : Side::right});
          Endpoint const next = other_end.at({cc, slot});
          cc                  = next.crossing;
          ss                  = next.slot;
        }
        face_component.push_back(c);
        _faces.push_back(std::move(face));
      }
    }

    // Euler check per connected piece of the crossing graph.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](std::size_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x         = parent[x];
      }
      return x;
    };
    for (auto const& [a, ends] : _ends) {
      parent[find(ends.first.crossing)] = find(ends.second.crossing);
    }
    std::map<std::size_t, long> euler;
    for (std::size_t c = 0; c < n; ++c) {
      euler[find(c)] += 1 - 2;  // each 4-valent vertex carries two edges
    }
    for (std::size_t f = 0; f < _faces.size(); ++f) {
      euler[find(face_component[f])] += 1;
    }
    for (auto const& [root, chi] : euler) {
      if (chi != 2) {
        throw ValidationError("diagram is not planar: Euler characteristic "
                              + std::to_string(chi) + " on the piece containing crossing "
                              + std::to_string(root));
      }
    }

    for (ArcId a : _free_arcs) {
      _faces.push_back({{a, Side::left}});
      _faces.push_back({{a, Side::right}});
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Operations
  ////////////////////////////////////////////////////////////////////////

  inline void require_classical(PseudoDiagram const& D, std::size_t i) {
    if (!D.crossing(i).is_classical()) {
      throw NotClassical("crossing " + std::to_string(i) + " is a pseudo crossing");
    }
  }

  // +1 when the over-strand runs from slot 3 to slot 1, -1 when it runs 1 -> 3.
  inline CrossingSign crossing_sign(PseudoDiagram const& D, std::size_t i) {
    require_classical(D, i);
    return D.is_incoming(i, 3) ? CrossingSign::positive : CrossingSign::negative;
  }

  inline int writhe(PseudoDiagram const& D) {
    int w = 0;
    for (std::size_t i = 0; i < D.size(); ++i) {
      if (D.crossing(i).is_classical()) {
        w += to_int(crossing_sign(D, i));
      }
    }
    return w;
  }

  inline std::size_t num_faces(PseudoDiagram const& D) {
    return D.faces().size();
  }

  inline std::vector<Face> faces(PseudoDiagram const& D) {
    return D.faces();
  }

  inline PseudoDiagram make_pseudo(PseudoDiagram const& D, std::size_t i) {
    require_classical(D, i);
    auto crossings       = D.crossings();
    crossings[i].kind    = CrossingKind::pseudo;
    return PseudoDiagram(std::move(crossings), D.successor(), D.orientation());
  }

  namespace detail {
    // Crossing i's arcs listed from the over-strand's incoming arc.
    inline std::array<ArcId, 4> over_first(PseudoDiagram const& D, std::size_t i) {
      auto const& arcs  = D.crossing(i).arcs;
      int const   shift = D.is_incoming(i, 1) ? 1 : 3;
      std::array<ArcId, 4> rotated{};
      for (int s = 0; s < 4; ++s) {
        rotated[s] = arcs[(s + shift) % 4];
      }
      return rotated;
    }

    inline std::array<bool, 4> over_first_orientation(PseudoDiagram const& D, std::size_t i) {
      int const           shift = D.is_incoming(i, 1) ? 1 : 3;
      std::array<bool, 4> rotated{};
      for (int s = 0; s < 4; ++s) {
        rotated[s] = D.is_incoming(i, (s + shift) % 4);
      }
      return rotated;
    }
  }  // namespace detail

  // Over and under exchanged at crossing i.
  inline PseudoDiagram switch_crossing(PseudoDiagram const& D, std::size_t i) {
    require_classical(D, i);
    auto crossings    = D.crossings();
    auto hint         = D.orientation();
    crossings[i].arcs = detail::over_first(D, i);
    hint[i]           = detail::over_first_orientation(D, i);
    return PseudoDiagram(std::move(crossings), D.successor(), hint);
  }

  // Every classical crossing switched: the bracket becomes its A -> A^-1 image.
  inline PseudoDiagram mirror_diagram(PseudoDiagram const& D) {
    auto crossings = D.crossings();
    auto hint      = D.orientation();
    for (std::size_t i = 0; i < crossings.size(); ++i) {
      if (crossings[i].is_classical()) {
        crossings[i].arcs = detail::over_first(D, i);
        hint[i]           = detail::over_first_orientation(D, i);
      }
    }
    return PseudoDiagram(std::move(crossings), D.successor(), hint);
  }

  // Renumber arcs 1..n component by component along the orientation, starting
  // each component at its smallest old id. Crossing order is kept.
  inline PseudoDiagram relabel_sequential(PseudoDiagram const& D) {
    std::map<ArcId, ArcId> fresh;
    ArcId                  next = 1;
    for (auto const& [start, unused] : D.successor()) {
      if (fresh.count(start)) {
        continue;
      }
      ArcId a = start;
      do {
        fresh[a] = next++;
        a        = D.successor(a);
      } while (a != start);
    }
    auto crossings = D.crossings();
    for (auto& c : crossings) {
      for (auto& a : c.arcs) {
        a = fresh.at(a);
      }
    }
    std::map<ArcId, ArcId> succ;
    for (auto const& [a, b] : D.successor()) {
      succ[fresh.at(a)] = fresh.at(b);
    }
    return PseudoDiagram(std::move(crossings), std::move(succ), D.orientation());
  }

}  // namespace pseudobracket
