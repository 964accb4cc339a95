#pragma once

// State-sum evaluation of the pseudo bracket.
//
// Every crossing is replaced by one of its two smoothings. The vertical
// smoothing is the orientation-compatible one; the horizontal smoothing is
// the other. Weights:
//
//   positive classical   vertical A      horizontal A^-1
//   negative classical   vertical A^-1   horizontal A
//   pseudo               vertical V      horizontal H = 1 - V d
//
// and a state with L closed loops contributes d^(L-1), d = -A^2 - A^-2.
//
// Two engines are provided. bracket_naive enumerates all 2^n states and is
// the reference. bracket_contract adds crossings one at a time, keeping a
// table from "how the open arc ends are joined" to the partial sum.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <numeric>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "pseudobracket/diagram.hpp"
#include "pseudobracket/polynomial.hpp"

namespace pseudobracket {

  enum class Smoothing : std::uint8_t { vertical, horizontal };

  using SmoothingState = std::vector<Smoothing>;

  struct StateWeight {
    LaurentPoly classical = LaurentPoly(1);
    PseudoPoly  pseudo    = PseudoPoly(1);
    std::size_t loops     = 0;
  };

  enum class Engine : std::uint8_t { naive, contract };

  inline constexpr std::size_t kDefaultStateLimit = 24;

  // The naive engine's crossing cap; PSEUDOBRACKET_STATE_LIMIT overrides it.
  inline std::size_t default_state_limit() {
    if (char const* env = std::getenv("PSEUDOBRACKET_STATE_LIMIT")) {
      try {
        long long v = std::stoll(env);
        if (v >= 0) {
          return static_cast<std::size_t>(v);
        }
      } catch (std::exception const&) {
      }
    }
    return kDefaultStateLimit;
  }

  namespace detail {

    // Dense arc numbering shared by both engines.
    struct ArcIndex {
      std::map<ArcId, std::size_t> index;
      std::size_t                  num_free = 0;

      explicit ArcIndex(PseudoDiagram const& D) {
        for (auto const& [a, unused] : D.successor()) {
          index.emplace(a, index.size());
        }
        num_free = D.free_arcs().size();
      }

      std::size_t operator()(ArcId a) const {
        return index.at(a);
      }

      std::size_t size() const noexcept {
        return index.size();
      }
    };

    class UnionFind {
     public:
      explicit UnionFind(std::size_t n) : _parent(n), _count(n) {
        std::iota(_parent.begin(), _parent.end(), std::size_t(0));
      }

      std::size_t find(std::size_t x) {
        while (_parent[x] != x) {
          _parent[x] = _parent[_parent[x]];
          x          = _parent[x];
        }
        return x;
      }

      void unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x != y) {
          _parent[x] = y;
          --_count;
        }
      }

      std::size_t count() const noexcept {
        return _count;
      }

     private:
      std::vector<std::size_t> _parent;
      std::size_t              _count;
    };

    inline std::array<std::pair<int, int>, 2> pairing(PseudoDiagram const& D,
                                                      std::size_t          i,
                                                      Smoothing            s) {
      return s == Smoothing::vertical ? D.oriented_pairing(i) : D.unoriented_pairing(i);
    }

    // Exponent of A contributed by classical crossing i under smoothing s.
    inline int classical_exponent(PseudoDiagram const& D, std::size_t i, Smoothing s) {
      int const sign = to_int(crossing_sign(D, i));
      return s == Smoothing::vertical ? sign : -sign;
    }

    // d^k for k >= 0, memoised by the caller.
    inline std::vector<LaurentPoly> loop_powers(std::size_t max) {
      std::vector<LaurentPoly> out{LaurentPoly(1)};
      LaurentPoly const        d = LaurentPoly::loop_value();
      for (std::size_t k = 1; k <= max; ++k) {
        out.push_back(out.back() * d);
      }
      return out;
    }

    inline std::size_t count_loops(PseudoDiagram const&    D,
                                   ArcIndex const&         idx,
                                   SmoothingState const&   state) {
      UnionFind uf(idx.size());
      for (std::size_t i = 0; i < D.size(); ++i) {
        auto const& arcs = D.crossing(i).arcs;
        for (auto const& [s, t] : pairing(D, i, state[i])) {
          uf.unite(idx(arcs[s]), idx(arcs[t]));
        }
      }
      return uf.count();
    }

  }  // namespace detail

  // Number of closed curves left after smoothing every crossing as in state.
  inline std::size_t smooth_and_count(PseudoDiagram const& D, SmoothingState const& state) {
    if (state.size() != D.size()) {
      throw std::invalid_argument("smoothing state has " + std::to_string(state.size())
                                  + " entries for " + std::to_string(D.size())
                                  + " crossings");
    }
    return detail::count_loops(D, detail::ArcIndex(D), state);
  }

  inline StateWeight state_weight(PseudoDiagram const& D, SmoothingState const& state) {
    StateWeight w;
    w.loops       = smooth_and_count(D, state);
    int a_exp     = 0;
    for (std::size_t i = 0; i < D.size(); ++i) {
      if (D.crossing(i).is_classical()) {
        a_exp += detail::classical_exponent(D, i, state[i]);
      } else {
        w.pseudo *= state[i] == Smoothing::vertical ? PseudoPoly::V()
                                                    : PseudoPoly::horizontal_weight();
      }
    }
    w.classical = LaurentPoly::A(a_exp);
    return w;
  }

  // Sum over all 2^n smoothing states. Throws TooLarge above limit crossings.
  inline PseudoPoly bracket_naive(PseudoDiagram const& D,
                                  std::size_t          limit = default_state_limit()) {
    std::size_t const n = D.size();
    if (n > limit) {
      throw TooLarge("naive engine: " + std::to_string(n) + " crossings exceeds the limit of "
                     + std::to_string(limit));
    }
    if (D.num_arcs() == 0) {
      return PseudoPoly(1);
    }
    detail::ArcIndex const idx(D);

    std::vector<std::size_t> pseudo_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (D.crossing(i).is_pseudo()) {
        pseudo_idx.push_back(i);
      }
    }

    // Tally states by (A exponent, #vertical pseudo, #horizontal pseudo, loops);
    // the polynomial algebra is then done once per distinct key.
    using Key   = std::tuple<int, std::size_t, std::size_t, std::size_t>;
    using Tally = std::map<Key, std::uint64_t>;

    // Per crossing and smoothing: the two arc pairs it joins and the A
    // exponent it contributes (classical) or whether it is V (pseudo).
    struct Local {
      std::array<std::array<std::pair<std::size_t, std::size_t>, 2>, 2> joins;
      std::array<int, 2>                                                 a_exp{0, 0};
      bool                                                               pseudo = false;
    };
    std::vector<Local> local(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto const& arcs = D.crossing(i).arcs;
      for (int h = 0; h < 2; ++h) {
        auto const s  = h == 0 ? Smoothing::vertical : Smoothing::horizontal;
        auto const pr = detail::pairing(D, i, s);
        for (int j = 0; j < 2; ++j) {
          local[i].joins[h][j] = {idx(arcs[pr[j].first]), idx(arcs[pr[j].second])};
        }
        if (D.crossing(i).is_classical()) {
          local[i].a_exp[h] = detail::classical_exponent(D, i, s);
        }
      }
      local[i].pseudo = D.crossing(i).is_pseudo();
    }

    std::uint64_t const total = std::uint64_t(1) << n;
    auto run = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
      for (std::uint64_t mask = begin; mask < end; ++mask) {
        detail::UnionFind uf(idx.size());
        int               a_exp = 0;
        std::size_t       nv    = 0;
        for (std::size_t i = 0; i < n; ++i) {
          int const h = static_cast<int>((mask >> i) & 1u);
          a_exp += local[i].a_exp[h];
          if (local[i].pseudo && h == 0) {
            ++nv;
          }
          for (auto const& [x, y] : local[i].joins[h]) {
            uf.unite(x, y);
          }
        }
        ++tally[{a_exp, nv, pseudo_idx.size() - nv, uf.count()}];
      }
    };

    std::size_t workers = 1;
    if (n >= 16) {
      workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    }
    std::vector<Tally> tallies(workers);
    if (workers == 1) {
      run(0, total, tallies[0]);
    } else {
      std::vector<std::thread> threads;
      std::uint64_t const      chunk = (total + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        std::uint64_t const b = std::min(total, w * chunk);
        std::uint64_t const e = std::min(total, b + chunk);
        threads.emplace_back(run, b, e, std::ref(tallies[w]));
      }
      for (auto& t : threads) {
        t.join();
      }
    }

    Tally merged;
    for (auto const& t : tallies) {
      for (auto const& [k, c] : t) {
        merged[k] += c;
      }
    }

    auto const d_pow = detail::loop_powers(idx.size());
    std::vector<PseudoPoly> v_pow{PseudoPoly(1)};
    std::vector<PseudoPoly> h_pow{PseudoPoly(1)};
    for (std::size_t k = 1; k <= pseudo_idx.size(); ++k) {
      v_pow.push_back(v_pow.back() * PseudoPoly::V());
      h_pow.push_back(h_pow.back() * PseudoPoly::horizontal_weight());
    }

    PseudoPoly result;
    for (auto const& [key, count] : merged) {
      auto const& [a_exp, nv, nh, loops] = key;
      LaurentPoly const scalar
          = LaurentPoly::monomial(Integer(count), a_exp) * d_pow[loops - 1];
      result += (v_pow[nv] * h_pow[nh]).scaled(scalar);
    }
    return result;
  }

  namespace detail {

    // Order crossings so that few arcs are left dangling at each step.
    inline std::vector<std::size_t> contraction_order(PseudoDiagram const& D) {
      std::size_t const        n = D.size();
      std::vector<bool>        done(n, false);
      std::map<ArcId, int>     touched;  // endpoints already processed
      std::vector<std::size_t> order;
      for (std::size_t step = 0; step < n; ++step) {
        std::size_t best       = n;
        long        best_delta = 0;
        for (std::size_t c = 0; c < n; ++c) {
          if (done[c]) {
            continue;
          }
          std::map<ArcId, int> here;
          for (ArcId a : D.crossing(c).arcs) {
            ++here[a];
          }
          long delta = 0;
          for (auto const& [a, k] : here) {
            int const before = touched.count(a) ? touched.at(a) : 0;
            int const after  = before + k;
            delta += (after == 1 ? 1 : 0) - (before == 1 ? 1 : 0);
          }
          if (best == n || delta < best_delta) {
            best       = c;
            best_delta = delta;
          }
        }
        done[best] = true;
        for (ArcId a : D.crossing(best).arcs) {
          ++touched[a];
        }
        order.push_back(best);
      }
      return order;
    }

  }  // namespace detail

  // Same value as bracket_naive, by tangle contraction.
  inline PseudoPoly bracket_contract(PseudoDiagram const& D) {
    if (D.num_arcs() == 0) {
      return PseudoPoly(1);
    }
    LaurentPoly const d        = LaurentPoly::loop_value();
    std::size_t const num_free = D.free_arcs().size();
    if (D.size() == 0) {
      return PseudoPoly(d.pow(static_cast<unsigned>(num_free - 1)));
    }

    auto const d_pow = detail::loop_powers(8);

    // State: open arcs (sorted ids) and, for each, the position of the open
    // arc at the other end of the same path.
    using Matching = std::vector<std::uint16_t>;
    std::vector<ArcId>           open;
    std::map<Matching, PseudoPoly> table{{Matching{}, PseudoPoly(1)}};

    for (std::size_t c : detail::contraction_order(D)) {
      auto const& arcs = D.crossing(c).arcs;

      // Classify the four slots.
      std::size_t const k = open.size();
      std::array<int, 4> old_pos{-1, -1, -1, -1};  // position in `open`, if closing
      std::array<int, 4> twin{-1, -1, -1, -1};     // other slot with same arc
      for (int s = 0; s < 4; ++s) {
        auto it = std::lower_bound(open.begin(), open.end(), arcs[s]);
        if (it != open.end() && *it == arcs[s]) {
          old_pos[s] = static_cast<int>(it - open.begin());
        }
        for (int t = 0; t < 4; ++t) {
          if (t != s && arcs[t] == arcs[s]) {
            twin[s] = t;
          }
        }
      }

      std::vector<ArcId> next_open;
      std::vector<bool>  closing(k, false);
      for (int s = 0; s < 4; ++s) {
        if (old_pos[s] >= 0) {
          closing[old_pos[s]] = true;
        }
      }
      for (std::size_t p = 0; p < k; ++p) {
        if (!closing[p]) {
          next_open.push_back(open[p]);
        }
      }
      for (int s = 0; s < 4; ++s) {
        if (old_pos[s] < 0 && twin[s] < 0) {
          next_open.push_back(arcs[s]);
        }
      }
      std::sort(next_open.begin(), next_open.end());

      // Both smoothings with their weights.
      std::array<std::pair<std::array<std::pair<int, int>, 2>, PseudoPoly>, 2> options;
      if (D.crossing(c).is_classical()) {
        int const sign = to_int(crossing_sign(D, c));
        options[0]     = {D.oriented_pairing(c), PseudoPoly(LaurentPoly::A(sign))};
        options[1]     = {D.unoriented_pairing(c), PseudoPoly(LaurentPoly::A(-sign))};
      } else {
        options[0] = {D.oriented_pairing(c), PseudoPoly::V()};
        options[1] = {D.unoriented_pairing(c), PseudoPoly::horizontal_weight()};
      }

      std::map<Matching, PseudoPoly> next_table;
      std::size_t const              n_nodes = k + 4;
      for (auto const& [matching, coeff] : table) {
        for (auto const& [pairs, weight] : options) {
          // Multigraph on old open arcs and the four slots; every node has
          // degree at most two.
          std::vector<std::array<std::pair<int, int>, 2>> adj(
              n_nodes, {std::pair{-1, -1}, std::pair{-1, -1}});
          std::vector<int> deg(n_nodes, 0);
          int              edge_id = 0;
          auto add_edge = [&](std::size_t u, std::size_t v) {
            adj[u][deg[u]++] = {static_cast<int>(v), edge_id};
            adj[v][deg[v]++] = {static_cast<int>(u), edge_id};
            ++edge_id;
          };
          for (std::size_t p = 0; p < k; ++p) {
            if (p < matching[p]) {
              add_edge(p, matching[p]);
            }
          }
          for (int s = 0; s < 4; ++s) {
            if (old_pos[s] >= 0) {
              add_edge(k + s, static_cast<std::size_t>(old_pos[s]));
            } else if (twin[s] > s) {
              add_edge(k + s, k + twin[s]);
            }
          }
          for (auto const& [s, t] : pairs) {
            add_edge(k + s, k + t);
          }

          auto label = [&](std::size_t node) -> ArcId {
            return node < k ? open[node] : arcs[node - k];
          };
          std::vector<bool> seen(n_nodes, false);
          Matching          next(next_open.size());
          auto pos_of = [&](ArcId a) {
            return static_cast<std::uint16_t>(
                std::lower_bound(next_open.begin(), next_open.end(), a) - next_open.begin());
          };
          // Leave `cur` by the edge we did not arrive on.
          auto step = [&](std::size_t cur, int via) {
            auto const& e = adj[cur][0].second != via ? adj[cur][0] : adj[cur][1];
            return std::pair{static_cast<std::size_t>(e.first), e.second};
          };
          // Paths between the new dangling ends.
          for (std::size_t u = 0; u < n_nodes; ++u) {
            if (deg[u] != 1 || seen[u]) {
              continue;
            }
            seen[u]         = true;
            auto [cur, via] = step(u, -1);
            while (deg[cur] == 2) {
              seen[cur]           = true;
              std::tie(cur, via)  = step(cur, via);
            }
            seen[cur]               = true;
            std::uint16_t const a   = pos_of(label(u));
            std::uint16_t const b   = pos_of(label(cur));
            next[a]                 = b;
            next[b]                 = a;
          }
          // Anything unvisited lies on a closed loop.
          std::size_t loops = 0;
          for (std::size_t u = 0; u < n_nodes; ++u) {
            if (seen[u] || deg[u] == 0) {
              continue;
            }
            ++loops;
            std::size_t cur = u;
            int         via = -1;
            while (!seen[cur]) {
              seen[cur]          = true;
              std::tie(cur, via) = step(cur, via);
            }
          }
          PseudoPoly term = coeff * weight;
          if (loops > 0) {
            term = term.scaled(loops < d_pow.size() ? d_pow[loops] : d.pow(loops));
          }
          next_table[next] += term;
        }
      }
      table = std::move(next_table);
      open  = std::move(next_open);
    }

    // Every state now has all loops closed and has collected d per loop; one
    // factor of d is removed for the normalisation <unknot> = 1.
    PseudoPoly total;
    for (auto const& [matching, coeff] : table) {
      total += coeff;
    }
    if (num_free > 0) {
      total = total.scaled(d.pow(static_cast<unsigned>(num_free)));
    }
    PseudoPoly result;
    for (auto const& [k, c] : total.coeffs()) {
      auto q = exact_divide(c, d);
      if (!q) {
        throw std::logic_error("contraction engine: loop sum not divisible by d");
      }
      result.add_coeff(k, *q);
    }
    return result;
  }

  inline PseudoPoly bracket(PseudoDiagram const& D, Engine engine = Engine::contract) {
    return engine == Engine::naive ? bracket_naive(D) : bracket_contract(D);
  }

  // (-A^-3)^writhe * <D>
  inline PseudoPoly normalized_bracket(PseudoDiagram const& D,
                                       Engine               engine = Engine::contract) {
    return bracket(D, engine).scaled(LaurentPoly::writhe_factor(writhe(D)));
  }

  // D with crossing i replaced by smoothing s. The joined arcs take the
  // smallest id among them; the result is re-oriented along the new
  // components (classical weights do not depend on orientation). Throws
  // ValidationError if that would flip the vertical smoothing of some other
  // pseudo crossing, since the result would then carry a different weight.
  inline PseudoDiagram smooth_crossing(PseudoDiagram const& D, std::size_t i, Smoothing s) {
    auto const& at_i = D.crossing(i).arcs;

    std::map<ArcId, ArcId> rep;
    for (auto const& [a, unused] : D.successor()) {
      rep[a] = a;
    }
    auto find = [&rep](ArcId a) {
      while (rep.at(a) != a) {
        a = rep.at(a);
      }
      return a;
    };
    for (auto const& [p, q] : detail::pairing(D, i, s)) {
      ArcId const x = find(at_i[p]);
      ArcId const y = find(at_i[q]);
      rep[std::max(x, y)] = std::min(x, y);
    }

    std::vector<Crossing>    crossings;
    std::vector<std::size_t> old_index;
    for (std::size_t j = 0; j < D.size(); ++j) {
      if (j == i) {
        continue;
      }
      Crossing c = D.crossing(j);
      for (auto& a : c.arcs) {
        a = find(a);
      }
      crossings.push_back(c);
      old_index.push_back(j);
    }

    std::map<ArcId, std::vector<Endpoint>> occ;
    for (std::size_t j = 0; j < crossings.size(); ++j) {
      for (int t = 0; t < 4; ++t) {
        occ[crossings[j].arcs[t]].push_back({j, t});
      }
    }

    std::map<ArcId, ArcId> succ;
    for (auto const& [a, unused] : D.successor()) {
      ArcId const r = find(a);
      if (r == a && occ.count(r) == 0) {
        succ[r] = r;  // closed up into a free loop, or already free
      }
    }

    // Walk each component, entering every crossing and leaving by the
    // opposite slot.
    std::vector<std::array<bool, 4>> incoming(crossings.size(), {false, false, false, false});
    std::set<ArcId>                  seen;
    for (auto const& [start, ends] : occ) {
      if (seen.count(start)) {
        continue;
      }
      ArcId    cur  = start;
      Endpoint head = ends[1];
      while (!seen.count(cur)) {
        seen.insert(cur);
        incoming[head.crossing][head.slot] = true;
        int const   out_slot              = (head.slot + 2) % 4;
        ArcId const next                  = crossings[head.crossing].arcs[out_slot];
        auto const& next_ends             = occ.at(next);
        Endpoint const tail{head.crossing, out_slot};
        head      = next_ends[0] == tail ? next_ends[1] : next_ends[0];
        succ[cur] = next;
        cur       = next;
      }
    }

    for (std::size_t j = 0; j < crossings.size(); ++j) {
      auto& c = crossings[j];
      if (c.is_classical()) {
        if (!incoming[j][0]) {
          std::rotate(c.arcs.begin(), c.arcs.begin() + 2, c.arcs.end());
          std::rotate(incoming[j].begin(), incoming[j].begin() + 2, incoming[j].end());
        }
        continue;
      }
      bool same = true;
      bool flipped = true;
      for (int t = 0; t < 4; ++t) {
        same    = same && incoming[j][t] == D.is_incoming(old_index[j], t);
        flipped = flipped && incoming[j][t] != D.is_incoming(old_index[j], t);
      }
      if (!same && !flipped) {
        throw ValidationError("smoothing crossing " + std::to_string(i)
                              + " reverses one strand of pseudo crossing "
                              + std::to_string(old_index[j]));
      }
    }
    return PseudoDiagram(std::move(crossings), std::move(succ), incoming);
  }

}  // namespace pseudobracket
