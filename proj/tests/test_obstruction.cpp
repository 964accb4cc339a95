#include <catch_amalgamated.hpp>

#include <numeric>

#include "pseudobracket/bracket.hpp"
#include "pseudobracket/io.hpp"
#include "pseudobracket/obstruction.hpp"
#include "support.hpp"

using namespace pseudobracket;
using testing::fixture;

namespace {
  LaurentPoly A(int k) {
    return LaurentPoly::A(k);
  }

  PseudoDiagram load(std::string const& name) {
    return load_diagram(fixture(name));
  }

  // Same diagram with arc ids sent through a random bijection.
  PseudoDiagram shuffle_arcs(PseudoDiagram const& D, testing::Rng& rng) {
    std::vector<ArcId> ids(D.num_arcs());
    std::iota(ids.begin(), ids.end(), 1);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::map<ArcId, ArcId> fresh;
    std::size_t            k = 0;
    for (auto const& [a, unused] : D.successor()) {
      fresh[a] = 3 * ids[k++];
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
    return PseudoDiagram(std::move(crossings), std::move(succ));
  }
}  // namespace

TEST_CASE("trefoil crossings are not cosmetic", "[obstruction]") {
  auto const T       = load("trefoil.pd");
  auto const reports = scan(T);
  REQUIRE(reports.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    auto const& r = reports[i];
    CHECK(r.index == i);
    CHECK(r.sign == CrossingSign::positive);
    CHECK(r.v_part == parse_pseudo_poly("A^-8*V - A^4*V"));
    CHECK(r.bracket_square == parse_pseudo_poly("A^-6 + A^-8*V - A^4*V"));
    CHECK(r.bracket_plus == bracket(T));
    CHECK(r.verdict == Verdict::not_cosmetic);
    CHECK_FALSE(r.relation_plus_ok);
  }
}

TEST_CASE("kinks are inconclusive", "[obstruction]") {
  auto const DK = load("doublekink.pd");
  auto const rs = scan(DK);
  REQUIRE(rs.size() == 2);
  for (auto const& r : rs) {
    CHECK(r.bracket_square == PseudoPoly(-A(3)));
    CHECK(r.v_part.is_zero());
    CHECK(r.verdict == Verdict::inconclusive);
    CHECK(r.relation_plus_ok);
    CHECK(r.relation_minus_ok);
    CHECK(r.bracket_plus == PseudoPoly(A(6)));
    CHECK(r.bracket_minus == PseudoPoly(LaurentPoly(1)));
  }

  auto const r = obstruct(load("kink.pd"), 0);
  CHECK(r.bracket_square == PseudoPoly(1));
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK(r.relation_plus_ok);
  CHECK(r.relation_minus_ok);
}

TEST_CASE("negative crossings orient the relations by sign", "[obstruction]") {
  auto const N = switch_crossing(load("kink.pd"), 0);
  auto const r = obstruct(N, 0);
  CHECK(r.sign == CrossingSign::negative);
  CHECK(r.bracket_minus == bracket(N));
  CHECK(r.bracket_plus == bracket(load("kink.pd")));
  CHECK(r.relation_plus_ok);
  CHECK(r.relation_minus_ok);

  auto const L = load("left_trefoil.pd");
  for (auto const& x : scan(L)) {
    CHECK(x.sign == CrossingSign::negative);
    CHECK(x.verdict == Verdict::not_cosmetic);
    CHECK(x.v_part == mirror(parse_pseudo_poly("A^-8*V - A^4*V")));
  }
}

TEST_CASE("obstruction preconditions", "[obstruction]") {
  CHECK_THROWS_AS(obstruct(load("pt.pd"), 1), HasPseudoCrossings);
  CHECK_THROWS_AS(scan(load("pt.pd")), HasPseudoCrossings);
  CHECK_THROWS_AS(scan(load("hopf.json")), MultiComponent);
  CHECK_THROWS_AS(obstruct(load("trefoil.pd"), 3), std::out_of_range);
  CHECK(scan(PseudoDiagram::unknot()).empty());
}

TEST_CASE("K11n1", "[obstruction]") {
  auto const K  = load("k11n1.pd");
  auto const rs = scan(K);
  REQUIRE(rs.size() == 11);
  CHECK(std::any_of(rs.begin(), rs.end(),
                    [](auto const& r) { return r.verdict == Verdict::not_cosmetic; }));

  // The printed square bracket, reproduced at crossing 4 without mirroring.
  LaurentPoly const c0 = A(2) - 3 * A(6) + 5 * A(10) - 7 * A(14) + 9 * A(18) - 9 * A(22)
                         + 8 * A(26) - 6 * A(30) + 4 * A(34) - 2 * A(38) + A(42);
  LaurentPoly const c1 = 1 - 3 * A(4) + 4 * A(8) - 6 * A(12) + 6 * A(16) - 5 * A(20)
                         + 4 * A(24) - 2 * A(28) + A(36) - A(40) + A(44);
  PseudoPoly const printed = (PseudoPoly(c0) + PseudoPoly::v_power(c1)).scaled(A(-24));
  CHECK(rs[4].bracket_square == printed);
  CHECK(rs[4].sign == CrossingSign::negative);
  CHECK(rs[4].verdict == Verdict::not_cosmetic);
  CHECK(obstruct(K, 4).bracket_square == printed);
}

TEST_CASE("soundness on random knots", "[obstruction][property]") {
  testing::Rng rng(51);
  int          equal_pairs = 0;
  int          checked     = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto const D = testing::random_classical_knot(rng, 8);
    for (auto const& r : scan(D)) {
      ++checked;
      auto const plus  = r.bracket_plus.scaled(LaurentPoly::writhe_factor(
          writhe(D) + (r.sign == CrossingSign::positive ? 0 : 2)));
      auto const minus = r.bracket_minus.scaled(LaurentPoly::writhe_factor(
          writhe(D) - (r.sign == CrossingSign::positive ? 2 : 0)));
      if (plus == minus) {
        ++equal_pairs;
        CHECK(r.v_part.is_zero());
        CHECK(r.bracket_plus == r.bracket_square.scaled(-A(3)));
        CHECK(r.bracket_minus == r.bracket_square.scaled(-A(-3)));
      }
      CHECK((r.verdict == Verdict::not_cosmetic) == !r.v_part.is_zero());

      auto const KV = bracket(smooth_crossing(D, r.index, Smoothing::vertical));
      auto const KH = bracket(smooth_crossing(D, r.index, Smoothing::horizontal));
      CHECK(r.v_part.is_zero() == (KV == KH.scaled(LaurentPoly::loop_value())));
    }
  }
  CHECK(checked > 300);
  CHECK(equal_pairs > 20);
}

TEST_CASE("verdicts do not depend on arc labels", "[obstruction][property]") {
  testing::Rng rng(52);
  std::vector<PseudoDiagram> corpus{load("trefoil.pd"), load("figure_eight.pd"),
                                    load("doublekink.pd"), load("k11n1.pd")};
  for (int k = 0; k < 20; ++k) {
    corpus.push_back(testing::random_classical_knot(rng, 8));
  }
  for (auto const& D : corpus) {
    auto const base = scan(D);
    for (auto const& R : {relabel_sequential(D), shuffle_arcs(D, rng)}) {
      auto const other = scan(R);
      REQUIRE(other.size() == base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(other[i].verdict == base[i].verdict);
        CHECK(other[i].v_part == base[i].v_part);
      }
    }
  }
}

TEST_CASE("engines give the same reports", "[obstruction]") {
  auto const K = load("figure_eight.pd");
  auto const a = scan(K, Engine::naive);
  auto const b = scan(K, Engine::contract);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].bracket_square == b[i].bracket_square);
    CHECK(a[i].verdict == b[i].verdict);
  }
}

TEST_CASE("report table", "[obstruction]") {
  auto const text = render_reports(scan(load("trefoil.pd")));
  CHECK(text.rfind("crossing  sign  verdict       v_part\n", 0) == 0);
  CHECK(text.find("0         +1    NOT-COSMETIC  A^-8*V - A^4*V\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(to_string(Verdict::inconclusive) == "INCONCLUSIVE");
}
