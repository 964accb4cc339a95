// Walkthrough: the pseudo trefoil and a cosmetic crossing scan.

#include <iostream>

#include "pseudobracket/bracket.hpp"
#include "pseudobracket/io.hpp"
#include "pseudobracket/moves.hpp"
#include "pseudobracket/obstruction.hpp"

namespace pb = pseudobracket;

int main() {
  auto const trefoil = pb::parse_pd_text("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)");
  std::cout << "<trefoil>          = " << pb::bracket(trefoil) << "\n";

  auto const pt = pb::make_pseudo(trefoil, 0);
  std::cout << "<pseudo trefoil>   = " << pb::bracket(pt) << "\n";
  std::cout << "P(pseudo trefoil)  = " << pb::normalized_bracket(pt) << "\n";

  // Moves leave the normalized bracket alone.
  auto const bigger = pb::random_move_walk(
      pt, 1, 10, {pb::MoveKind::r1_positive, pb::MoveKind::p1, pb::MoveKind::r2});
  std::cout << "after 10 moves     = " << pb::normalized_bracket(bigger) << "  ("
            << bigger.size() << " crossings)\n\n";

  std::cout << pb::render_reports(pb::scan(trefoil));
}
