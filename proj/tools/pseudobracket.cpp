// pseudobracket: brackets, cosmetic crossing scans and move fuzzing for PD
// diagrams.
//
// Exit codes: 0 ok, 1 usage or parse error, 2 invalid diagram, 3 a move
// changed the normalized bracket.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pseudobracket/bracket.hpp"
#include "pseudobracket/io.hpp"
#include "pseudobracket/knotinfo.hpp"
#include "pseudobracket/moves.hpp"
#include "pseudobracket/obstruction.hpp"

namespace pb = pseudobracket;

namespace {

  enum Exit { ok = 0, usage = 1, invalid = 2, violation = 3 };

  struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  pb::Engine parse_engine(std::string const& s) {
    return s == "naive" ? pb::Engine::naive : pb::Engine::contract;
  }

  std::vector<pb::MoveKind> parse_moves(std::string const& list) {
    std::vector<pb::MoveKind> out;
    std::stringstream         ss(list);
    std::string               m;
    while (std::getline(ss, m, ',')) {
      if (m == "r1") {
        out.push_back(pb::MoveKind::r1_positive);
        out.push_back(pb::MoveKind::r1_negative);
      } else if (m == "r1+") {
        out.push_back(pb::MoveKind::r1_positive);
      } else if (m == "r1-") {
        out.push_back(pb::MoveKind::r1_negative);
      } else if (m == "p1") {
        out.push_back(pb::MoveKind::p1);
      } else if (m == "r2") {
        out.push_back(pb::MoveKind::r2);
      } else if (m == "r3" || m == "p2" || m == "p3") {
        throw Usage("move '" + m + "' is checked through fixture pairs, not fuzzing");
      } else {
        throw Usage("unknown move '" + m + "' (expected r1, r1+, r1-, p1, r2)");
      }
    }
    if (out.empty()) {
      throw Usage("--moves is empty");
    }
    return out;
  }

  int cmd_bracket(std::string const& file, bool normalized, std::string const& engine,
                  std::string const& format) {
    auto const D = pb::load_diagram(file);
    auto const e = parse_engine(engine);
    auto const p = normalized ? pb::normalized_bracket(D, e) : pb::bracket(D, e);
    if (format == "json") {
      pb::json j{{"normalized", normalized}, {"engine", engine}, {"crossings", D.size()},
                 {"writhe", pb::writhe(D)}, {"text", pb::to_string(p)},
                 {"polynomial", pb::to_json(p)}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << pb::to_string(p) << "\n";
    }
    return ok;
  }

  int cmd_scan(std::string const& file, std::optional<std::size_t> crossing,
               std::string const& engine, std::string const& format) {
    auto const                         D = pb::load_diagram(file);
    auto const                         e = parse_engine(engine);
    std::vector<pb::ObstructionReport> reports;
    if (crossing) {
      if (*crossing >= D.size()) {
        throw Usage("crossing " + std::to_string(*crossing) + " out of range (diagram has "
                    + std::to_string(D.size()) + ")");
      }
      reports.push_back(pb::obstruct(D, *crossing, e));
    } else {
      reports = pb::scan(D, e);
    }
    if (format == "json") {
      pb::json arr = pb::json::array();
      for (auto const& r : reports) {
        arr.push_back(pb::to_json(r));
      }
      std::cout << pb::json{{"reports", arr}}.dump(2) << "\n";
    } else {
      std::cout << pb::render_reports(reports);
    }
    return ok;
  }

  int cmd_fuzz(std::string const& file, std::string const& moves, std::size_t steps,
               std::uint64_t seed, std::string const& engine, std::string const& format) {
    auto const allowed = parse_moves(moves);
    auto const D       = pb::load_diagram(file);
    auto const e       = parse_engine(engine);
    auto const expect  = pb::normalized_bracket(D, e);

    struct Failure {
      std::size_t    step;
      pb::Move       move;
      pb::PseudoPoly got;
    };
    std::optional<Failure> failure;
    std::size_t            applied = 0;
    auto final = pb::random_move_walk(
        D, seed, steps, allowed,
        [&](std::size_t step, pb::Move const& m, pb::PseudoDiagram const& after) {
          ++applied;
          if (failure) {
            return;
          }
          auto got = pb::normalized_bracket(after, e);
          if (got != expect) {
            failure = Failure{step, m, std::move(got)};
          }
        });

    if (format == "json") {
      pb::json j{{"result", failure ? "FAIL" : "PASS"},
                 {"seed", seed},
                 {"steps", steps},
                 {"applied", applied},
                 {"final_crossings", final.size()},
                 {"expected", pb::to_string(expect)}};
      if (failure) {
        j["step"] = failure->step;
        j["move"] = pb::to_string(failure->move);
        j["got"]  = pb::to_string(failure->got);
      }
      std::cout << j.dump(2) << "\n";
    } else if (failure) {
      std::cout << "FAIL step " << failure->step << " (" << pb::to_string(failure->move)
                << "): expected " << expect << ", got " << failure->got << "\n";
    } else {
      std::cout << "PASS " << applied << " moves, " << final.size()
                << " crossings, normalized bracket " << expect << "\n";
    }
    return failure ? violation : ok;
  }

  int cmd_ingest(std::string const& csv, std::string const& name) {
    auto pd = pb::knotinfo_lookup(pb::read_file(csv), name);
    if (!pd) {
      throw Usage("no knot named '" + name + "' in " + csv);
    }
    std::string const text = pb::knotinfo_pd_to_text(*pd);
    pb::parse_pd_text(text);
    std::cout << text;
    return ok;
  }

  int cmd_export_moves(std::string const& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&dir](std::string const& move, std::vector<pb::FixturePair> const& pairs) {
      for (auto const& p : pairs) {
        std::string file = p.name;
        std::replace(file.begin(), file.end(), '/', '_');
        std::ofstream out(std::filesystem::path(dir) / (file + ".json"));
        // One diagram per line keeps the files readable and diffable.
        out << "{\n  \"name\": " << pb::json(p.name).dump() << ",\n  \"move\": \"" << move
            << "\",\n  \"before\": " << pb::pd_to_json(p.before).dump()
            << ",\n  \"after\": " << pb::pd_to_json(p.after).dump() << "\n}\n";
      }
      return pairs.size();
    };
    std::size_t n = write("r3", pb::r3_fixture_pairs());
    n += write("p2", pb::p2_fixture_pairs());
    n += write("p3", pb::p3_fixture_pairs());
    std::cout << "wrote " << n << " pairs to " << dir << "\n";
    return ok;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo bracket polynomial of PD diagrams"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "text";
  std::string engine = "contract";
  auto        add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "diagram (.pd text or .json)")->required();
    sub->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--engine", engine)->check(CLI::IsMember({"naive", "contract"}));
  };

  bool normalized = false;
  auto* bracket   = app.add_subcommand("bracket", "print <D> or, with --normalized, P_D(A,V)");
  add_common(bracket);
  bracket->add_flag("--normalized", normalized);

  std::optional<std::size_t> crossing;
  auto* scan = app.add_subcommand("scan", "cosmetic crossing obstruction for each crossing");
  add_common(scan);
  scan->add_option("--crossing", crossing, "only this crossing (0-based)");

  std::string   moves = "r1,r2,p1";
  std::size_t   steps = 20;
  std::uint64_t seed  = 0;
  auto* fuzz = app.add_subcommand("fuzz", "random move walk checking the normalized bracket");
  add_common(fuzz);
  fuzz->add_option("--moves", moves, "comma list of r1, r1+, r1-, p1, r2");
  fuzz->add_option("--steps", steps);
  fuzz->add_option("--seed", seed);

  std::string csv;
  std::string name;
  auto* ingest = app.add_subcommand("ingest", "print text PD for a knot in a KnotInfo CSV");
  ingest->add_option("csv", csv)->required();
  ingest->add_option("name", name)->required();

  std::string dir;
  auto* exp = app.add_subcommand("export-moves", "write the R3/P2/P3 fixture pairs as JSON");
  exp->add_option("dir", dir)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*bracket) {
      return cmd_bracket(file, normalized, engine, format);
    }
    if (*scan) {
      return cmd_scan(file, crossing, engine, format);
    }
    if (*fuzz) {
      return cmd_fuzz(file, moves, steps, seed, engine, format);
    }
    if (*ingest) {
      return cmd_ingest(csv, name);
    }
    if (*exp) {
      return cmd_export_moves(dir);
    }
  } catch (Usage const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (pb::ParseError const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return usage;
  } catch (pb::Error const& e) {
    std::cerr << "invalid diagram: " << e.what() << "\n";
    return invalid;
  }
  return usage;
}
