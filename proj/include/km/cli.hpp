#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

namespace km::cli {

enum ExitCode { kOk = 0, kKnotted = 1, kIndeterminate = 2, kInputError = 3 };

constexpr const char* kSchema = "kmtool-report/1";

struct Options {
  int max_dim = 70;        // normal coordinates (7t) before certification gives up
  int max_crossings = 6;   // Reidemeister search
  int max_depth = 6;
  unsigned seed = 1;
  long max_subdivided = 200000;  // tetrahedra after two subdivisions in `report`
  std::string out;         // build: output triangulation path
  std::string knot;        // certify: separate knot file
};

struct Outcome {
  int exit_code = kOk;
  std::string summary;     // one human-readable line
  nlohmann::json report;
  std::string artifact;    // moves: script text; build: triangulation text
};

// Throws std::logic_error unless r carries the fields its command promises.
void validate_report(const nlohmann::json& r);

enum class InputKind { Diagram, Triangulation };
InputKind detect_input(const std::string& text);

Outcome cmd_validate(const std::string& path, const Options& o);
Outcome cmd_build(const std::string& path, const Options& o);
Outcome cmd_certify(const std::string& path, const Options& o);
Outcome cmd_moves(const std::string& path, const Options& o);
Outcome cmd_report(const std::string& path, const Options& o);

// Parses argv (CLI11), runs one subcommand, prints the summary and report.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace km::cli
