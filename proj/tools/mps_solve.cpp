// Solves an MPS file with the built-in branch-and-bound and writes a solution
// file in the external backend format:
//   examsched-mps-solve model.mps solution.txt [--time-limit S] [--work-limit N]
#include <iostream>

#include "CLI11.hpp"

#include "examsched/solve.hpp"
#include "examsched/text.hpp"

using namespace examsched;

int main(int argc, char** argv) {
  CLI::App app{"Solve a binary program in MPS format"};
  std::string model_path, solution_path;
  SolveLimits limits;
  app.add_option("model", model_path, "MPS file")->required();
  app.add_option("solution", solution_path, "Solution file to write")->required();
  app.add_option("--time-limit", limits.time_limit, "Seconds");
  app.add_option("--work-limit", limits.work_limit, "Deterministic work budget");
  CLI11_PARSE(app, argc, argv);
  try {
    ImportedModel imported = read_mps(text::read_file(model_path));
    SolveOutcome out = solve_model(imported.model, limits, "builtin");
    text::write_file(solution_path, format_solution(imported.model, out));
    std::cerr << to_string(out.status) << "\n";
    return out.status == SolveStatus::kError ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
