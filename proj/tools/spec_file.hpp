#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifes/classes.hpp"
#include "ifes/equation.hpp"
#include "ifes/grid_function.hpp"

namespace ifes::app {

struct SolverConfig {
  std::string method = "banach";  // banach | tarski-min | tarski-max | tarski-both
  std::size_t grid = 1024;
  std::size_t levels = 1024;
  EvalMode mode = EvalMode::StepUSC;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  double relaxation = 0.5;
};

/// Contents of a spec file. Exactly one of `product` and `sum` is set.
struct LoadedSpec {
  std::string origin;
  std::optional<ProductEquationSpec> product;
  std::optional<SumEquationSpec> sum;
  std::optional<ClassParams> classes;
  SolverConfig solver;
};

/// Every problem found in a spec file, each prefixed with origin:line.
class SpecError : public Error {
public:
  explicit SpecError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
  std::vector<std::string> problems_;
};

bool is_valid_method(std::string_view method);

LoadedSpec parse_spec(std::string_view text, const std::string& origin);
/// Throws SpecError (including when the file cannot be read).
LoadedSpec load_spec(const std::string& path);
/// Text that parse_spec reads back to an equal spec.
std::string write_spec(const LoadedSpec& spec);

}  // namespace ifes::app
