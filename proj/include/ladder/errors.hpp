#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ladder {

// Malformed or inconsistent user input (files, parameters).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A stage was given inputs that parse fine but cannot be processed together.
class StageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A time step's schedule does not fit in the configured cycle budget.
class BudgetOverflow : public std::runtime_error {
public:
  BudgetOverflow(std::string what, std::vector<std::int64_t> steps)
      : std::runtime_error(std::move(what)), steps_(std::move(steps)) {}

  const std::vector<std::int64_t>& steps() const noexcept { return steps_; }

private:
  std::vector<std::int64_t> steps_;
};

}  // namespace ladder
