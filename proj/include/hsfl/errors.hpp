#pragma once

#include <stdexcept>
#include <string>

namespace hsfl {

// Malformed or inconsistent input documents (CLI exit code 1).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid inputs that admit no valid plan, or a plan that
// violates a constraint (CLI exit code 2).
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Oracle enumeration would exceed the configured budget (CLI exit code 3).
class BudgetError : public std::runtime_error {
public:
  BudgetError(const std::string& what, long long estimated)
      : std::runtime_error(what), estimated_configurations(estimated) {}
  long long estimated_configurations = 0;
};

}  // namespace hsfl
