#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmdwr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density or pressure fell below the vacuum guard.
class NonphysicalState : public Error {
 public:
  explicit NonphysicalState(const std::string& what, long cell = -1)
      : Error(cell >= 0 ? what + " (cell " + std::to_string(cell) + ")" : what), cell_(cell) {}
  long cell() const { return cell_; }

 private:
  long cell_;
};

class UnknownCell : public Error {
 public:
  using Error::Error;
};

class RootMismatch : public Error {
 public:
  using Error::Error;
};

class NotARefinement : public Error {
 public:
  using Error::Error;
};

class UnknownBoundaryMarker : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct ConvergenceReport {
  int cycles = 0;
  std::vector<double> initial_residuals;  // one per right-hand side
  std::vector<double> final_residuals;
  std::vector<double> relative_residuals;
  bool converged = false;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, ConvergenceReport report)
      : Error(what), report_(std::move(report)) {}
  const ConvergenceReport& report() const { return report_; }

 private:
  ConvergenceReport report_;
};

class NewtonDiverged : public Error {
 public:
  using Error::Error;
};

struct ConfigIssue {
  int line = 0;  // 0 when the issue has no source location
  std::string message;
};

/// Collects every validation problem of a run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : Error(format(issues)), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  static std::string format(const std::vector<ConfigIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += "\n";
      out += issue.line > 0 ? "line " + std::to_string(issue.line) + ": " + issue.message
                            : issue.message;
    }
    return out;
  }
  std::vector<ConfigIssue> issues_;
};

}  // namespace mmdwr
