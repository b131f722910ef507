#pragma once

#include <stdexcept>
#include <string>

namespace ncvem {

// Failure categories surfaced through the C API and the CLI exit status.
enum class ErrorCategory { Config, Mesh, Assembly, Solver, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

struct MeshError : Error {
  explicit MeshError(const std::string& what) : Error(ErrorCategory::Mesh, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

/// The augmented projector system of a cell could not be solved.
class ProjectorError : public Error {
 public:
  ProjectorError(int cell, const std::string& what)
      : Error(ErrorCategory::Assembly, what), cell_(cell) {}
  int cell() const noexcept { return cell_; }

 private:
  int cell_;
};

class SolverError : public Error {
 public:
  enum class Kind { NotPositiveDefinite, Breakdown, Residual };
  SolverError(Kind kind, const std::string& what)
      : Error(ErrorCategory::Solver, what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// The reference field of a relative error has a vanishing broken H2 seminorm.
struct ZeroReferenceNorm : Error {
  explicit ZeroReferenceNorm(const std::string& what) : Error(ErrorCategory::Solver, what) {}
};

}  // namespace ncvem
