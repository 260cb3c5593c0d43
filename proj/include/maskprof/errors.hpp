#pragma once

#include <stdexcept>
#include <string>

namespace maskprof {

// File or manifest could not be read.
struct LoadError : std::runtime_error {
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

// Data violates a structural invariant (dimension mismatch, empty mask, ...).
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration (flags, ablation specs, generator configs).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Prediction/ground-truth sets that cannot be evaluated together.
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace maskprof
