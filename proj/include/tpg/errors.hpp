#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace tpg {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Layout that does not fit the Hamiltonian, unknown mode label, invalid parameter.
class ConfigurationError : public Error {
  public:
    using Error::Error;
};

/// Caller violated a precondition (empty keep set, unsorted grid, ...).
class UsageError : public Error {
  public:
    using Error::Error;
};

/// Fock truncation is too small for the requested accuracy.
class TruncationError : public Error {
  public:
    TruncationError(const std::string &what, std::optional<int> required_cutoff = std::nullopt)
        : Error(what), required_cutoff_(required_cutoff) {}
    [[nodiscard]] std::optional<int> required_cutoff() const { return required_cutoff_; }

  private:
    std::optional<int> required_cutoff_;
};

class NumericalFailure : public Error {
  public:
    using Error::Error;
};

/// Input outside the mathematical domain (non-positive-definite or unphysical covariance).
class DomainError : public Error {
  public:
    using Error::Error;
};

class InvalidStateError : public Error {
  public:
    using Error::Error;
};

class ResolutionError : public Error {
  public:
    using Error::Error;
};

class UnderflowError : public Error {
  public:
    using Error::Error;
};

class DegenerateConditioningError : public Error {
  public:
    using Error::Error;
};

/// Snapshot or cache entry failed magic/version/checksum verification.
class CorruptDataError : public Error {
  public:
    using Error::Error;
};

} // namespace tpg
