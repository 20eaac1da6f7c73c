#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nvnmr {

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input violates a documented type invariant or precondition.
/// `field` names the offending field ("BathConfig.n_pairs", ...).
class ValidationError : public Error {
  public:
    ValidationError(std::string field, const std::string& msg)
        : Error(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

/// A fit was rejected before optimization (no dominant peak, non-decaying
/// envelope, all points censored, ...).
class FitRejectedError : public Error {
  public:
    using Error::Error;
};

/// Optimizer failed to converge; carries the last iterate for diagnostics.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& msg, std::vector<double> last_params)
        : Error(msg), last_params_(std::move(last_params)) {}
    const std::vector<double>& last_params() const { return last_params_; }

  private:
    std::vector<double> last_params_;
};

/// A mapping has zero or multiple valid pre-images; lists the candidates.
class AmbiguityError : public Error {
  public:
    AmbiguityError(const std::string& msg, std::vector<double> candidates)
        : Error(msg), candidates_(std::move(candidates)) {}
    const std::vector<double>& candidates() const { return candidates_; }

  private:
    std::vector<double> candidates_;
};

/// Input is structurally valid but carries no usable information
/// (e.g. autocorrelation of an all-zero trace).
class DegenerateInputError : public Error {
  public:
    using Error::Error;
};

/// File / stream problems.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace nvnmr
