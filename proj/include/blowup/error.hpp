#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid model, profile, grid or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A profile specification violates one of the structural hypotheses on phi.
class HypothesisError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Reading or writing an artifact failed; the message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class EmptyMask : public Error {
public:
    using Error::Error;
};

/// The exact nonlinear substep would blow up pointwise inside the step.
class ForwardStepBlowup : public Error {
public:
    ForwardStepBlowup(const std::string& msg, double max_amplitude)
        : Error(msg), max_amplitude_(max_amplitude) {}
    double max_amplitude() const { return max_amplitude_; }

private:
    double max_amplitude_;
};

class StepUnderflow : public Error {
public:
    StepUnderflow(const std::string& msg, double t) : Error(msg), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class DegenerateWindow : public Error {
public:
    using Error::Error;
};

class ResolutionInsufficient : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace blowup
