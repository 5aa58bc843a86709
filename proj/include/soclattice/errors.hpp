#pragma once

#include <stdexcept>
#include <string>

namespace soclattice {

// Every library failure derives from Error; kind() is the stable tag written
// into the CLI's error record.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what) : Error("out_of_range", what) {}
};

class IntegrationAccuracyError : public Error {
public:
    explicit IntegrationAccuracyError(const std::string& what)
        : Error("integration_accuracy", what) {}
};

class SpectralAccuracyError : public Error {
public:
    explicit SpectralAccuracyError(const std::string& what)
        : Error("spectral_accuracy", what) {}
};

class EffectiveModelInapplicable : public Error {
public:
    explicit EffectiveModelInapplicable(const std::string& what)
        : Error("effective_model_inapplicable", what) {}
};

class OutOfRegime : public Error {
public:
    explicit OutOfRegime(const std::string& what) : Error("out_of_regime", what) {}
};

class ResonanceSingularity : public Error {
public:
    explicit ResonanceSingularity(const std::string& what)
        : Error("resonance_singularity", what) {}
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("parse_error", "line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace soclattice
