#pragma once

#include <stdexcept>
#include <string>

namespace qpipe {

// Post-selection on an outcome whose probability is below the 1e-12 floor
// separating impossible outcomes from floating-point dust.
class PostselectionError : public std::runtime_error {
public:
    explicit PostselectionError(const std::string& what) : std::runtime_error(what) {}
};

// Near-zero input vector where a norm appears in a denominator.
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

// Constant feature at scaler fit time.
class DegenerateFeatureError : public std::runtime_error {
public:
    DegenerateFeatureError(const std::string& what, int feature)
        : std::runtime_error(what), feature(feature) {}
    int feature;
};

// Training set for the classifier contains a single class.
class DegenerateLabelsError : public std::runtime_error {
public:
    explicit DegenerateLabelsError(const std::string& what) : std::runtime_error(what) {}
};

// Relative reconstruction error against a near-zero original component.
class DegenerateDenominatorError : public std::runtime_error {
public:
    DegenerateDenominatorError(const std::string& what, std::size_t sample, std::size_t feature)
        : std::runtime_error(what), sample(sample), feature(feature) {}
    std::size_t sample;
    std::size_t feature;
};

// Malformed CSV content; `line` is 1-based within the file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line) : std::runtime_error(what), line(line) {}
    long line;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes used by the CLI.
enum class ExitCode : int {
    kOk = 0,
    kConfig = 2,
    kData = 3,
    kNumerical = 4,
};

// Wraps a failure with the pipeline stage it occurred in.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& what, ExitCode code)
        : std::runtime_error(stage + ": " + what), stage(stage), code(code) {}
    std::string stage;
    ExitCode code;
};

}  // namespace qpipe
