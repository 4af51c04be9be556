#pragma once

#include <stdexcept>
#include <string>

namespace dynamap {

// Bad or contradictory configuration values (config file, scene file, CLI).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// Malformed input data (truncated binary scan, bad pose line, count mismatch).
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string &what) : std::runtime_error(what) {}
};

// Filesystem failures (cannot open / write).
struct IoError : std::runtime_error {
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

// Sweeps fed to the pipeline out of index order.
struct OrderError : std::runtime_error {
    explicit OrderError(const std::string &what) : std::runtime_error(what) {}
};

// A sweep carries a non-finite or non-orthonormal pose.
struct PoseError : std::runtime_error {
    explicit PoseError(const std::string &what) : std::runtime_error(what) {}
};

// Evaluation input is incomplete (e.g. a point without a resolved verdict).
struct InputError : std::runtime_error {
    explicit InputError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace dynamap
