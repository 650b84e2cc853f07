#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tuq {

/// Bad user input: malformed config, out-of-domain argument, file that fails
/// to parse. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Parse failure with file position context.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& file, long row, long col, const std::string& what)
        : ValidationError(file + ": row " + std::to_string(row) + ", column " +
                          std::to_string(col) + ": " + what),
          row(row),
          col(col) {}
    long row;
    long col;
};

/// A pipeline stage was asked to read an artifact that a prior stage has not
/// produced yet. Maps to CLI exit code 2.
class MissingArtifactError : public std::runtime_error {
public:
    explicit MissingArtifactError(const std::string& path)
        : std::runtime_error("missing required artifact: " + path), path(path) {}
    std::string path;
};

/// Training loss became non-finite. Carries the last epoch that still had a
/// finite loss (-1 if the very first epoch blew up) and the history up to it.
class TrainingDivergedError : public std::runtime_error {
public:
    TrainingDivergedError(int last_finite_epoch, std::vector<double> history)
        : std::runtime_error("training diverged: loss became non-finite after epoch " +
                             std::to_string(last_finite_epoch)),
          last_finite_epoch(last_finite_epoch),
          loss_history(std::move(history)) {}
    int last_finite_epoch;
    std::vector<double> loss_history;
};

}  // namespace tuq
