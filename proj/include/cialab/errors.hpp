#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cialab {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

// Broken FU-A fragment sequence; `index` is the first offending fragment.
class MalformedStreamError : public Error {
public:
    MalformedStreamError(std::size_t index, const std::string& what)
        : Error("fragment " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class UnknownDestinationError : public Error {
public:
    using Error::Error;
};

// Malformed text input; `line` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    ParseError(const std::string& path, std::size_t line)
        : ParseError(path, line, "malformed line") {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    InsufficientDataError(std::size_t required, std::size_t actual)
        : Error("insufficient data: required " + std::to_string(required) +
                " packets, have " + std::to_string(actual)),
          required_(required),
          actual_(actual) {}
    std::size_t required() const { return required_; }
    std::size_t actual() const { return actual_; }

private:
    std::size_t required_;
    std::size_t actual_;
};

class DegenerateScaleError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class TrainingDivergedError : public Error {
public:
    TrainingDivergedError(std::size_t epoch, const std::string& what)
        : Error("training diverged at epoch " + std::to_string(epoch) + ": " + what),
          epoch_(epoch) {}
    explicit TrainingDivergedError(std::size_t epoch)
        : TrainingDivergedError(epoch, "loss is not finite") {}
    std::size_t epoch() const { return epoch_; }

private:
    std::size_t epoch_;
};

class ModelFormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    explicit IoError(const std::string& path) : IoError(path, "i/o error") {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace cialab
