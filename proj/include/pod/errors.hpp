#pragma once

#include <stdexcept>
#include <string>

namespace pod {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke a precondition (length mismatch, invalid state, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

class EmptyDataset : public Error {
public:
    EmptyDataset() : Error("dataset has no rows") {}
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace pod
