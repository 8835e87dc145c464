#pragma once

#include <stdexcept>
#include <string>

namespace qualex {

/// Base of every error the library raises. Each family carries the process
/// exit code the CLI reports for it.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

class VcsError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

class RepositoryNotFound : public VcsError {
public:
    using VcsError::VcsError;
};

class BranchNotFound : public VcsError {
public:
    using VcsError::VcsError;
};

class VcsToolFailure : public VcsError {
public:
    VcsToolFailure(const std::string& what, std::string diagnostics)
        : VcsError(what + (diagnostics.empty() ? "" : ": " + diagnostics)),
          diagnostics_(std::move(diagnostics)) {}
    const std::string& diagnostics() const noexcept { return diagnostics_; }

private:
    std::string diagnostics_;
};

class StoreCorruption : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

class MissingMetrics : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 5; }
};

class UnknownProfile : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ProfileLacksCoupling : public Error {
public:
    using Error::Error;
};

class ParseFailure : public Error {
public:
    using Error::Error;
};

class UnknownMetric : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class EmptyMarks : public Error {
public:
    using Error::Error;
};

class CheckerProcessFailure : public Error {
public:
    using Error::Error;
};

class CheckerProtocolError : public Error {
public:
    CheckerProtocolError(const std::string& what, std::string payload)
        : Error(what), payload_(std::move(payload)) {}
    const std::string& payload() const noexcept { return payload_; }

private:
    std::string payload_;
};

} // namespace qualex
