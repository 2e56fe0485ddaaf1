#pragma once

#include <stdexcept>
#include <string>

namespace tiltquad {

/// Base for every error raised by the library. Carries the name of the
/// module that detected the problem so the CLI can report provenance.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// An argument outside the documented domain of an operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Inputs for which the model's stated approximations no longer hold
/// (e.g. the hover regime of the blade-element closed form).
class ModelValidityError : public Error {
public:
    using Error::Error;
};

/// A formula hit a singular point (zero denominator, singular matrix).
class SingularInputError : public Error {
public:
    using Error::Error;
};

}  // namespace tiltquad
