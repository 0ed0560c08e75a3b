#pragma once

#include <stdexcept>
#include <string>

namespace fspde {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (poles, b >= a+1, z > 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical method could not reach its target accuracy.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A grid is too coarse for the requested object.
class ResolutionError : public Error {
public:
    ResolutionError(const std::string& what, int required_modes)
        : Error(what), required_modes_(required_modes) {}
    int required_modes() const noexcept { return required_modes_; }

private:
    int required_modes_;
};

/// Exponent tuple or other model parameters violate a structural inequality.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Array lengths or grid shapes do not fit together.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Config document failed validation. `pointer` is the JSON pointer of the offending key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& pointer, const std::string& what)
        : Error(pointer + ": " + what), pointer_(pointer) {}
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace fspde
