#pragma once

#include <stdexcept>
#include <string>

namespace sfwm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where a formula is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A mode label that cannot exist, e.g. an odd-parity l = 0 mode.
class InvalidMode : public Error {
public:
    using Error::Error;
};

/// The requested LP mode has no root of the characteristic equation,
/// i.e. the operating point is beyond cutoff.
class ModeNotGuided : public Error {
public:
    ModeNotGuided(int l, int m, double wavelength_nm);

    int l() const noexcept { return l_; }
    int m() const noexcept { return m_; }
    double wavelength_nm() const noexcept { return wavelength_nm_; }

private:
    int l_;
    int m_;
    double wavelength_nm_;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// No candidate process is compatible with an observed pair of peaks.
class AssignmentError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sfwm
