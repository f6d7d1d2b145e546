#pragma once

#include <stdexcept>
#include <string>

namespace plexcomm {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (shape, symmetry, range, labels, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A supra-matrix row sums to zero, so the strength normalization
// S^{-1/2} W S^{-1/2} is undefined. Happens only at omega = 0 with a node
// isolated inside its layer.
class ZeroStrengthError : public Error {
public:
    ZeroStrengthError(const std::string& msg, long layer, long node)
        : Error(msg), layer_(layer), node_(node) {}

    long layer() const noexcept { return layer_; }
    long node() const noexcept { return node_; }

private:
    long layer_;
    long node_;
};

// Too few paired observations to estimate a correlation.
class InsufficientOverlapError : public Error {
public:
    using Error::Error;
};

// A series is constant on the paired observations; correlation is undefined.
class ConstantSeriesError : public Error {
public:
    using Error::Error;
};

// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace plexcomm
