// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace macrofacet {

// Base of every error raised by the library. The CLI maps subclasses onto
// process exit codes (see tools/macrofacet_main.cpp).
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (var <= 0, R
// outside [0,1], az <= 0 for the generalized NDF, ...).
class ParameterDomainError : public Error {
  public:
    using Error::Error;
};

// Generalized Smith Lambda evaluated at an exactly grazing direction.
class GrazingSingularityError : public ParameterDomainError {
  public:
    using ParameterDomainError::ParameterDomainError;
};

// Projected area of the visible microflakes is (numerically) zero.
class DegenerateVisibilityError : public ParameterDomainError {
  public:
    using ParameterDomainError::ParameterDomainError;
};

// Geometry the closed-form path cannot handle (horizontal planar rays).
class UnsupportedGeometryError : public ParameterDomainError {
  public:
    using ParameterDomainError::ParameterDomainError;
};

// Quadrature non-convergence, sphere-tracing iteration caps, NaN radiance.
class NumericFailure : public Error {
  public:
    using Error::Error;
};

// A sampled extinction exceeded the majorant it was drawn under.
class ConsistencyError : public NumericFailure {
  public:
    using NumericFailure::NumericFailure;
};

// Invalid configuration: unknown keys, conflicting keys, caps exceeded.
class ConfigError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace macrofacet
