// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qgeom {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed specs, out-of-domain parameters, unknown names.
/// The CLI maps this family to exit status 2.
class InputError : public Error {
  public:
    using Error::Error;
};

/// A numerical contract was violated (broken model, singular matrix where a
/// bound needs an inverse, spectrum outside its admissible range).
/// The CLI maps this family to exit status 3.
class NumericalError : public Error {
  public:
    using Error::Error;
};

class DimensionError : public InputError {
  public:
    using InputError::InputError;
};

class UnsupportedSpaceError : public InputError {
  public:
    using InputError::InputError;
};

class DomainError : public InputError {
  public:
    using InputError::InputError;
};

class StepError : public InputError {
  public:
    using InputError::InputError;
};

class SpecError : public InputError {
  public:
    using InputError::InputError;
};

class ModelDefinitionError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class NormalizationError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class MeasurementDefinitionError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class RankDeficiencyError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class SpectralConsistencyError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class RefineDiscretizationError : public NumericalError {
  public:
    RefineDiscretizationError(const std::string& what, std::size_t segment)
        : NumericalError(what), segment_(segment) {}
    [[nodiscard]] std::size_t segment() const noexcept { return segment_; }

  private:
    std::size_t segment_;
};

class UndefinedRelativePhaseError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class InconclusiveError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class SingularSupportError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class SampleSizeError : public InputError {
  public:
    using InputError::InputError;
};

class NonOrthonormalError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Raised when two vectors that must have a real overlap do not.
class NonRealOverlapError : public NumericalError {
  public:
    NonRealOverlapError(const std::string& what, std::size_t first, std::size_t second,
                        double imag_part)
        : NumericalError(what), first_(first), second_(second), imag_(imag_part) {}

    [[nodiscard]] std::size_t first() const noexcept { return first_; }
    [[nodiscard]] std::size_t second() const noexcept { return second_; }
    [[nodiscard]] double imag_part() const noexcept { return imag_; }

  private:
    std::size_t first_;
    std::size_t second_;
    double imag_;
};

}  // namespace qgeom
