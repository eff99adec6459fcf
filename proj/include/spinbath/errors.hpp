#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad coupling description (m > N, duplicate sites, out-of-range sites).
struct InvalidCouplingError : Error {
    using Error::Error;
};

// Model outside the validity domain of the requested method
// (e.g. delta != 0 for the free-fermion path, odd N for the central spin).
struct UnsupportedModelError : Error {
    using Error::Error;
};

// Quadratic form violates the A = A^T / B = -B^T structure.
struct InvalidFormError : Error {
    using Error::Error;
};

// A fit was requested on a window with too few usable points.
struct InsufficientDataError : Error {
    using Error::Error;
};

// Perturbative estimate hit a (near-)degenerate denominator.
struct DegenerateEstimateError : Error {
    using Error::Error;
};

// Dense engine called beyond its size cap.
struct SizeLimitError : Error {
    using Error::Error;
};

// Bad site pair for a reduced density matrix.
struct InvalidSitesError : Error {
    using Error::Error;
};

// Non-physical density matrix handed to an entanglement measure.
struct InvalidStateError : Error {
    using Error::Error;
};

// Gate compiler asked for a layout it does not support.
struct UnsupportedLayoutError : Error {
    using Error::Error;
};

// Unexpected numerical breakdown (singular factorization, NaN).
struct NumericalFailureError : Error {
    using Error::Error;
};

// Configuration problem; `pointer` is a JSON-pointer-like path to the bad field.
struct ConfigError : Error {
    std::string pointer;
    ConfigError(const std::string& msg, std::string ptr = "")
        : Error(msg + (ptr.empty() ? "" : " (at " + ptr + ")")), pointer(std::move(ptr)) {}
};

}  // namespace spinbath
