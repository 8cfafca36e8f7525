// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_ERRORS_HPP
#define CURVED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curved {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class OutsideDomainError : public Error {
public:
    using Error::Error;
};

class SingularMetricError : public Error {
public:
    using Error::Error;
};

class SignatureError : public Error {
public:
    using Error::Error;
};

// Raised when a quantity (sectional curvature, pseudo-orthonormal frame)
// is requested on a plane or vector set where it is undefined; the
// message names the degeneracy class.
class DegeneratePlaneError : public Error {
public:
    using Error::Error;
};

// Raised when deterministic resampling fails to produce a usable random
// object (plane family, frame vector) within the attempt budget.
class SampleError : public Error {
public:
    using Error::Error;
};

} // namespace curved

#endif
