#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdlab {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Off-diagonal distance below which kernels switch to their confluent form.
inline constexpr double confluent_threshold = 1e-8;

// Error hierarchy. Every failure raised by the library derives from Error so
// that the CLI can map it onto an exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double partial_magnitude = 0.0)
        : Error(what), partial_magnitude_(partial_magnitude) {}
    double partial_magnitude() const noexcept { return partial_magnitude_; }

private:
    double partial_magnitude_;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// One evaluation of a two-variable kernel.
struct KernelSample {
    cplx z;
    cplx w;
    cplx value;
};

using KernelFn = std::function<cplx(cplx, cplx)>;
using ScaleFn = std::function<double(double)>;
using PointPairs = std::vector<std::pair<cplx, cplx>>;

}  // namespace cdlab
