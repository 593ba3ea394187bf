#pragma once

#include <stdexcept>
#include <string>

namespace dirout {

// Base class of every library error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteValue : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct TooFewCurves : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

// Pointwise outlyingness is infinite: zero spread in some projection
// direction with the query off the mass point. curve/time_index are -1
// when the failing location is unknown to the thrower.
struct InfiniteOutlyingness : Error {
    InfiniteOutlyingness(int curve_arg = -1, int time_arg = -1)
        : Error(curve_arg < 0
                    ? std::string("infinite outlyingness (degenerate spread)")
                    : "infinite outlyingness for curve " + std::to_string(curve_arg) +
                          " at time index " + std::to_string(time_arg)),
          curve(curve_arg),
          time_index(time_arg) {}

    int curve;
    int time_index;
};

struct SingularScatter : Error {
    using Error::Error;
};

struct InvalidDf : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

}  // namespace dirout
