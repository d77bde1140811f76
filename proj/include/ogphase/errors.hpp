#pragma once

#include <stdexcept>
#include <string>

namespace ogphase {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct NotHermitian : Error {
    using Error::Error;
};
struct NotUnitary : Error {
    using Error::Error;
};
struct NotSpecialUnitary : Error {
    using Error::Error;
};
struct NotPositiveSemidefinite : Error {
    using Error::Error;
};
struct ConvergenceFailure : Error {
    using Error::Error;
};
struct DegenerateSpectrum : Error {
    using Error::Error;
};
struct NotIsospectral : Error {
    using Error::Error;
};
struct NotUnitarilyConnected : Error {
    using Error::Error;
};
struct NotParallelTransporting : Error {
    using Error::Error;
};
struct NotBlockStructured : Error {
    using Error::Error;
};
struct MultiCycleUnsupported : Error {
    using Error::Error;
};
struct SequenceNotMultiple : Error {
    using Error::Error;
};
struct IndeterminatePhase : Error {
    using Error::Error;
};
struct InsufficientSamples : Error {
    using Error::Error;
};

}  // namespace ogphase
