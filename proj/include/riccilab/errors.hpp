#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riccilab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridError : public Error {
public:
    using Error::Error;
};

// Raised for any node with g_xx <= 0 or det g <= 1e-12. Never clamped.
class DegenerateMetric : public Error {
public:
    DegenerateMetric(int i, int j, double det)
        : Error("degenerate metric at node (" + std::to_string(i) + ", " + std::to_string(j) +
                "), det g = " + std::to_string(det)),
          i(i), j(j), det(det) {}
    int i;
    int j;
    double det;
};

class InvalidSubsolution : public Error {
public:
    using Error::Error;
};

class InvalidCycle : public Error {
public:
    using Error::Error;
};

class ProbeNotInfiniteOrder : public Error {
public:
    using Error::Error;
};

class IncompleteTrajectory : public Error {
public:
    using Error::Error;
};

class DomainTooSmall : public Error {
public:
    using Error::Error;
};

class OracleInapplicable : public Error {
public:
    using Error::Error;
};

class UnreliableOracle : public Error {
public:
    using Error::Error;
};

class RadiusBeyondBuffer : public Error {
public:
    using Error::Error;
};

class EmptyTrajectory : public Error {
public:
    using Error::Error;
};

// Bad command line or configuration; maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

class OutputError : public Error {
public:
    using Error::Error;
};

}  // namespace riccilab
