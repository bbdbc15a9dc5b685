#pragma once

#include <stdexcept>
#include <string>

namespace cablevolt {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter values or malformed configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Cable data that does not define a two-port (zero length, zero shunt admittance).
class DegenerateCable : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Wind side injects no active power, so efficiency is undefined.
class ZeroFarmPower : public Error {
public:
    using Error::Error;
};

class NoPositivePower : public Error {
public:
    using Error::Error;
};

/// No operating point satisfies the constraints.
class Infeasible : public Error {
public:
    using Error::Error;
};

class EmptyCurve : public Error {
public:
    using Error::Error;
};

class NegativeWeight : public Error {
public:
    using Error::Error;
};

class PowerOutOfRange : public Error {
public:
    using Error::Error;
};

class UnreachableTarget : public Error {
public:
    using Error::Error;
};

}  // namespace cablevolt
