#ifndef OPLOG_ERRORS_HPP
#define OPLOG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oplog {

// Every failure mode of the library maps to one of these. The short name()
// is stable and is what run manifests and reports record.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& what, double pivot = 0.0)
        : Error("SingularMatrix", what), pivot_(pivot) {}
    // modulus of the offending pivot, relative threshold already applied by the caller
    double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what) : Error("NoConvergence", what) {}
};

class Overflow : public Error {
public:
    explicit Overflow(const std::string& what) : Error("Overflow", what) {}
    // blow-up location, filled when the overflow happened during a field sweep
    bool has_coordinate = false;
    double x0 = 0.0;
    double x1 = 0.0;
    std::size_t index0 = 0;
    std::size_t index1 = 0;
};

class CertificateFailed : public Error {
public:
    explicit CertificateFailed(const std::string& what, long grid_index = -1)
        : Error("CertificateFailed", what), grid_index_(grid_index) {}
    // first grid index at which the certificate stopped holding (-1: not a sweep)
    long grid_index() const noexcept { return grid_index_; }

private:
    long grid_index_;
};

class BackwardNotAvailable : public Error {
public:
    explicit BackwardNotAvailable(const std::string& what)
        : Error("BackwardNotAvailable", what) {}
};

class OutOfDomain : public Error {
public:
    explicit OutOfDomain(const std::string& what) : Error("OutOfDomain", what) {}
};

class IllPosedDirection : public Error {
public:
    explicit IllPosedDirection(const std::string& what)
        : Error("IllPosedDirection", what) {}
};

class GridMismatch : public Error {
public:
    explicit GridMismatch(const std::string& what) : Error("GridMismatch", what) {}
};

class UnsupportedDirection : public Error {
public:
    explicit UnsupportedDirection(const std::string& what)
        : Error("UnsupportedDirection", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

}  // namespace oplog

#endif
