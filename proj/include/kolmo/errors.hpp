#pragma once

#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kolmo {

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid sizes, out-of-range arguments, empty families.
class ParameterError : public Error
{
public:
    using Error::Error;
};

/// A point outside the domain of a kernel, map or grid.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Non-finite values met during evaluation.
class NumericError : public Error
{
public:
    explicit NumericError(const std::string &what) : Error(what) {}

    NumericError(const std::string &what, std::complex<double> node)
        : Error(with_node(what, node)), node_(node), has_node_(true)
    {
    }

    std::complex<double> node() const { return node_; }
    bool has_node() const { return has_node_; }

private:
    static std::string with_node(const std::string &what, std::complex<double> node)
    {
        std::ostringstream os;
        os.precision(17);
        os << what << " at node (" << node.real() << ", " << node.imag() << ")";
        return os.str();
    }

    std::complex<double> node_{};
    bool has_node_ = false;
};

/// A radius or frequency cut outside the sampled window.
class WindowError : public Error
{
public:
    using Error::Error;
};

/// An input fails a checked mathematical precondition (e.g. band limitation).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// The grid is too coarse to resolve the requested quantity.
class ResolutionError : public Error
{
public:
    using Error::Error;
};

/// A search over a schedule ended without reaching its threshold.
class InconclusiveError : public Error
{
public:
    using Error::Error;
};

/// Symbol-expression syntax error; offset is a 0-based character position.
class ParseError : public Error
{
public:
    ParseError(const std::string &what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

} // namespace kolmo
