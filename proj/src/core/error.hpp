#ifndef CSMAHS_CORE_ERROR_HPP
#define CSMAHS_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace csmahs {

// Error kinds mirror the status codes of the C API one-to-one.
enum class ErrorKind {
    invalid_argument,
    validation,
    no_root,
    solver,
    degenerate,
    io,
    internal
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace csmahs

#endif
