#pragma once

#include <stdexcept>
#include <string>

namespace tb {

// Failure categories surfaced to callers and mapped to CLI exit codes.
// validation/shape/parse/io/scheduling/hypergraph/infeasible are caller
// mistakes or unusable inputs; capacity/contract mean a documented resource
// cap or API precondition was exceeded.
enum class ErrorKind {
    shape,
    validation,
    capacity,
    contract,
    scheduling,
    hypergraph,
    infeasible,
    parse,
    io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

inline void require(bool condition, ErrorKind kind, const std::string& detail) {
    if (!condition) fail(kind, detail);
}

}  // namespace tb
