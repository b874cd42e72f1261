#ifndef RLPC_ERRORS_HPP
#define RLPC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rlpc {

// Inversion of zero and similar algebraic domain violations.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Caller passed parameters outside the documented range.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularMatrixError : std::runtime_error {
    SingularMatrixError() : std::runtime_error("matrix is singular") {}
    using std::runtime_error::runtime_error;
};

struct NoSolutionError : std::runtime_error {
    NoSolutionError() : std::runtime_error("linear system is inconsistent") {}
    using std::runtime_error::runtime_error;
};

// No codeword within the decoding radius. Reported, never a wrong answer.
struct DecodingFailure : std::runtime_error {
    DecodingFailure() : std::runtime_error("no codeword within rank radius") {}
    using std::runtime_error::runtime_error;
};

struct InvalidCiphertext : std::runtime_error {
    InvalidCiphertext() : std::runtime_error("invalid ciphertext") {}
    using std::runtime_error::runtime_error;
};

// Malformed serialized data (truncated, overlong, bad magic or tag).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rlpc

#endif
