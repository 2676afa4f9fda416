#pragma once

#include <stdexcept>
#include <string>

namespace kjl {

// Exit-code classes used by the CLI. Every library exception carries one so
// main() can map failures to documented process exit codes.
enum class ErrorClass : int {
    config = 2,    // bad sizes, ranks, flags, specs
    io = 3,        // missing or unwritable files
    parse = 4,     // malformed CSV input
    numeric = 5,   // degenerate data, non-convergence
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& msg) : std::runtime_error(msg), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

struct InvalidMatrix : Error {
    explicit InvalidMatrix(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(const std::string& msg) : Error(ErrorClass::numeric, msg) {}
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct InvalidRank : Error {
    explicit InvalidRank(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct InvalidSize : Error {
    explicit InvalidSize(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct InvalidK : Error {
    explicit InvalidK(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct EmptyData : Error {
    explicit EmptyData(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct DegenerateData : Error {
    explicit DegenerateData(const std::string& msg) : Error(ErrorClass::numeric, msg) {}
};

struct StateError : Error {
    explicit StateError(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

// Carries the rank actually achievable after eigenvalue floor filtering.
struct RankDeficient : Error {
    RankDeficient(const std::string& msg, int achievable)
        : Error(ErrorClass::numeric, msg), achievable_rank(achievable) {}
    int achievable_rank;
};

struct OracleTooSmall : Error {
    explicit OracleTooSmall(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct InsufficientDraws : Error {
    explicit InsufficientDraws(const std::string& msg) : Error(ErrorClass::config, msg) {}
};

struct ParseError : Error {
    ParseError(const std::string& msg, long line, long col = -1)
        : Error(ErrorClass::parse, msg), line(line), col(col) {}
    long line;
    long col;
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ErrorClass::io, msg) {}
};

}  // namespace kjl
