#ifndef EXPOLY_ERRORS_HPP
#define EXPOLY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace expoly {

// Exit-code taxonomy shared by the library and the CLI.
// 0 ok, 2 parse, 3 coverage, 4 multiplicity bound, 5 clustering, 6 solve.
enum class ErrorCode : int {
    parse = 2,
    coverage = 3,
    mult_bound = 4,
    clustering = 5,
    solve = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(ErrorCode::parse, what) {}
};

struct CoverageError : Error {
    explicit CoverageError(const std::string& what) : Error(ErrorCode::coverage, what) {}
};

struct MultBoundError : Error {
    explicit MultBoundError(const std::string& what) : Error(ErrorCode::mult_bound, what) {}
};

struct ClusterError : Error {
    explicit ClusterError(const std::string& what) : Error(ErrorCode::clustering, what) {}
};

struct SolveError : Error {
    explicit SolveError(const std::string& what) : Error(ErrorCode::solve, what) {}
};

} // namespace expoly

#endif
