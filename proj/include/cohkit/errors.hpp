#pragma once
// Error types shared across the library. Each error carries an exit class
// so the CLI can map failures to process exit codes (2 usage, 3 data,
// 4 numeric) without inspecting the message text.

#include <stdexcept>
#include <string>

namespace cohkit {

enum class ErrorClass : int {
    usage = 2,
    data = 3,
    numeric = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what)
        : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

struct MalformedRow : Error {
    MalformedRow(std::size_t line, const std::string& reason)
        : Error(ErrorClass::data,
                "malformed row at line " + std::to_string(line) + ": " + reason),
          line_number(line), reason(reason) {}
    std::size_t line_number;
    std::string reason;
};

struct DuplicateFamily : Error {
    explicit DuplicateFamily(const std::string& family_id)
        : Error(ErrorClass::data,
                "family '" + family_id + "' repeated with conflicting fields") {}
};

struct NonPositiveEmployees : Error {
    NonPositiveEmployees(std::size_t line, const std::string& firm_id)
        : Error(ErrorClass::data, "firm '" + firm_id + "' at line " +
                                      std::to_string(line) +
                                      " has non-positive employee count"),
          line_number(line) {}
    std::size_t line_number;
};

struct InvalidLevel : Error {
    explicit InvalidLevel(int level)
        : Error(ErrorClass::usage,
                "IPC level must be in 1..4, got " + std::to_string(level)) {}
};

struct EmptyYear : Error {
    explicit EmptyYear(int year)
        : Error(ErrorClass::data,
                "no active families for year " + std::to_string(year)) {}
};

struct AllPruned : Error {
    AllPruned() : Error(ErrorClass::data,
                        "binarization threshold removed every cell") {}
};

struct UnmappedRow : Error {
    explicit UnmappedRow(const std::string& row_id)
        : Error(ErrorClass::data, "row '" + row_id + "' has no group mapping") {}
};

struct NotBinary : Error {
    NotBinary() : Error(ErrorClass::data, "operation requires a binary matrix") {}
};

struct ZeroDegree : Error {
    explicit ZeroDegree(const std::string& id)
        : Error(ErrorClass::data, "zero degree for '" + id + "'") {}
};

struct EmptyMatrix : Error {
    EmptyMatrix() : Error(ErrorClass::data, "matrix has no entries") {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what)
        : Error(ErrorClass::data, "dimension mismatch: " + what) {}
};

struct ZeroDiversification : Error {
    explicit ZeroDiversification(const std::string& firm_id)
        : Error(ErrorClass::data,
                "firm '" + firm_id + "' owns no technologies") {}
};

struct SingletonPortfolio : Error {
    explicit SingletonPortfolio(const std::string& firm_id)
        : Error(ErrorClass::data,
                "WAR/WARN/COH undefined for singleton portfolio of firm '" +
                    firm_id + "'") {}
};

struct UnsupportedFormat : Error {
    explicit UnsupportedFormat(const std::string& fmt)
        : Error(ErrorClass::usage, "unsupported export format '" + fmt + "'") {}
};

struct EmptyJoin : Error {
    EmptyJoin() : Error(ErrorClass::data,
                        "join of financials and coherence table is empty") {}
};

struct NonFinite : Error {
    explicit NonFinite(const std::string& column)
        : Error(ErrorClass::numeric,
                "non-finite values after transforming column '" + column + "'") {}
};

struct RankDeficient : Error {
    RankDeficient() : Error(ErrorClass::numeric,
                            "design matrix is rank deficient") {}
};

struct InsufficientData : Error {
    InsufficientData(std::size_t n, std::size_t k)
        : Error(ErrorClass::data, "need more than " + std::to_string(k + 1) +
                                      " rows, got " + std::to_string(n)) {}
};

struct TooFewPoints : Error {
    explicit TooFewPoints(const std::string& what)
        : Error(ErrorClass::data, "too few points: " + what) {}
};

struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& what)
        : Error(ErrorClass::usage, "invalid config: " + what) {}
};

}  // namespace cohkit
