#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdsconv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field construction / arithmetic
struct BadDegree : Error { using Error::Error; };
struct NotPrimitive : Error { using Error::Error; };
struct ZeroInverse : Error { using Error::Error; };
struct LogOfZero : Error { using Error::Error; };

// code model / file format
struct RowLengthMismatch : Error { using Error::Error; };
struct LogOutOfRange : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line(line), column(column) {}
    std::size_t line;
    std::size_t column;
};

// minor enumeration / search
struct SizeOverflow : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };

// transforms / constructions
struct ZeroScalar : Error { using Error::Error; };
struct CannotShortenRateHalf : Error { using Error::Error; };
struct DegreeTooSmall : Error { using Error::Error; };
struct DistanceTooSmall : Error { using Error::Error; };
struct BadConstant : Error { using Error::Error; };
struct BadBeta : Error { using Error::Error; };

}  // namespace mdsconv
