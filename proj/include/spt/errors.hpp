#ifndef SPT_ERRORS_HPP
#define SPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Registry miss; carries the offending identifier.
struct UnknownMaterialError : Error {
    explicit UnknownMaterialError(const std::string& name)
        : Error("unknown material: '" + name + "'"), material(name) {}
    std::string material;
};

// Device-file / config-file violation with location.
struct ParseError : Error {
    ParseError(int line_no, const std::string& field, const std::string& message)
        : Error("line " + std::to_string(line_no) + ", field '" + field + "': " + message),
          line(line_no), field(field) {}
    int line;
    std::string field;
};

struct ConfigError : Error {
    using Error::Error;
};

struct GridTooCoarseError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct NoBoundStateError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace spt

#endif
