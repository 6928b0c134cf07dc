#ifndef PSDCOMP_ERRORS_HPP
#define PSDCOMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace psdcomp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct ZeroMatrix : Error {
    using Error::Error;
};
struct NotPsd : Error {
    using Error::Error;
};
struct NotLinearRule : Error {
    using Error::Error;
};
struct NotStructural : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct MissingVector : Error {
    using Error::Error;
};
struct MissingWord : Error {
    using Error::Error;
};
struct DegenerateLabels : Error {
    using Error::Error;
};
struct UnknownRule : Error {
    using Error::Error;
};

}  // namespace psdcomp

#endif
