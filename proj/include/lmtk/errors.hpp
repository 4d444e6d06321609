#pragma once

#include <stdexcept>
#include <string>

namespace lmtk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SentinelCollision : Error {
    using Error::Error;
};
struct DocumentTooLarge : Error {
    using Error::Error;
};
struct InvalidUtf8 : Error {
    using Error::Error;
};
struct InvalidK : Error {
    using Error::Error;
};
struct EmptyBoards : Error {
    using Error::Error;
};
struct CorruptCheckpoint : Error {
    using Error::Error;
};
struct DuplicateSurface : Error {
    using Error::Error;
};
struct UnknownId : Error {
    using Error::Error;
};
struct DegenerateDistribution : Error {
    using Error::Error;
};
struct EmptyCorpus : Error {
    using Error::Error;
};

} // namespace lmtk
