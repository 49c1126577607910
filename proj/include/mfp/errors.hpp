#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mfp {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller supplied a value outside an operation's domain.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Zero has no multiplicative inverse.
class NoInverseError : public Error {
public:
    using Error::Error;
};

/// A progression with step zero has no flip structure.
class DegenerateStepError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed. Reaching this is a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

/// Jaccard similarity of two empty sets.
class UndefinedSimilarityError : public Error {
public:
    using Error::Error;
};

/// No block index has a valid block in both fingerprints.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Two fingerprints were built with different parameters or seeds.
class IncompatibleError : public Error {
public:
    IncompatibleError(std::string field, const std::string &detail)
        : Error("incompatible fingerprints: " + field + " differs (" + detail + ")"), field_(std::move(field)) {
    }

    const std::string &field() const noexcept {
        return field_;
    }

private:
    std::string field_;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

enum class FormatErrorKind {
    bad_magic,
    version_mismatch,
    truncated,
    invariant_violation,
};

/// A serialized fingerprint could not be decoded.
class FormatError : public Error {
public:
    FormatError(FormatErrorKind kind, const std::string &what) : Error(what), kind_(kind) {
    }

    FormatErrorKind kind() const noexcept {
        return kind_;
    }

private:
    FormatErrorKind kind_;
};

} // namespace mfp
