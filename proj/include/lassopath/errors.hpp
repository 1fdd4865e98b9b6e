#pragma once

#include <stdexcept>
#include <string>

namespace lassopath {

class LassoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A pivot of the active-set Gram factor fell below pivot_tol.
class SingularActiveSet : public LassoError {
public:
    using LassoError::LassoError;
};

class DegenerateTie : public LassoError {
public:
    using LassoError::LassoError;
};

class OutOfRange : public LassoError {
public:
    using LassoError::LassoError;
};

class TilingViolation : public LassoError {
public:
    using LassoError::LassoError;
};

class NoConvergence : public LassoError {
public:
    using LassoError::LassoError;
};

class ConstructionUnverified : public LassoError {
public:
    using LassoError::LassoError;
};

class DomainError : public LassoError {
public:
    using LassoError::LassoError;
};

class ZeroTarget : public LassoError {
public:
    using LassoError::LassoError;
};

class RankDeficient : public LassoError {
public:
    using LassoError::LassoError;
};

class BadMagic : public LassoError {
public:
    using LassoError::LassoError;
};

class TruncatedFile : public LassoError {
public:
    using LassoError::LassoError;
};

class FormatError : public LassoError {
public:
    using LassoError::LassoError;
};

}  // namespace lassopath
