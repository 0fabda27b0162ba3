#pragma once

#include <stdexcept>
#include <string>

namespace lcsharp {

/// Adaptive quadrature could not reach the requested tolerance.
class quadrature_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A root finder was handed an interval without a sign change.
class bracket_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A small dense linear system was numerically singular.
class singular_system_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw std::domain_error(what);
}

} // namespace detail
} // namespace lcsharp
