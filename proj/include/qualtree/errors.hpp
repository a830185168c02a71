#pragma once

#include <stdexcept>
#include <string>

namespace qualtree {

/// A configured size bound was hit; distinct from any verdict.
class ResourceExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qualtree
