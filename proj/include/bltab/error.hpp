#pragma once

#include <stdexcept>
#include <string>

namespace bltab {

// A broken internal invariant (soundness bug), as opposed to bad input or an
// inconclusive backend. The CLI maps this to exit code 70.
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bltab
