#ifndef LGP_DEFS_HPP
#define LGP_DEFS_HPP

#include <stdexcept>
#include <string>

namespace lgp {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// thrown when an input violates a documented precondition
struct input_error : error {
    using error::error;
};

// thrown when a numeric certification cannot be completed at the configured depth
struct certification_error : error {
    using error::error;
};

} // namespace lgp

#endif
