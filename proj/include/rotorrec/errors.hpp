#ifndef ROTORREC_ERRORS_HPP
#define ROTORREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rotorrec {

/// Base class for all toolkit errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad config value, malformed file, violated precondition.
struct validation_error : error {
    using error::error;
};

/// Grid geometry does not satisfy an alignment requirement (e.g. 1/drho is
/// not an integer, so momentum shifts by p0 would not land on bins).
struct alignment_error : error {
    using error::error;
};

/// Two states that must live on the same grid do not.
struct grid_mismatch_error : error {
    using error::error;
};

/// Probability mass reached the edge of the momentum window, or a shift
/// pushed significant mass off-grid. Results past this point would alias.
struct leakage_error : error {
    using error::error;
};

/// Self-interference inversion: the reference density at the chosen offset
/// vanishes, so the diagonal formula cannot be normalized.
struct origin_vanishes_error : error {
    using error::error;
};

/// Reconstruction produced no valid bins.
struct empty_mask_error : error {
    using error::error;
};

}  // namespace rotorrec

#endif
