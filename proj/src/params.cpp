#include "cavspin/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cavspin/errors.hpp"

namespace cavspin {

void SimParams::validate() const {
    if (!(gamma > 0.0)) throw InvalidParameter("gamma must be positive");
    if (!(gamma_nl > 0.0)) throw InvalidParameter("gamma_nl must be positive");
    if (!(gamma_nl_prime >= 0.0)) throw InvalidParameter("gamma_nl_prime must be non-negative");
    if (!(j >= 0.0)) throw InvalidParameter("j must be non-negative");
    if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
    if (!(duration > 0.0)) throw InvalidParameter("duration must be positive");
    if (!(noise_amp >= 0.0)) throw InvalidParameter("noise_amp must be non-negative");
    if (!std::isfinite(p)) throw InvalidParameter("p must be finite");
    const double fastest = std::max({p, gamma, 4.0 * j});
    if (!(dt * fastest < kStabilityGuard)) {
        throw InvalidParameter("dt too large: dt * max(p, gamma, 4j) = " +
                               std::to_string(dt * fastest) + " must stay below " +
                               std::to_string(kStabilityGuard));
    }
}

}  // namespace cavspin
