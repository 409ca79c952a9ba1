#pragma once

namespace starframes {

// Numerical thresholds shared across the library. Every check that compares
// floating-point residuals against a bound takes one of these (defaulted), so
// callers can tighten or loosen acceptance without touching the numerics.
struct Tolerances {
    double herm = 1e-10; // Hermitian-ness, scaled by max(1, ||a||_F) at the use site
    double psd  = 1e-10; // eigenvalue floor for positivity, relative to the operator norm
    double inv  = 1e-10; // smallest/largest singular-value ratio for invertibility
    double eq   = 1e-9;  // residual acceptance for operator identities, scaled by flat dim
};

} // namespace starframes
