#pragma once

namespace trobust {

// log Gamma(x) for x > 0 (Lanczos approximation, ~1e-13 relative accuracy).
// Throws DomainError for non-positive or non-finite arguments.
double logGamma(double x);

// psi(x) = d/dx log Gamma(x) for x > 0.
double digamma(double x);

// psi'(x) for x > 0.
double trigamma(double x);

// psi'(x) - psi'(x + 1/2), computed without catastrophic cancellation.
// For large x the direct difference of trigamma values loses essentially all
// significant digits (the gap decays like 1/(2x^2) while each term is O(1/x));
// this routine keeps full relative accuracy across the whole positive axis.
double trigammaHalfGap(double x);

}  // namespace trobust
