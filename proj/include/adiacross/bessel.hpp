#pragma once

namespace adiacross {

// Bessel function of the first kind J_n(x) for 0 <= n <= 64 and |x| <= 50.
// Throws std::domain_error outside that range.
double bessel_j(int n, double x);

}  // namespace adiacross
