#include "adiacross/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adiacross {

namespace {

constexpr int kMaxOrder = 64;
constexpr double kMaxArg = 50.0;
constexpr double kRescaleAbove = 1e250;

}  // namespace

// Miller's backward recurrence
//   J_{k-1}(x) = (2k/x) J_k(x) - J_{k+1}(x),
// started well above max(n, |x|) and normalized with J_0 + 2 sum_k J_{2k} = 1.
// Backward recurrence is the stable direction for every order once the start
// index sits past the turning point k ~ |x|.
double bessel_j(int n, double x) {
    if (n < 0 || n > kMaxOrder || !(std::abs(x) <= kMaxArg)) {
        throw std::domain_error("bessel_j: (n=" + std::to_string(n) + ", x=" +
                                std::to_string(x) + ") outside 0<=n<=64, |x|<=50");
    }
    if (x == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double ax = std::abs(x);
    const int top_guess = static_cast<int>(std::max<double>(n, ax)) + 40 +
                          static_cast<int>(std::sqrt(40.0 * std::max<double>(n, ax)));
    const int top = top_guess + (top_guess % 2);  // even start keeps the sum bookkeeping simple

    double j_above = 0.0;   // J_{k+1}
    double j_here = 1e-300; // J_k, arbitrary seed
    double wanted = 0.0;
    double norm = 0.0;
    for (int k = top; k > 0; --k) {
        const double j_below = (2.0 * k / ax) * j_here - j_above;
        j_above = j_here;
        j_here = j_below;  // now J_{k-1}
        if (k - 1 == n) {
            wanted = j_here;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) {
            norm += 2.0 * j_here;
        }
        if (std::abs(j_here) > kRescaleAbove) {
            j_here /= kRescaleAbove;
            j_above /= kRescaleAbove;
            wanted /= kRescaleAbove;
            norm /= kRescaleAbove;
        }
    }
    norm += j_here;  // J_0 term
    double value = wanted / norm;
    if (x < 0.0 && n % 2 == 1) {
        value = -value;
    }
    return value;
}

}  // namespace adiacross
