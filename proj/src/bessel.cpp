#include "hseom/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hseom {

std::vector<double> bessel_j_array(double x, int kmax) {
    if (kmax < 0) throw std::invalid_argument("bessel_j_array: kmax < 0");
    if (x < 0.0) throw std::invalid_argument("bessel_j_array: x < 0");

    std::vector<double> out(static_cast<size_t>(kmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }

    // Start the downward recurrence well above both the largest requested
    // order and the turning point k ~ x, then normalize with the identity
    // J_0 + 2*sum_{m>=1} J_{2m} = 1.
    const int turning = static_cast<int>(std::ceil(x));
    int start = std::max(kmax, turning);
    start += 16 + static_cast<int>(2.0 * std::sqrt(static_cast<double>(start)));
    if (start % 2 != 0) ++start;

    double jp = 0.0;  // J_{m+1}
    double jc = 1e-32; // J_m, arbitrary seed
    double norm = 0.0; // accumulates J_0 + 2 sum J_{2m}
    for (int m = start; m >= 0; --m) {
        const double jm = (2.0 * (m + 1) / x) * jc - jp; // J_m from J_{m+1}, J_{m+2}
        jp = jc;
        jc = jm;
        // jc now holds J_m
        if (m <= kmax) out[static_cast<size_t>(m)] = jc;
        if (m % 2 == 0) norm += (m == 0) ? jc : 2.0 * jc;
        // Rescale if values grow too large to avoid overflow.
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
    }
    for (auto& v : out) v /= norm;
    return out;
}

double bessel_j(int k, double x) {
    return bessel_j_array(x, k)[static_cast<size_t>(k)];
}

} // namespace hseom
