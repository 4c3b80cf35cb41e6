// Cylindrical Bessel functions J_k evaluated for a whole range of orders at
// once.  The propagation kernel is expanded on J_k(nu*t), so we routinely need
// orders 0..K-1 (K up to a few hundred) at a single argument; Miller's
// downward recurrence delivers all of them in one sweep and stays stable for
// k > x where upward recurrence blows up.
#pragma once

#include <vector>

namespace hseom {

// J_0(x) .. J_kmax(x) for x >= 0, accurate to ~1e-14 absolute.
std::vector<double> bessel_j_array(double x, int kmax);

// Single order, convenience wrapper.
double bessel_j(int k, double x);

} // namespace hseom
