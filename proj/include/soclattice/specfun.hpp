#pragma once

namespace soclattice {

/// Bessel function of the first kind J_order(x) for integer order.
///
/// Ascending power series for |x| < 12, normalized backward (Miller)
/// recurrence otherwise. Absolute accuracy is better than 1e-12 for
/// |order| <= 200 and |x| <= 50. Negative orders use J_{-k} = (-1)^k J_k.
double bessel_j(int order, double x);

struct BesselZeroRequest {
    int order = 0;  // 0 or 1
    int index = 1;  // k-th positive zero, 1-based
};

/// k-th positive zero of J_order for order 0 or 1 and index 1..15.
/// Throws OutOfRange for anything else.
double bessel_zero(BesselZeroRequest req);

inline constexpr int kMaxBesselZeroIndex = 15;

}  // namespace soclattice
