#include "soclattice/specfun.hpp"

#include "soclattice/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace soclattice {

namespace {

constexpr double kSeriesLimit = 12.0;
constexpr int kMaxOrder = 200;

double series_j(int n, double x) {
    // n >= 0, 0 < x < kSeriesLimit
    const double half = 0.5 * x;
    const double q = half * half;
    double term = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
    double sum = term;
    for (int k = 0; k < 500; ++k) {
        term *= -q / ((k + 1.0) * (k + 1.0 + n));
        sum += term;
        if (k > half && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

double miller_j(int n, double x) {
    // n >= 0, x >= kSeriesLimit
    const int reach = std::max(n, static_cast<int>(x));
    const int start = 2 * ((reach + 40 + static_cast<int>(std::sqrt(40.0 * reach))) / 2);
    const double two_over_x = 2.0 / x;
    double above = 0.0;
    double current = 1e-30;
    double result = 0.0;
    double even_sum = 0.0;
    for (int k = start; k > 0; --k) {
        const double below = k * two_over_x * current - above;
        above = current;
        current = below;
        if (std::abs(current) > 1e200) {
            current *= 1e-200;
            above *= 1e-200;
            result *= 1e-200;
            even_sum *= 1e-200;
        }
        // current now holds the unnormalized J_{k-1}
        if (k - 1 == n) result = current;
        if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += current;
    }
    const double norm = current + 2.0 * even_sum;
    return result / norm;
}

}  // namespace

double bessel_j(int order, double x) {
    if (!std::isfinite(x)) throw InvalidArgument("bessel_j: non-finite argument");
    if (std::abs(order) > kMaxOrder)
        throw InvalidArgument("bessel_j: |order| > " + std::to_string(kMaxOrder));

    double sign = 1.0;
    int n = order;
    if (n < 0) {
        n = -n;
        if (n % 2 != 0) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2 != 0) sign = -sign;
    }
    if (x == 0.0) return n == 0 ? sign : 0.0;
    const double value = x < kSeriesLimit ? series_j(n, x) : miller_j(n, x);
    return sign * value;
}

double bessel_zero(BesselZeroRequest req) {
    if (req.order != 0 && req.order != 1)
        throw OutOfRange("bessel_zero: only orders 0 and 1 are supported");
    if (req.index < 1 || req.index > kMaxBesselZeroIndex)
        throw OutOfRange("bessel_zero: index must lie in [1, " +
                         std::to_string(kMaxBesselZeroIndex) + "]");

    // McMahon's leading term; consecutive zeros are ~pi apart, so a +-0.6
    // window holds exactly one of them.
    const double guess = (req.index + 0.5 * req.order - 0.25) * std::numbers::pi;
    double lo = guess - 0.6;
    double hi = guess + 0.6;
    double f_lo = bessel_j(req.order, lo);
    double f_hi = bessel_j(req.order, hi);
    if (f_lo * f_hi > 0.0) throw OutOfRange("bessel_zero: failed to bracket zero");

    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = bessel_j(req.order, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    // secant refinement from the bracket ends
    double x0 = lo, f0 = f_lo;
    double x1 = hi, f1 = f_hi;
    for (int it = 0; it < 50 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = bessel_j(req.order, x1);
        if (std::abs(x1 - x0) < 1e-13) break;
    }
    return x1;
}

}  // namespace soclattice
