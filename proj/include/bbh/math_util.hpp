// Scalar numeric helpers shared by the quadrature and solver code.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace bbh {

// Bose occupation 1/(e^x - 1) for x > 0. Underflows to 0 for large x.
inline double bose_occupancy(double x) {
    if (x > 708.0) return 0.0;
    return 1.0 / std::expm1(x);
}

// (e^x + 1) / (x (e^x - 1)) = coth(x/2)/x for x > 0.
// Series for small x avoids the 0/0 composite; large x tends to 1/x.
inline double coth_half_over_x(double x) {
    if (x < 1e-5) return 2.0 / (x * x) + 1.0 / 6.0 - x * x / 360.0;
    if (x > 708.0) return 1.0 / x;
    const double em = std::expm1(x);
    return (em + 2.0) / (x * em);
}

// x*ln(x) extended by its limit 0 at x = 0.
inline double xlnx(double x) {
    return x > 0.0 ? x * std::log(x) : 0.0;
}

// ln(1 - e^(-x)) for x > 0.
inline double log1m_exp_neg(double x) {
    return std::log1p(-std::exp(-x));
}

// Compensated (Kahan) accumulator; integrate() sums ~n^3 terms and the
// gradient tests need the last few digits.
class KahanSum {
public:
    void add(double value) {
        const double y = value - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline double kahan_total(std::span<const double> values) {
    KahanSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

}  // namespace bbh
