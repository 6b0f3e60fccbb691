#pragma once

#include <cmath>
#include <type_traits>

namespace hsk::diff::special {

// Below this |x| the Langevin function and its derivatives are evaluated from
// their Maclaurin series; above it the closed forms are free of cancellation
// to well under the precision of T.
template <typename T>
constexpr T langevin_cutoff() {
    if constexpr (std::is_same_v<T, float>) {
        return T(0.5);
    } else {
        return T(0.05);
    }
}

template <typename T>
T sigmoid(T x) {
    if (x >= T(0)) {
        return T(1) / (T(1) + std::exp(-x));
    }
    const T e = std::exp(x);
    return e / (T(1) + e);
}

// coth(|x|) and csch^2(x) from e = exp(-2|x|); stable for all |x| > 0.
template <typename T>
void coth_csch2(T x, T& coth_abs, T& csch2) {
    const T e = std::exp(T(-2) * std::abs(x));
    const T one_minus = -std::expm1(T(-2) * std::abs(x));
    coth_abs = (T(1) + e) / one_minus;
    csch2 = T(4) * e / (one_minus * one_minus);
}

/// L(x) = coth(x) - 1/x
template <typename T>
T langevin(T x) {
    const T ax = std::abs(x);
    if (ax < langevin_cutoff<T>()) {
        const T x2 = x * x;
        // x/3 - x^3/45 + 2x^5/945 - x^7/4725 + 2x^9/93555 - 1382x^11/638512875
        return x * (T(1) / T(3) +
                    x2 * (T(-1) / T(45) +
                          x2 * (T(2) / T(945) +
                                x2 * (T(-1) / T(4725) +
                                      x2 * (T(2) / T(93555) + x2 * (T(-1382) / T(638512875)))))));
    }
    T coth_abs, csch2;
    coth_csch2(x, coth_abs, csch2);
    const T coth = x > T(0) ? coth_abs : -coth_abs;
    return coth - T(1) / x;
}

/// L'(x) = 1/x^2 - csch^2(x)
template <typename T>
T langevin_deriv(T x) {
    const T ax = std::abs(x);
    if (ax < langevin_cutoff<T>()) {
        const T x2 = x * x;
        // 1/3 - x^2/15 + 2x^4/189 - x^6/675 + 2x^8/10395 - 15202x^10/638512875
        return T(1) / T(3) +
               x2 * (T(-1) / T(15) +
                     x2 * (T(2) / T(189) +
                           x2 * (T(-1) / T(675) + x2 * (T(2) / T(10395) + x2 * (T(-15202) / T(638512875))))));
    }
    T coth_abs, csch2;
    coth_csch2(x, coth_abs, csch2);
    return T(1) / (x * x) - csch2;
}

/// L''(x) = -2/x^3 + 2 coth(x) csch^2(x)
template <typename T>
T langevin_deriv2(T x) {
    const T ax = std::abs(x);
    if (ax < langevin_cutoff<T>()) {
        const T x2 = x * x;
        // -2x/15 + 8x^3/189 - 6x^5/675 + 16x^7/10395 - 152020x^9/638512875
        return x * (T(-2) / T(15) +
                    x2 * (T(8) / T(189) +
                          x2 * (T(-6) / T(675) + x2 * (T(16) / T(10395) + x2 * (T(-152020) / T(638512875))))));
    }
    T coth_abs, csch2;
    coth_csch2(x, coth_abs, csch2);
    const T coth = x > T(0) ? coth_abs : -coth_abs;
    return T(-2) / (x * x * x) + T(2) * coth * csch2;
}

}  // namespace hsk::diff::special
