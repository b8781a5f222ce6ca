#pragma once

#include <cmath>

namespace gasket {

/// Dimension constants of the Sierpinski gasket. All values are defined by
/// logarithm ratios and computed once in double precision.
struct FractalConstants {
    double d_h;             // Hausdorff dimension ln3/ln2
    double d_w;             // walk dimension ln5/ln2
    double spectral_ratio;  // d_h/d_w = ln3/ln5
    double critical_s;      // d_h/(2 d_w)
    double holder_gap;      // d_w - d_h
};

inline const FractalConstants& constants() {
    static const FractalConstants c = [] {
        FractalConstants k{};
        k.d_h = std::log(3.0) / std::log(2.0);
        k.d_w = std::log(5.0) / std::log(2.0);
        k.spectral_ratio = std::log(3.0) / std::log(5.0);
        k.critical_s = 0.5 * k.spectral_ratio;
        k.holder_gap = k.d_w - k.d_h;
        return k;
    }();
    return c;
}

/// Holder exponent of the pointwise field at parameter s > critical_s:
/// min(s*d_w - d_h/2, d_w - d_h).
inline double holder_exponent_for(double s) {
    const auto& c = constants();
    return std::min(s * c.d_w - 0.5 * c.d_h, c.holder_gap);
}

}  // namespace gasket
