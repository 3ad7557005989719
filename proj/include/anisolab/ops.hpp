#pragma once

#include "anisolab/field.hpp"

namespace anisolab {

/// Vertical integral kernels, all per horizontal mode with b = |xi_h|:
///   U f(x3)  = b * int_0^{x3} e^{-b (x3 - y)} f(y) dy
///   V+- f    = 1/2 int_0^inf b { sgn(x3-y) e^{-b|x3-y|} +- e^{-b(x3+y)} } f dy
///   W+- f    = 1/2 int_0^inf b ( e^{-b|x3-y|} +- e^{-b(x3+y)} ) f dy
///   T f      = int_0^inf b e^{-b(x3+y)} f dy
/// plus the combinations V = V+ + V-, W = W+ + W-.
enum class KernelKind { U, Vplus, Vminus, Wplus, Wminus, T, V, W };

/// Horizontal Fourier multipliers.
struct MultiplierSpec {
    enum class Kind {
        riesz_axis1,   ///< i xi_1 / |xi_h|
        riesz_axis2,   ///< i xi_2 / |xi_h|
        abs_grad_pow,  ///< |xi_h|^s
        heat,          ///< e^{-t |xi_h|^2}
        heat_phi1,     ///< (1 - e^{-t |xi_h|^2}) / |xi_h|^2
        poisson        ///< e^{-x3 |xi_h|}
    };
    Kind kind;
    double param = 0.0;  ///< s, t, or x3 depending on kind

    static MultiplierSpec riesz(int axis) {
        return {axis == 1 ? Kind::riesz_axis1 : Kind::riesz_axis2, 0.0};
    }
    static MultiplierSpec abs_grad(double s) { return {Kind::abs_grad_pow, s}; }
    static MultiplierSpec heat(double t) { return {Kind::heat, t}; }
    static MultiplierSpec heat_phi1(double t) { return {Kind::heat_phi1, t}; }
    static MultiplierSpec poisson(double x3) { return {Kind::poisson, x3}; }
};

/// Per-mode multiplication.  Zero-mode conventions: riesz and
/// abs_grad_pow(s > 0) map it to 0; heat and poisson act as identity;
/// heat_phi1 multiplies by t (the s -> 0 limit of (1 - e^{-t s}) / s).
/// abs_grad_pow(s < 0) throws if the mean mode carries a nonzero coefficient.
SpectralField apply_multiplier(const SpectralField& f, const MultiplierSpec& m);

/// Applies one vertical kernel mode by mode.  The quadrature integrates the
/// piecewise-linear vertical reconstruction of f exactly against the
/// exponential kernel weights, so it stays accurate for stiff (large b)
/// modes.  The zero mode maps to zero for every kind.
/// If tail_bound is non-null it receives max over modes of
/// max_y |f_mode(y)| * e^{-b Z}, an upper bound on the mass the truncated
/// integral cannot see.
SpectralField vertical_kernel_apply(const SpectralField& f, KernelKind k,
                                    double* tail_bound = nullptr);

/// One mode of a vertical kernel on an arbitrary uniform column of M nodes
/// with spacing h (column analog of vertical_kernel_apply; exposed for
/// high-resolution oracle checks).
std::vector<cplx> kernel_column(double b, const std::vector<cplx>& f, double h,
                                KernelKind k);

/// Harmonic lift of boundary data: mode b gets profile g_b * e^{-b x3}.
/// The input holds one value per horizontal mode (a single vertical slice,
/// stored at node 0 of a SpectralField on the same grid).
SpectralField poisson_boundary_ext(const SpectralField& boundary_slice);

}  // namespace anisolab
