#pragma once

#include "anisolab/field.hpp"
#include "anisolab/ops.hpp"

namespace anisolab {

/// Symmetric force tensor f_{k,l} = f_{l,k}, 1 <= k, l <= 3.  Only the upper
/// triangle is stored, so symmetry holds bit-exactly by construction.
struct ForceTensor {
    GridSpec grid;
    SpectralField e11, e12, e13, e22, e23, e33;

    ForceTensor() = default;
    explicit ForceTensor(const GridSpec& g)
        : grid(g), e11(g), e12(g), e13(g), e22(g), e23(g), e33(g) {}

    /// k, l in {1, 2, 3}; (k, l) and (l, k) alias the same field.
    SpectralField& entry(int k, int l);
    const SpectralField& entry(int k, int l) const;
};

/// Relative divergence residual ||d1 u1 + d2 u2 + d3 u3||_2 / max(||grad u||_2, eps).
double check_div(const VectorField& u);

/// Relative boundary residual ||u(., 0)||_2 / max(||u||_2, eps).
double check_bc(const VectorField& u);

/// Unforced anisotropic Stokes semigroup e^{-tA}:
///   u3(t)  = U e^{t Lap_h} (u03 - S . u0h)
///   uh(t)  = e^{t Lap_h} (u0h + S u03) - S u3(t)
/// U is realized per mode as the banded solve of its defining ODE
/// (d/dx3 + b) v = b g, v(0) = 0, discretized with the same finite-difference
/// d/dx3 used by check_div.  For divergence-free boundary-zero data this
/// makes the discrete divergence of the output vanish identically and the
/// t = 0 identity and semigroup law hold exactly.
///
/// Throws if u0 violates div u0 = 0 or u0|_{x3=0} = 0 beyond 1e-8 (relative);
/// the exception message carries the measured residuals.
VectorField stokes_evolve(const VectorField& u0, double t);

/// One step of the forced linear problem with the force frozen on [0, dt]
/// (exponential-Euler): every Duhamel integral collapses to the heat_phi1
/// multiplier.  Assembles the full solution formula:
///   u3:  semigroup term
///        - V+ Phi[sum_{l,m<=2} d_l S_m f_{lm}]
///        - (V- + T) Phi[|grad_h| f_33]
///        + (W - 1 - T) Phi[sum_l d_l f_{3l}]
///        + harmonic lift of the boundary trace,
///   uk:  semigroup term
///        + Phi[sum_m d_m f_{km}]
///        + W+ Phi[d_k sum_{l,m} S_l S_m f_{lm}]
///        - S_k (V - T) Phi[sum_l d_l f_{3l}]
///        - (1 - T - W-) Phi[d_k f_33]
///        - S_k (harmonic lift of the boundary trace),
/// where Phi = dt * phi1(dt |xi_h|^2).  The two harmonic-lift terms exist to
/// cancel the boundary trace of the interior terms; they are evaluated as the
/// lift of the assembled discrete trace, which is the same operator in the
/// continuum limit and makes u(., 0) = 0 exact on the grid.  The horizontal
/// components' curl-free part is then rebuilt from d3(u3) so the discrete
/// divergence vanishes identically.
VectorField stokes_forced_step(const VectorField& u0, const ForceTensor& f,
                               double dt);

/// Solves the banded system A x = rhs by Givens QR (stable without pivoting).
/// Row i holds coefficients for columns j in [i - kl, i + ku]; entries are
/// addressed as a[i * (kl + ku + 1) + (j - i + kl)].
std::vector<cplx> banded_solve(int n, int kl, int ku, std::vector<cplx> a,
                               std::vector<cplx> rhs);

}  // namespace anisolab
