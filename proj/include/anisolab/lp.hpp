#pragma once

#include <array>
#include <limits>

#include "anisolab/field.hpp"

namespace anisolab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponents of a mixed / Chemin-Lerner norm and optional derivative request.
struct NormSpec {
    double p = 2.0;       ///< horizontal exponent, may be kInf
    double q = 2.0;       ///< vertical exponent, may be kInf
    double sigma = kInf;  ///< dyadic summation exponent (Chemin-Lerner only)
    int alpha_h = 0;      ///< horizontal derivative order (0 or 1)
    int alpha_3 = 0;      ///< vertical derivative order (0 or 1)
};

/// Dyadic Littlewood-Paley partition on the horizontal frequency plane.
/// chi is 1 on |xi| <= 3/4 and supported in |xi| < 4/3; the shell bump is
/// phi(xi) = chi(xi/2) - chi(xi), so sums over j telescope exactly.
struct DyadicPartition {
    int j_min = 0;
    int j_max = 0;
    int shells() const { return j_max - j_min + 1; }
};

/// Smoothed step built from exp(-1/x) glue: 0 for x <= 0, 1 for x >= 1.
double smoothstep(double x);

/// Radial low-pass bump: 1 on r <= 3/4, 0 from r >= 4/3.
double chi_bump(double r);

/// Radial shell bump phi(r) = chi(r/2) - chi(r); supported in [3/4, 8/3].
double phi_bump(double r);

/// j_min = floor(log2(2 pi / L)) - 1, j_max = ceil(log2(xi_max)) + 1.
/// Throws if fewer than 2 shells fit on the grid.
DyadicPartition build_partition(const GridSpec& grid);

/// Frequency localization Delta_j: multiply by phi(2^{-j} |xi_h|).
SpectralField dyadic_block(const SpectralField& f, const DyadicPartition& part,
                           int j);

/// Low-frequency remainder S_{j_min}: multiply by chi(2^{-j_min} |xi_h|).
/// Reported separately so unresolved low-frequency mass is detectable.
SpectralField low_remainder(const SpectralField& f, const DyadicPartition& part);

/// Anisotropic Lebesgue norm L^q_{x3} L^p_{xh}: inner horizontal L^p by
/// uniform Riemann quadrature (weight (L/N)^2), outer vertical L^q by
/// trapezoid on [0, Z]; p or q = kInf means grid maximum.
double mixed_norm(const SpectralField& f, double p, double q);

/// Same, on the pointwise Euclidean magnitude of the three components.
double mixed_norm(const VectorField& u, double p, double q);

/// Chemin-Lerner norm: l^sigma over j in [j_min, j_max] of the mixed norm of
/// each dyadic block (sigma = kInf gives the sup over shells).
double chemin_lerner_norm(const SpectralField& f, const DyadicPartition& part,
                          double p, double q, double sigma);
double chemin_lerner_norm(const VectorField& u, const DyadicPartition& part,
                          double p, double q, double sigma);

/// Mixed norms for every (p, q) pair in {1, 2, inf}^2, computed from a
/// single transform of the field.  Index: 3 * ip + iq with the exponents
/// ordered {1, 2, inf}.
std::array<double, 9> mixed_norm_table(const SpectralField& f);
std::array<double, 9> mixed_norm_table(const VectorField& u);

/// L^2 norm over the slab (Parseval horizontally, trapezoid vertically).
double l2_norm(const SpectralField& f);
double l2_norm(const VectorField& u);

/// X^s norm: H^s part (horizontal derivatives spectral, vertical by repeated
/// finite differences, all multi-indices of total order <= s) plus the
/// L^{1,1}_inf and L^{1,inf}_inf Chemin-Lerner norms of u and d3(u).
double xs_norm(const VectorField& u, int s, const DyadicPartition& part);

/// Bernstein ratio for a shell-supported field:
/// max over vertical slices of
///   ||d^alpha f||_{L^q(horizontal)} / (2^{j(|alpha| + 2(1/p - 1/q))}
///                                      ||f||_{L^p(horizontal)}).
/// alpha = (a1, a2) is a horizontal derivative multi-index.
/// Throws if f has mass outside the shell's support annulus.
double verify_bernstein(const SpectralField& f, const DyadicPartition& part,
                        int j, int a1, int a2, double p, double q);

}  // namespace anisolab
