#pragma once

#include <cstdint>
#include <string>

#include "anisolab/field.hpp"

namespace anisolab {

enum class IcProfile { gaussian_bump, shear_roll };

IcProfile parse_ic_profile(const std::string& name);

/// Divergence-free, boundary-zero initial data.
///
/// gaussian_bump: a coherent bump centered in the box.  Per horizontal mode
/// with b = |xi_h| and spectral envelope env(b) = exp(-w^2 b^2 / 2):
///   u3_hat = amp * z1 * env * b * m_b(x3),
///     m_b(x3) = (1 - e^{-4 x3})^2 e^{-b x3}, normalized to unit max over the
///     vertical grid; the node-1 value is adjusted so the one-sided
///     finite-difference derivative vanishes at the boundary.
///   uh_hat = 10 * amp * z2 * env / b * (i xi_perp) * a(x3)
///            + (i xi / b^2) * d3(u3_hat),
///     a(x3) = (1 - e^{-4 x3})^2 e^{-x3}.
/// z1, z2 carry the coherent center phase exp(-i xi . x_c) modulated by 10%
/// seeded Hermitian noise.  The (i xi / b^2) d3(u3) part makes the discrete
/// divergence vanish identically, node by node; the per-mode vertical extent
/// 1/b in m_b is what produces the vertical component's extra decay in the
/// vertical-integrated norms.
///
/// shear_roll: u = curl(0, 0, psi) with psi = sin(2 pi x1 / L) x3^2 e^{-x3};
/// purely horizontal, divergence-free by construction.
///
/// envelope_width is the spectral width w of gaussian_bump (ignored by
/// shear_roll).
VectorField make_divfree_ic(const GridSpec& grid, std::uint64_t seed,
                            double amplitude, IcProfile profile,
                            double envelope_width = 0.5);

/// Deterministic 64-bit PRNG helpers (fixed mapping, identical across
/// platforms; std:: distributions are implementation-defined and avoided).
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform01();       ///< in [0, 1)
    double gauss();           ///< standard normal via Box-Muller
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace anisolab
