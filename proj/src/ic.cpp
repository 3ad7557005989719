#include "anisolab/ic.hpp"

#include <cmath>
#include <stdexcept>

namespace anisolab {

Rng::Rng(std::uint64_t seed) : s(seed) {}

std::uint64_t Rng::next_u64() {
    // splitmix64: tiny, fully specified, platform-independent.
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

IcProfile parse_ic_profile(const std::string& name) {
    if (name == "gaussian_bump") return IcProfile::gaussian_bump;
    if (name == "shear_roll") return IcProfile::shear_roll;
    throw std::invalid_argument("unknown IC profile: " + name);
}

namespace {

/// White-noise modulation field with exact Hermitian symmetry, scaled so
/// entries are O(1) (DFT of N^2 unit-variance samples divided by N).
SpectralField hermitian_noise(const GridSpec& g, Rng& rng) {
    PhysicalField noise(g);
    for (auto& v : noise.v) v = rng.gauss();
    SpectralField out = to_spectral(noise);
    scale(out, static_cast<double>(g.N));
    return out;
}

VectorField gaussian_bump_ic(const GridSpec& g, std::uint64_t seed,
                             double amplitude, double w) {
    constexpr double kRise = 4.0;       // boundary-layer steepness of (1-e^{-k x})^2
    constexpr double kModAmp = 0.1;     // relative amplitude of seeded modulation
    constexpr double kStreamAmp = 10.0; // horizontal stream strength vs vertical

    Rng rng(seed);
    SpectralField z1 = hermitian_noise(g, rng);
    SpectralField z2 = hermitian_noise(g, rng);

    const int N = g.N, M = g.M;
    const double xc = 0.5 * g.L;  // coherent bump center
    const double h = g.dz();

    VectorField u(g);
    std::vector<double> mprof(M), rise(M);
    for (int m = 0; m < M; ++m) {
        const double x = g.x3(m);
        const double r = 1.0 - std::exp(-kRise * x);
        rise[m] = r * r;
    }

    for (int i1 = 0; i1 < N; ++i1) {
        for (int i2 = 0; i2 < N; ++i2) {
            const bool zero_mode = (g.k_of(i1) == 0 && g.k_of(i2) == 0);
            if (zero_mode || !g.keep(i1, i2)) continue;
            const double xi1 = g.xi(i1), xi2 = g.xi(i2);
            const double b = g.b_of(i1, i2);
            const double env = std::exp(-0.5 * w * w * b * b);
            const cplx phase = std::exp(cplx(0.0, -(xi1 + xi2) * xc));

            // Vertical profile with per-mode extent 1/b, unit max.
            double mx = 0.0;
            for (int m = 0; m < M; ++m) {
                mprof[m] = rise[m] * std::exp(-b * g.x3(m));
                mx = std::max(mx, mprof[m]);
            }
            // One-sided derivative at the wall: (-3 f0 + 4 f1 - f2) / (2h)
            // vanishes with f0 = 0 and f1 = f2 / 4, so the compressible part
            // of uh below is exactly zero on the boundary node.
            mprof[1] = 0.25 * mprof[2];
            const double inv_mx = 1.0 / std::max(mx, 1e-300);

            const cplx amp3 = amplitude * phase *
                              (1.0 + kModAmp * z1.at(i1, i2, 0)) * env * b;
            for (int m = 0; m < M; ++m)
                u.u3.at(i1, i2, m) = amp3 * (mprof[m] * inv_mx);

            // Stream part: i xi_perp / b, divergence-free horizontally.
            const cplx amps = kStreamAmp * amplitude * phase *
                              (1.0 + kModAmp * z2.at(i1, i2, 0)) * env / b;
            const cplx s1 = cplx(0.0, -xi2) * amps;
            const cplx s2 = cplx(0.0, xi1) * amps;
            for (int m = 0; m < M; ++m) {
                const double a = rise[m] * std::exp(-g.x3(m));
                u.u1.at(i1, i2, m) = s1 * a;
                u.u2.at(i1, i2, m) = s2 * a;
            }
        }
    }

    // Compressible part (i xi / b^2) d3(u3): cancels the vertical divergence
    // at every node by construction.
    SpectralField du3 = d3(u.u3);
    for (int i1 = 0; i1 < N; ++i1) {
        for (int i2 = 0; i2 < N; ++i2) {
            const bool zero_mode = (g.k_of(i1) == 0 && g.k_of(i2) == 0);
            if (zero_mode || !g.keep(i1, i2)) continue;
            const double b = g.b_of(i1, i2);
            const cplx c1 = cplx(0.0, g.xi(i1) / (b * b));
            const cplx c2 = cplx(0.0, g.xi(i2) / (b * b));
            for (int m = 0; m < M; ++m) {
                const cplx d = du3.at(i1, i2, m);
                u.u1.at(i1, i2, m) += c1 * d;
                u.u2.at(i1, i2, m) += c2 * d;
            }
        }
    }
    (void)h;
    return u;
}

VectorField shear_roll_ic(const GridSpec& g, double amplitude) {
    // u = curl(0, 0, psi), psi = sin(2 pi x1 / L) x3^2 e^{-x3}:
    // u1 = d(psi)/dx2 = 0, u2 = -d(psi)/dx1, u3 = 0.
    VectorField u(g);
    const double kappa = 2.0 * kPi / g.L;
    // sin(kappa x1) has coefficients -i/2 at k=(1,0) and +i/2 at k=(-1,0);
    // -d/dx1 multiplies by -i xi1.
    const cplx cplus = cplx(0.0, -kappa) * cplx(0.0, -0.5);   // k = (+1, 0)
    const cplx cminus = cplx(0.0, kappa) * cplx(0.0, 0.5);    // k = (-1, 0)
    for (int m = 0; m < g.M; ++m) {
        const double x = g.x3(m);
        const double prof = amplitude * x * x * std::exp(-x);
        u.u2.at(1, 0, m) = cplus * prof;
        u.u2.at(g.N - 1, 0, m) = cminus * prof;
    }
    return u;
}

}  // namespace

VectorField make_divfree_ic(const GridSpec& grid, std::uint64_t seed,
                            double amplitude, IcProfile profile,
                            double envelope_width) {
    if (amplitude < 0.0)
        throw std::invalid_argument("make_divfree_ic: amplitude must be >= 0");
    if (amplitude == 0.0) return VectorField(grid);
    switch (profile) {
        case IcProfile::gaussian_bump:
            return gaussian_bump_ic(grid, seed, amplitude, envelope_width);
        case IcProfile::shear_roll:
            return shear_roll_ic(grid, amplitude);
    }
    throw std::logic_error("unreachable");
}

}  // namespace anisolab
