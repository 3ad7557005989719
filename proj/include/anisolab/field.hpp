#pragma once

#include <complex>
#include <vector>

#include "anisolab/grid.hpp"

namespace anisolab {

using cplx = std::complex<double>;

/// Horizontal Fourier coefficients sampled on the vertical nodes.
/// Storage layout: c[(i1 * N + i2) * M + m], i.e. the vertical index is
/// fastest, which lets FFTs batch over all vertical nodes at once.
/// Convention: coefficient = (forward DFT of physical samples) / N^2, so a
/// physical field exp(i xi . x_h) has a single unit coefficient.
struct SpectralField {
    GridSpec grid;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g) : grid(g), c(g.size()) {}

    cplx& at(int i1, int i2, int m) {
        return c[(static_cast<std::size_t>(i1) * grid.N + i2) * grid.M + m];
    }
    const cplx& at(int i1, int i2, int m) const {
        return c[(static_cast<std::size_t>(i1) * grid.N + i2) * grid.M + m];
    }
};

/// Real samples on the uniform horizontal grid times the vertical nodes.
/// Same layout as SpectralField: v[(i1 * N + i2) * M + m].
struct PhysicalField {
    GridSpec grid;
    std::vector<double> v;

    PhysicalField() = default;
    explicit PhysicalField(const GridSpec& g) : grid(g), v(g.size()) {}

    double& at(int i1, int i2, int m) {
        return v[(static_cast<std::size_t>(i1) * grid.N + i2) * grid.M + m];
    }
    const double& at(int i1, int i2, int m) const {
        return v[(static_cast<std::size_t>(i1) * grid.N + i2) * grid.M + m];
    }
};

/// Velocity field (u1, u2, u3) on a shared grid.
struct VectorField {
    GridSpec grid;
    SpectralField u1, u2, u3;

    VectorField() = default;
    explicit VectorField(const GridSpec& g) : grid(g), u1(g), u2(g), u3(g) {}

    SpectralField& comp(int k) { return k == 0 ? u1 : (k == 1 ? u2 : u3); }
    const SpectralField& comp(int k) const {
        return k == 0 ? u1 : (k == 1 ? u2 : u3);
    }
};

/// Forward transform (physical -> spectral).  Enforces Hermitian symmetry on
/// the output, so the result always represents a real field.
SpectralField to_spectral(const PhysicalField& f);

/// Inverse transform (spectral -> physical, real part).
PhysicalField to_physical(const SpectralField& f);

/// Zeroes every mode outside the dealias square |k1|,|k2| <= kmax.
void dealias(SpectralField& f);

/// Vertical finite-difference derivative: second-order central stencil at
/// interior nodes, second-order one-sided stencils at both ends.  This is the
/// single discrete d/dx3 used everywhere (divergence checks, solution
/// formulas, initial data), so discrete identities close exactly.
SpectralField d3(const SpectralField& f);

/// In-place axpy: y += a * x.
void axpy(cplx a, const SpectralField& x, SpectralField& y);

/// In-place scaling.
void scale(SpectralField& f, double a);

/// Maximum |coefficient| over the field.
double max_abs(const SpectralField& f);

}  // namespace anisolab
