#include "anisolab/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace anisolab {

namespace {

/// Quadrature weights for one uniform cell of width h against the
/// exponential kernels, exact for a linear reconstruction of f:
///   forward  cell: b int_0^h e^{-b(h-s)} f_lin(s) ds = f_near (g0 - gA) + f_far gA
///   backward cell: b int_0^h e^{-b s}     f_lin(s) ds = f_near (g0 - gB) + f_far gB
/// with z = b h, g0 = 1 - e^{-z}, gA = 1 - g0/z, gB = (g0 - z e^{-z})/z.
struct CellWeights {
    double emz, g0, gA, gB;
    explicit CellWeights(double z) {
        emz = std::exp(-z);
        if (z < 1e-4) {
            // Series to O(z^4): avoids cancellation for soft modes.
            g0 = z * (1.0 - z * (0.5 - z * (1.0 / 6.0 - z / 24.0)));
            gA = z * (0.5 - z * (1.0 / 6.0 - z / 24.0));
            gB = z * (0.5 - z * (1.0 / 3.0 - z / 8.0));
        } else {
            g0 = 1.0 - emz;
            gA = 1.0 - g0 / z;
            gB = (g0 - z * emz) / z;
        }
    }
};

void kernel_column_into(double b, const cplx* f, int M, double h, KernelKind k,
                        cplx* out, std::vector<cplx>& A, std::vector<cplx>& B) {
    const CellWeights w(b * h);
    A.assign(M, cplx(0.0));
    B.assign(M, cplx(0.0));
    for (int m = 1; m < M; ++m)
        A[m] = w.emz * A[m - 1] + f[m - 1] * (w.g0 - w.gA) + f[m] * w.gA;
    for (int m = M - 2; m >= 0; --m)
        B[m] = w.emz * B[m + 1] + f[m] * (w.g0 - w.gB) + f[m + 1] * w.gB;
    const cplx P = B[0];
    for (int m = 0; m < M; ++m) {
        const double ex = std::exp(-b * h * m);
        const cplx T = ex * P;
        switch (k) {
            case KernelKind::U: out[m] = A[m]; break;
            case KernelKind::V: out[m] = A[m] - B[m]; break;
            case KernelKind::W: out[m] = A[m] + B[m]; break;
            case KernelKind::T: out[m] = T; break;
            case KernelKind::Vplus: out[m] = 0.5 * (A[m] - B[m] + T); break;
            case KernelKind::Vminus: out[m] = 0.5 * (A[m] - B[m] - T); break;
            case KernelKind::Wplus: out[m] = 0.5 * (A[m] + B[m] + T); break;
            case KernelKind::Wminus: out[m] = 0.5 * (A[m] + B[m] - T); break;
        }
    }
}

}  // namespace

std::vector<cplx> kernel_column(double b, const std::vector<cplx>& f, double h,
                                KernelKind k) {
    const int M = static_cast<int>(f.size());
    if (M < 2) throw std::invalid_argument("kernel_column: need >= 2 nodes");
    std::vector<cplx> out(M), A, B;
    kernel_column_into(b, f.data(), M, h, k, out.data(), A, B);
    return out;
}

SpectralField vertical_kernel_apply(const SpectralField& f, KernelKind k,
                                    double* tail_bound) {
    const GridSpec& g = f.grid;
    SpectralField out(g);
    std::vector<cplx> A, B;
    double tail = 0.0;
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            if (g.k_of(i1) == 0 && g.k_of(i2) == 0) continue;  // mean mode -> 0
            const double b = g.b_of(i1, i2);
            const cplx* col = &f.at(i1, i2, 0);
            kernel_column_into(b, col, g.M, g.dz(), k, &out.at(i1, i2, 0), A, B);
            if (tail_bound) {
                double mx = 0.0;
                for (int m = 0; m < g.M; ++m) mx = std::max(mx, std::abs(col[m]));
                tail = std::max(tail, mx * std::exp(-b * g.Z));
            }
        }
    if (tail_bound) *tail_bound = tail;
    return out;
}

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSpec& m) {
    const GridSpec& g = f.grid;
    using Kind = MultiplierSpec::Kind;
    if ((m.kind == Kind::heat || m.kind == Kind::heat_phi1) && m.param < 0.0)
        throw std::invalid_argument("apply_multiplier: heat requires t >= 0");
    if (m.kind == Kind::poisson && m.param < 0.0)
        throw std::invalid_argument("apply_multiplier: poisson requires x3 >= 0");
    if (m.kind == Kind::abs_grad_pow && m.param < 0.0) {
        double zero_mass = 0.0;
        for (int mm = 0; mm < g.M; ++mm) zero_mass += std::abs(f.at(0, 0, mm));
        if (zero_mass > 0.0)
            throw std::invalid_argument(
                "apply_multiplier: abs_grad_pow(s<0) on nonzero mean mode");
    }

    SpectralField out(g);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const double b = g.b_of(i1, i2);
            const bool zero_mode = (g.k_of(i1) == 0 && g.k_of(i2) == 0);
            cplx w;
            switch (m.kind) {
                case Kind::riesz_axis1:
                    w = zero_mode ? cplx(0.0) : cplx(0.0, g.xi(i1) / b);
                    break;
                case Kind::riesz_axis2:
                    w = zero_mode ? cplx(0.0) : cplx(0.0, g.xi(i2) / b);
                    break;
                case Kind::abs_grad_pow:
                    w = zero_mode ? cplx(0.0) : cplx(std::pow(b, m.param));
                    break;
                case Kind::heat:
                    w = std::exp(-m.param * b * b);
                    break;
                case Kind::heat_phi1:
                    w = zero_mode ? cplx(m.param)
                                  : cplx(-std::expm1(-m.param * b * b) / (b * b));
                    break;
                case Kind::poisson:
                    w = std::exp(-m.param * b);
                    break;
            }
            if (w == cplx(0.0)) continue;
            const cplx* a = &f.at(i1, i2, 0);
            cplx* o = &out.at(i1, i2, 0);
            for (int mm = 0; mm < g.M; ++mm) o[mm] = w * a[mm];
        }
    return out;
}

SpectralField poisson_boundary_ext(const SpectralField& boundary_slice) {
    const GridSpec& g = boundary_slice.grid;
    SpectralField out(g);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const cplx v = boundary_slice.at(i1, i2, 0);
            if (v == cplx(0.0)) continue;
            const double b = g.b_of(i1, i2);
            cplx* o = &out.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) o[m] = v * std::exp(-b * g.x3(m));
        }
    return out;
}

}  // namespace anisolab
