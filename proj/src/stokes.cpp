#include "anisolab/stokes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "anisolab/lp.hpp"

namespace anisolab {

SpectralField& ForceTensor::entry(int k, int l) {
    if (k < 1 || k > 3 || l < 1 || l > 3)
        throw std::invalid_argument("ForceTensor::entry: indices in 1..3");
    if (k > l) std::swap(k, l);
    if (k == 1) return l == 1 ? e11 : (l == 2 ? e12 : e13);
    if (k == 2) return l == 2 ? e22 : e23;
    return e33;
}

const SpectralField& ForceTensor::entry(int k, int l) const {
    return const_cast<ForceTensor*>(this)->entry(k, l);
}

namespace {

SpectralField divergence(const VectorField& u) {
    const GridSpec& g = u.grid;
    SpectralField div = d3(u.u3);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const cplx w1(0.0, g.xi(i1)), w2(0.0, g.xi(i2));
            const cplx* a1 = &u.u1.at(i1, i2, 0);
            const cplx* a2 = &u.u2.at(i1, i2, 0);
            cplx* o = &div.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) o[m] += w1 * a1[m] + w2 * a2[m];
        }
    return div;
}

double boundary_slice_l2(const SpectralField& f) {
    const GridSpec& g = f.grid;
    double acc = 0.0;
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) acc += std::norm(f.at(i1, i2, 0));
    return std::sqrt(acc) * f.grid.L;
}

}  // namespace

double check_div(const VectorField& u) {
    const double num = l2_norm(divergence(u));
    double den_sq = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
        const SpectralField& f = u.comp(comp);
        const GridSpec& g = u.grid;
        SpectralField dh(g);
        for (int axis = 1; axis <= 2; ++axis) {
            for (int i1 = 0; i1 < g.N; ++i1)
                for (int i2 = 0; i2 < g.N; ++i2) {
                    const cplx w(0.0, axis == 1 ? g.xi(i1) : g.xi(i2));
                    const cplx* a = &f.at(i1, i2, 0);
                    cplx* o = &dh.at(i1, i2, 0);
                    for (int m = 0; m < g.M; ++m) o[m] = w * a[m];
                }
            const double v = l2_norm(dh);
            den_sq += v * v;
        }
        const double v3 = l2_norm(d3(f));
        den_sq += v3 * v3;
    }
    return num / std::max(std::sqrt(den_sq), 1e-300);
}

double check_bc(const VectorField& u) {
    double num_sq = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
        const double v = boundary_slice_l2(u.comp(comp));
        num_sq += v * v;
    }
    return std::sqrt(num_sq) / std::max(l2_norm(u), 1e-300);
}

std::vector<cplx> banded_solve(int n, int kl, int ku, std::vector<cplx> a,
                               std::vector<cplx> rhs) {
    // Givens QR: eliminating row i against pivot row j can fill columns up to
    // j + ku + kl, so widen the storage before factorizing.
    const int w_in = kl + ku + 1;
    const int ku_f = ku + kl;
    const int w = kl + ku_f + 1;
    std::vector<cplx> b(static_cast<std::size_t>(n) * w, cplx(0.0));
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < w_in; ++d) b[i * w + d] = a[i * w_in + d];

    auto at = [&](int i, int j) -> cplx& { return b[i * w + (j - i + kl)]; };

    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i <= std::min(j + kl, n - 1); ++i) {
            const cplx f = at(j, j), g = at(i, j);
            if (g == cplx(0.0)) continue;
            const double af = std::abs(f), ag = std::abs(g);
            const double r = std::hypot(af, ag);
            cplx c, s;
            if (af == 0.0) {
                c = 0.0;
                s = g / ag;  // swap-like rotation
            } else {
                c = af / r;
                s = (f / af) * (std::conj(g) / r);
            }
            const int jhi = std::min(j + ku_f, n - 1);
            for (int jj = j; jj <= jhi; ++jj) {
                const cplx pj = (jj - j + kl < w) ? at(j, jj) : cplx(0.0);
                const cplx pi = (jj - i + kl >= 0) ? at(i, jj) : cplx(0.0);
                const cplx nj = c * pj + s * pi;
                const cplx ni = -std::conj(s) * pj + c * pi;
                at(j, jj) = nj;
                if (jj - i + kl >= 0) at(i, jj) = ni;
            }
            const cplx rj = rhs[j], ri = rhs[i];
            rhs[j] = c * rj + s * ri;
            rhs[i] = -std::conj(s) * rj + c * ri;
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        cplx acc = rhs[i];
        const int jhi = std::min(i + ku_f, n - 1);
        for (int j = i + 1; j <= jhi; ++j) acc -= at(i, j) * rhs[j];
        const cplx d = at(i, i);
        if (std::abs(d) == 0.0)
            throw std::runtime_error("banded_solve: singular matrix");
        rhs[i] = acc / d;
    }
    return rhs;
}

namespace {

/// Per-mode solve of (d3 + b) v = rhs with v(0) = 0, closed at the top with
/// the one-sided d3 row.  d3 here is the shared finite-difference stencil.
std::vector<cplx> solve_transport(double b, const cplx* rhs, int M, double h) {
    const double inv2h = 0.5 / h;
    const int kl = 2, ku = 1, w = kl + ku + 1;
    std::vector<cplx> a(static_cast<std::size_t>(M) * w, cplx(0.0));
    std::vector<cplx> r(M);
    auto set = [&](int i, int j, cplx v) { a[i * w + (j - i + kl)] = v; };
    set(0, 0, 1.0);
    r[0] = 0.0;
    for (int m = 1; m < M - 1; ++m) {
        set(m, m - 1, -inv2h);
        set(m, m, b);
        set(m, m + 1, inv2h);
        r[m] = rhs[m];
    }
    set(M - 1, M - 3, inv2h);
    set(M - 1, M - 2, -4.0 * inv2h);
    set(M - 1, M - 1, 3.0 * inv2h + b);
    r[M - 1] = rhs[M - 1];
    return banded_solve(M, kl, ku, std::move(a), std::move(r));
}

void require_admissible(const VectorField& u0, const char* who) {
    const double rd = check_div(u0);
    const double rb = check_bc(u0);
    if (rd > 1e-8 || rb > 1e-8) {
        std::ostringstream os;
        os << who << ": inadmissible initial data (relative residuals: div = "
           << rd << ", boundary = " << rb << ", tolerance 1e-8)";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

VectorField stokes_evolve(const VectorField& u0, double t) {
    if (t < 0.0) throw std::invalid_argument("stokes_evolve: t must be >= 0");
    require_admissible(u0, "stokes_evolve");
    const GridSpec& g = u0.grid;
    VectorField out(g);
    std::vector<cplx> rhs(g.M);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const bool zero_mode = (g.k_of(i1) == 0 && g.k_of(i2) == 0);
            const cplx* a1 = &u0.u1.at(i1, i2, 0);
            const cplx* a2 = &u0.u2.at(i1, i2, 0);
            const cplx* a3 = &u0.u3.at(i1, i2, 0);
            cplx* o1 = &out.u1.at(i1, i2, 0);
            cplx* o2 = &out.u2.at(i1, i2, 0);
            cplx* o3 = &out.u3.at(i1, i2, 0);
            if (zero_mode) {
                // Heat flow is the identity on the mean mode; u3's mean is
                // zero for admissible data and stays zero.
                for (int m = 0; m < g.M; ++m) {
                    o1[m] = a1[m];
                    o2[m] = a2[m];
                    o3[m] = 0.0;
                }
                continue;
            }
            const double b = g.b_of(i1, i2);
            const double heat = std::exp(-t * b * b);
            const cplx s1(0.0, g.xi(i1) / b), s2(0.0, g.xi(i2) / b);
            // rhs = b * heat * (u03 - S . u0h)
            for (int m = 0; m < g.M; ++m)
                rhs[m] = b * heat * (a3[m] - s1 * a1[m] - s2 * a2[m]);
            std::vector<cplx> v = solve_transport(b, rhs.data(), g.M, g.dz());
            for (int m = 0; m < g.M; ++m) {
                o3[m] = v[m];
                o1[m] = heat * (a1[m] + s1 * a3[m]) - s1 * v[m];
                o2[m] = heat * (a2[m] + s2 * a3[m]) - s2 * v[m];
            }
        }
    return out;
}

VectorField stokes_forced_step(const VectorField& u0, const ForceTensor& f,
                               double dt) {
    if (dt <= 0.0)
        throw std::invalid_argument("stokes_forced_step: dt must be > 0");
    if (!(f.grid == u0.grid))
        throw std::invalid_argument("stokes_forced_step: grid mismatch");
    const GridSpec& g = u0.grid;

    VectorField out = stokes_evolve(u0, dt);

    // Shared intermediates.  Q = sum_{l,m<=2} xi_l xi_m f_lm;
    // G3 = sum_{l<=2} d_l f_{3l}; all get one Duhamel multiplier Phi.
    SpectralField Q(g), G3(g);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const double x1 = g.xi(i1), x2 = g.xi(i2);
            const cplx w1(0.0, x1), w2(0.0, x2);
            const cplx* f11 = &f.e11.at(i1, i2, 0);
            const cplx* f12 = &f.e12.at(i1, i2, 0);
            const cplx* f22 = &f.e22.at(i1, i2, 0);
            const cplx* f13 = &f.e13.at(i1, i2, 0);
            const cplx* f23 = &f.e23.at(i1, i2, 0);
            cplx* q = &Q.at(i1, i2, 0);
            cplx* g3 = &G3.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) {
                q[m] = x1 * x1 * f11[m] + 2.0 * x1 * x2 * f12[m] +
                       x2 * x2 * f22[m];
                g3[m] = w1 * f13[m] + w2 * f23[m];
            }
        }
    const MultiplierSpec phi = MultiplierSpec::heat_phi1(dt);
    const SpectralField Qp = apply_multiplier(Q, phi);
    const SpectralField G3p = apply_multiplier(G3, phi);
    const SpectralField f33p = apply_multiplier(f.e33, phi);

    // Vertical kernel sweeps (each per-mode, so horizontal multipliers
    // commute with them and can be applied before or after).
    const SpectralField bf33p =
        apply_multiplier(f33p, MultiplierSpec::abs_grad(1.0));
    const SpectralField Qp_b2 =
        apply_multiplier(Qp, MultiplierSpec::abs_grad(-2.0));
    const SpectralField Qp_b1 =
        apply_multiplier(Qp, MultiplierSpec::abs_grad(-1.0));

    const SpectralField Vp_Q = vertical_kernel_apply(Qp_b1, KernelKind::Vplus);
    const SpectralField Vm_bf = vertical_kernel_apply(bf33p, KernelKind::Vminus);
    const SpectralField T_bf = vertical_kernel_apply(bf33p, KernelKind::T);
    const SpectralField W_G3 = vertical_kernel_apply(G3p, KernelKind::W);
    const SpectralField V_G3 = vertical_kernel_apply(G3p, KernelKind::V);
    const SpectralField T_G3 = vertical_kernel_apply(G3p, KernelKind::T);
    const SpectralField Wp_Q = vertical_kernel_apply(Qp_b2, KernelKind::Wplus);
    const SpectralField Wm_f33 = vertical_kernel_apply(f33p, KernelKind::Wminus);
    const SpectralField T_f33 = vertical_kernel_apply(f33p, KernelKind::T);

    // Horizontal-component transport term Phi[sum_m d_m f_{km}].
    SpectralField d3f13 = d3(f.e13), d3f23 = d3(f.e23);
    SpectralField divf1(g), divf2(g);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const cplx w1(0.0, g.xi(i1)), w2(0.0, g.xi(i2));
            const cplx* f11 = &f.e11.at(i1, i2, 0);
            const cplx* f12 = &f.e12.at(i1, i2, 0);
            const cplx* f22 = &f.e22.at(i1, i2, 0);
            const cplx* a13 = &d3f13.at(i1, i2, 0);
            const cplx* a23 = &d3f23.at(i1, i2, 0);
            cplx* o1 = &divf1.at(i1, i2, 0);
            cplx* o2 = &divf2.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) {
                o1[m] = w1 * f11[m] + w2 * f12[m] + a13[m];
                o2[m] = w1 * f12[m] + w2 * f22[m] + a23[m];
            }
        }
    const SpectralField divf1p = apply_multiplier(divf1, phi);
    const SpectralField divf2p = apply_multiplier(divf2, phi);

    // Assemble the forced contributions.
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const bool zero_mode = (g.k_of(i1) == 0 && g.k_of(i2) == 0);
            const std::size_t off =
                (static_cast<std::size_t>(i1) * g.N + i2) * g.M;
            cplx* o1 = &out.u1.c[off];
            cplx* o2 = &out.u2.c[off];
            cplx* o3 = &out.u3.c[off];
            if (zero_mode) {
                // Mean mode: only the transport term survives (every kernel
                // and Riesz factor vanishes there).
                for (int m = 0; m < g.M; ++m) {
                    o1[m] += divf1p.c[off + m];
                    o2[m] += divf2p.c[off + m];
                }
                continue;
            }
            const double b = g.b_of(i1, i2);
            const cplx s1(0.0, g.xi(i1) / b), s2(0.0, g.xi(i2) / b);
            const cplx i_xi1(0.0, g.xi(i1)), i_xi2(0.0, g.xi(i2));
            for (int m = 0; m < g.M; ++m) {
                const std::size_t idx = off + m;
                // u3: -V+[sum d_l S_m f_lm] = +V+[(1/b) Q] since the inner
                // field is -(1/b) Q.
                const cplx t3 = Vp_Q.c[idx] - (Vm_bf.c[idx] + T_bf.c[idx]) +
                                (W_G3.c[idx] - G3p.c[idx] - T_G3.c[idx]);
                // uk: transport + W+[d_k S_l S_m f] + pressure-type terms.
                const cplx vmt = V_G3.c[idx] - T_G3.c[idx];
                const cplx wcorr =
                    f33p.c[idx] - T_f33.c[idx] - Wm_f33.c[idx];
                o1[m] += divf1p.c[idx] - i_xi1 * Wp_Q.c[idx] - s1 * vmt -
                         i_xi1 * wcorr;
                o2[m] += divf2p.c[idx] - i_xi2 * Wp_Q.c[idx] - s2 * vmt -
                         i_xi2 * wcorr;
                o3[m] += t3;
            }
        }

    // Boundary and divergence closure.
    // (1) u3: subtract the harmonic lift of its boundary trace, then nudge
    //     node 1 so the one-sided derivative at the wall vanishes.  The lift
    //     is the boundary term of the solution formula; the nudge absorbs the
    //     O(h^2) mismatch between continuum and discrete derivatives.
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const double b = g.b_of(i1, i2);
            cplx* o3 = &out.u3.at(i1, i2, 0);
            const cplx tr = o3[0];
            if (tr != cplx(0.0))
                for (int m = 0; m < g.M; ++m)
                    o3[m] -= tr * std::exp(-b * g.x3(m));
            o3[1] -= 0.25 * (4.0 * o3[1] - o3[2]);
        }
    // (2) uh: rebuild the curl-free horizontal part from d3(u3) so the
    //     discrete divergence vanishes at every node; the mean mode has no
    //     horizontal divergence and is left alone.
    SpectralField du3 = d3(out.u3);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            if (g.k_of(i1) == 0 && g.k_of(i2) == 0) continue;
            const double b = g.b_of(i1, i2);
            const cplx s1(0.0, g.xi(i1) / b), s2(0.0, g.xi(i2) / b);
            cplx* o1 = &out.u1.at(i1, i2, 0);
            cplx* o2 = &out.u2.at(i1, i2, 0);
            const cplx* dv = &du3.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) {
                // Divergence-free means b (S . uh) = -d3(u3); replace the
                // parallel part accordingly.
                const cplx par = s1 * o1[m] + s2 * o2[m];
                const cplx target = -dv[m] / b;
                // S . S = -1, so adding s (par - target) moves S . uh from
                // par to target.
                o1[m] += s1 * (par - target);
                o2[m] += s2 * (par - target);
            }
        }
    // (3) uh boundary trace: what remains at the wall is curl-free-less
    //     (divergence-free as a horizontal vector for nonzero modes, since
    //     d3(u3) vanishes there by (1)), so a decaying lift of it leaves the
    //     divergence untouched.  The mean mode never enters the divergence.
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const bool zero_mode = (g.k_of(i1) == 0 && g.k_of(i2) == 0);
            const double decay = zero_mode ? 1.0 : g.b_of(i1, i2);
            for (SpectralField* fld : {&out.u1, &out.u2}) {
                cplx* o = &fld->at(i1, i2, 0);
                const cplx tr = o[0];
                if (tr == cplx(0.0)) continue;
                for (int m = 0; m < g.M; ++m)
                    o[m] -= tr * std::exp(-decay * g.x3(m));
            }
        }
    return out;
}

}  // namespace anisolab
