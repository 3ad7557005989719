#include "anisolab/mild.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "anisolab/lp.hpp"

namespace anisolab {

double evaluate_norm(const VectorField& u, const NormRequest& r) {
    const GridSpec& g = u.grid;
    VectorField sel(g);
    if (r.component == FlowComponent::horizontal) {
        sel.u1 = u.u1;
        sel.u2 = u.u2;
    } else {
        sel.u3 = u.u3;
    }
    if (r.alpha_h != 0) {
        const MultiplierSpec grad_h = MultiplierSpec::abs_grad(1.0);
        for (int c = 0; c < 3; ++c) sel.comp(c) = apply_multiplier(sel.comp(c), grad_h);
    }
    if (r.alpha_3 != 0)
        for (int c = 0; c < 3; ++c) sel.comp(c) = d3(sel.comp(c));
    if (!std::isnan(r.sigma))
        return chemin_lerner_norm(sel, build_partition(g), r.p, r.q, r.sigma);
    return mixed_norm(sel, r.p, r.q);
}

ForceTensor momentum_flux(const VectorField& u) {
    const GridSpec& g = u.grid;
    const PhysicalField p1 = to_physical(u.u1);
    const PhysicalField p2 = to_physical(u.u2);
    const PhysicalField p3 = to_physical(u.u3);
    const PhysicalField* ph[3] = {&p1, &p2, &p3};
    ForceTensor f(g);
    PhysicalField prod(g);
    for (int k = 1; k <= 3; ++k)
        for (int l = k; l <= 3; ++l) {
            const std::vector<double>& a = ph[k - 1]->v;
            const std::vector<double>& b = ph[l - 1]->v;
            for (std::size_t i = 0; i < prod.v.size(); ++i)
                prod.v[i] = -a[i] * b[i];
            SpectralField& e = f.entry(k, l);
            e = to_spectral(prod);
            dealias(e);
        }
    return f;
}

VectorField mild_step(const VectorField& u, const IntegratorConfig& cfg) {
    if (cfg.dt <= 0.0) throw std::invalid_argument("mild_step: dt must be > 0");
    if (cfg.picard_iters < 1)
        throw std::invalid_argument("mild_step: picard_iters must be >= 1");
    const double base = l2_norm(u);
    VectorField v = stokes_forced_step(u, momentum_flux(u), cfg.dt);
    for (int it = 1; it < cfg.picard_iters; ++it) {
        if (base > 0.0 && l2_norm(v) > 10.0 * base)
            throw BlowUpError("mild_step: Picard iterate grew > 10x");
        VectorField mid(u.grid);
        for (int c = 0; c < 3; ++c) {
            mid.comp(c) = u.comp(c);
            scale(mid.comp(c), 0.5);
            axpy(cplx(0.5), v.comp(c), mid.comp(c));
        }
        v = stokes_forced_step(u, momentum_flux(mid), cfg.dt);
    }
    if (base > 0.0 && l2_norm(v) > 10.0 * base)
        throw BlowUpError("mild_step: step grew > 10x");
    if (cfg.dealias)
        for (int c = 0; c < 3; ++c) dealias(v.comp(c));
    return v;
}

IntegrateResult integrate(
    const VectorField& u0, const IntegratorConfig& cfg,
    const std::vector<NormRequest>& requests,
    const std::function<void(double, const VectorField&)>& on_save) {
    if (cfg.dt <= 0.0 || cfg.t_max < cfg.dt)
        throw std::invalid_argument("integrate: need dt > 0 and t_max >= dt");
    if (cfg.save_every < 1)
        throw std::invalid_argument("integrate: save_every must be >= 1");
    try {
        const DyadicPartition part = build_partition(u0.grid);
        const double xs = xs_norm(u0, 1, part);
        if (xs > cfg.smallness_delta)
            std::fprintf(stderr,
                         "integrate: warning: initial X^1 norm %.3g exceeds "
                         "smallness_delta %.3g\n",
                         xs, cfg.smallness_delta);
    } catch (const std::invalid_argument&) {
        // Grid too small for a dyadic partition; skip the advisory check.
    }

    IntegrateResult res;
    res.series.reserve(requests.size());
    for (const NormRequest& r : requests) res.series.push_back({r, {}});

    auto save = [&](double t, const VectorField& u) {
        res.traj.times.push_back(t);
        if (cfg.store_states) res.traj.states.push_back(u);
        for (std::size_t i = 0; i < requests.size(); ++i)
            res.series[i].samples.emplace_back(t, evaluate_norm(u, requests[i]));
        if (on_save) on_save(t, u);
    };

    VectorField u = u0;
    save(0.0, u);
    const int n_steps = static_cast<int>(std::llround(cfg.t_max / cfg.dt));
    for (int step = 1; step <= n_steps; ++step) {
        try {
            u = mild_step(u, cfg);
        } catch (const BlowUpError&) {
            res.blew_up = true;
            break;
        }
        StepMeta meta;
        meta.picard_iters = cfg.picard_iters;
        meta.div_residual = check_div(u);
        meta.bc_residual = check_bc(u);
        res.traj.step_meta.push_back(meta);
        if (step % cfg.save_every == 0 || step == n_steps)
            save(step * cfg.dt, u);
    }
    return res;
}

namespace {

double dissipation_sq(const VectorField& u) {
    const GridSpec& g = u.grid;
    double acc = 0.0;
    SpectralField dh(g);
    for (int c = 0; c < 3; ++c)
        for (int axis = 1; axis <= 2; ++axis) {
            for (int i1 = 0; i1 < g.N; ++i1)
                for (int i2 = 0; i2 < g.N; ++i2) {
                    const cplx w(0.0, axis == 1 ? g.xi(i1) : g.xi(i2));
                    const cplx* a = &u.comp(c).at(i1, i2, 0);
                    cplx* o = &dh.at(i1, i2, 0);
                    for (int m = 0; m < g.M; ++m) o[m] = w * a[m];
                }
            const double v = l2_norm(dh);
            acc += v * v;
        }
    return acc;
}

}  // namespace

double energy_ledger(const Trajectory& traj) {
    if (traj.states.size() != traj.times.size() || traj.states.empty())
        throw std::invalid_argument("energy_ledger: trajectory without states");
    const std::size_t n = traj.times.size();
    std::vector<double> energy(n), diss(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = l2_norm(traj.states[i]);
        energy[i] = e * e;
        diss[i] = dissipation_sq(traj.states[i]);
    }
    if (energy[0] == 0.0) return 0.0;
    double integral = 0.0, max_defect = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = traj.times[i] - traj.times[i - 1];
        integral += 0.5 * dt * (diss[i] + diss[i - 1]);
        const double ledger = energy[i] + 2.0 * integral;
        max_defect = std::max(max_defect,
                              std::abs(ledger - energy[0]) / energy[0]);
    }
    return max_defect;
}

namespace {

/// Removes the gradient part of R in place: solves the per-mode vertical
/// Poisson problem (d3^2 - b^2) pi = div R with Neumann data
/// d3 pi(0) = R3(0) and pi = 0 at the top, then subtracts grad pi.
void leray_project(VectorField& R) {
    const GridSpec& g = R.grid;
    const double h = g.dz();
    const double invh2 = 1.0 / (h * h), inv2h = 0.5 / h;
    SpectralField divR = d3(R.u3);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const cplx w1(0.0, g.xi(i1)), w2(0.0, g.xi(i2));
            const cplx* a1 = &R.u1.at(i1, i2, 0);
            const cplx* a2 = &R.u2.at(i1, i2, 0);
            cplx* o = &divR.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) o[m] += w1 * a1[m] + w2 * a2[m];
        }
    SpectralField pi(g);
    const int kl = 2, ku = 2, w = kl + ku + 1;
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            if (g.k_of(i1) == 0 && g.k_of(i2) == 0) {
                // Mean mode: the gradient part is all of R3.
                cplx* a3 = &R.u3.at(i1, i2, 0);
                for (int m = 0; m < g.M; ++m) a3[m] = 0.0;
                continue;
            }
            const double b = g.b_of(i1, i2);
            std::vector<cplx> a(static_cast<std::size_t>(g.M) * w, cplx(0.0));
            std::vector<cplx> rhs(g.M);
            auto set = [&](int i, int j, cplx v) {
                a[i * w + (j - i + kl)] = v;
            };
            set(0, 0, -3.0 * inv2h);
            set(0, 1, 4.0 * inv2h);
            set(0, 2, -inv2h);
            rhs[0] = R.u3.at(i1, i2, 0);
            for (int m = 1; m < g.M - 1; ++m) {
                set(m, m - 1, invh2);
                set(m, m, -2.0 * invh2 - b * b);
                set(m, m + 1, invh2);
                rhs[m] = divR.at(i1, i2, m);
            }
            set(g.M - 1, g.M - 1, 1.0);
            rhs[g.M - 1] = 0.0;
            std::vector<cplx> sol =
                banded_solve(g.M, kl, ku, std::move(a), std::move(rhs));
            for (int m = 0; m < g.M; ++m) pi.at(i1, i2, m) = sol[m];
        }
    SpectralField dpi = d3(pi);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            if (g.k_of(i1) == 0 && g.k_of(i2) == 0) continue;
            const cplx w1(0.0, g.xi(i1)), w2(0.0, g.xi(i2));
            cplx* a1 = &R.u1.at(i1, i2, 0);
            cplx* a2 = &R.u2.at(i1, i2, 0);
            cplx* a3 = &R.u3.at(i1, i2, 0);
            const cplx* p = &pi.at(i1, i2, 0);
            const cplx* dp = &dpi.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) {
                a1[m] -= w1 * p[m];
                a2[m] -= w2 * p[m];
                a3[m] -= dp[m];
            }
        }
}

}  // namespace

double pde_residual(const Trajectory& traj, double t) {
    if (traj.states.size() != traj.times.size() || traj.states.size() < 3)
        throw std::invalid_argument("pde_residual: need >= 3 stored states");
    const std::size_t n = traj.times.size();
    std::size_t i = n;
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(traj.times[j] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            i = j;
    if (i == n) throw std::invalid_argument("pde_residual: t not a saved time");
    if (i == 0 || i == n - 1)
        throw std::invalid_argument("pde_residual: t at trajectory endpoint");
    const double dtp = traj.times[i + 1] - traj.times[i];
    const double dtm = traj.times[i] - traj.times[i - 1];
    if (std::abs(dtp - dtm) > 1e-10 * dtp)
        throw std::invalid_argument("pde_residual: nonuniform spacing at t");

    const GridSpec& g = traj.states[i].grid;
    const VectorField& u = traj.states[i];

    // Time derivative (central), horizontal Laplacian, and flux divergence.
    VectorField dtu(g), lap(g), divf(g);
    const double inv2dt = 0.5 / dtp;
    const ForceTensor f = momentum_flux(u);
    SpectralField d3f[3] = {d3(f.e13), d3(f.e23), d3(f.e33)};
    for (int c = 0; c < 3; ++c) {
        const SpectralField& up = traj.states[i + 1].comp(c);
        const SpectralField& um = traj.states[i - 1].comp(c);
        for (int i1 = 0; i1 < g.N; ++i1)
            for (int i2 = 0; i2 < g.N; ++i2) {
                const double x1 = g.xi(i1), x2 = g.xi(i2);
                const cplx w1(0.0, x1), w2(0.0, x2);
                const double b2 = x1 * x1 + x2 * x2;
                const cplx* f1 = &f.entry(c + 1, 1).at(i1, i2, 0);
                const cplx* f2 = &f.entry(c + 1, 2).at(i1, i2, 0);
                const cplx* f3 = &d3f[c].at(i1, i2, 0);
                const cplx* uc = &u.comp(c).at(i1, i2, 0);
                const cplx* ap = &up.at(i1, i2, 0);
                const cplx* am = &um.at(i1, i2, 0);
                cplx* ot = &dtu.comp(c).at(i1, i2, 0);
                cplx* ol = &lap.comp(c).at(i1, i2, 0);
                cplx* od = &divf.comp(c).at(i1, i2, 0);
                for (int m = 0; m < g.M; ++m) {
                    ot[m] = inv2dt * (ap[m] - am[m]);
                    ol[m] = -b2 * uc[m];
                    od[m] = w1 * f1[m] + w2 * f2[m] + f3[m];
                }
            }
    }
    const double den =
        l2_norm(dtu) + l2_norm(lap) + l2_norm(divf);
    if (den == 0.0) return 0.0;
    VectorField R(g);
    for (int c = 0; c < 3; ++c) {
        R.comp(c) = dtu.comp(c);
        axpy(cplx(-1.0), lap.comp(c), R.comp(c));
        axpy(cplx(-1.0), divf.comp(c), R.comp(c));
    }
    leray_project(R);
    return l2_norm(R) / den;
}

}  // namespace anisolab
