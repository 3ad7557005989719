#include <doctest.h>

#include <cmath>
#include <string>

#include "anisolab/ic.hpp"
#include "anisolab/lp.hpp"
#include "anisolab/stokes.hpp"

using namespace anisolab;

namespace {

double rel_diff(const VectorField& a, const VectorField& b) {
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.comp(c).c.size(); ++i) {
            num = std::max(num, std::abs(a.comp(c).c[i] - b.comp(c).c[i]));
            den = std::max(den, std::abs(a.comp(c).c[i]));
        }
    return num / std::max(den, 1e-300);
}

}  // namespace

TEST_SUITE("stokes") {

TEST_CASE("banded_solve agrees with dense elimination on small systems") {
    // Tridiagonal system with known solution.
    const int n = 6, kl = 1, ku = 1;
    std::vector<cplx> a(n * (kl + ku + 1));
    std::vector<cplx> x_true(n), rhs(n);
    for (int i = 0; i < n; ++i) x_true[i] = cplx(i + 1, -0.5 * i);
    auto A = [&](int i, int j) -> cplx& { return a[i * 3 + (j - i + kl)]; };
    for (int i = 0; i < n; ++i) {
        A(i, i) = cplx(4.0, 0.3);
        if (i > 0) A(i, i - 1) = cplx(-1.0, 0.1);
        if (i < n - 1) A(i, i + 1) = cplx(-1.2, 0.0);
    }
    for (int i = 0; i < n; ++i) {
        rhs[i] = cplx(4.0, 0.3) * x_true[i];
        if (i > 0) rhs[i] += cplx(-1.0, 0.1) * x_true[i - 1];
        if (i < n - 1) rhs[i] += cplx(-1.2, 0.0) * x_true[i + 1];
    }
    const std::vector<cplx> x = banded_solve(n, kl, ku, a, rhs);
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - x_true[i]) < 1e-12);
}

TEST_CASE("ForceTensor symmetry is shared-storage exact") {
    const GridSpec g = make_grid(4.0, 8, 2.0, 6);
    ForceTensor f(g);
    f.entry(1, 3).at(1, 0, 2) = cplx(2.0, -1.0);
    CHECK(&f.entry(3, 1) == &f.entry(1, 3));
    CHECK(f.entry(3, 1).at(1, 0, 2) == cplx(2.0, -1.0));
}

TEST_CASE("check_div and check_bc on constructed fields") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 24);
    const VectorField u = make_divfree_ic(g, 7, 1.0, IcProfile::gaussian_bump);
    CHECK(check_div(u) < 1e-10);
    CHECK(check_bc(u) < 1e-10);

    // u = (0, 0, x3 bump(x_h)): d3 u3 != 0 -> O(1) residual.
    VectorField v(g);
    for (int m = 0; m < g.M; ++m) {
        v.u3.at(1, 0, m) = g.x3(m);
        v.u3.at(g.N - 1, 0, m) = g.x3(m);
    }
    CHECK(check_div(v) > 0.1);
}

TEST_CASE("stokes_evolve: t=0 identity and inadmissible-input rejection") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 24);
    const VectorField u0 = make_divfree_ic(g, 3, 1.0, IcProfile::gaussian_bump);
    const VectorField u = stokes_evolve(u0, 0.0);
    CHECK(rel_diff(u, u0) < 1e-10);

    VectorField bad(g);
    for (int m = 0; m < g.M; ++m) {
        bad.u3.at(1, 0, m) = g.x3(m);
        bad.u3.at(g.N - 1, 0, m) = g.x3(m);
    }
    try {
        stokes_evolve(bad, 1.0);
        FAIL("expected rejection of non-divergence-free input");
    } catch (const std::invalid_argument& e) {
        // Message carries the measured residuals.
        CHECK(std::string(e.what()).find("residual") != std::string::npos);
    }
}

TEST_CASE("stokes_evolve output stays divergence-free and boundary-zero") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 24);
    const VectorField u0 = make_divfree_ic(g, 3, 1.0, IcProfile::gaussian_bump);
    const VectorField u = stokes_evolve(u0, 1.0);
    CHECK(check_div(u) < 1e-6);
    CHECK(check_bc(u) < 1e-6);
}

TEST_CASE("horizontal-only data with div_h = 0 evolves by the heat flow") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 24);
    // shear_roll has u3 = 0; its horizontal part is div_h-free (the full
    // divergence has no d3 u3 contribution), so the U-term vanishes.
    const VectorField u0 = make_divfree_ic(g, 1, 1.0, IcProfile::shear_roll);
    const double t = 0.8;
    const VectorField u = stokes_evolve(u0, t);
    CHECK(l2_norm(u.u3) < 1e-12 * l2_norm(u0));
    VectorField want(g);
    want.u1 = apply_multiplier(u0.u1, MultiplierSpec::heat(t));
    want.u2 = apply_multiplier(u0.u2, MultiplierSpec::heat(t));
    CHECK(rel_diff(u, want) < 1e-10);
}

TEST_CASE("semigroup property holds to near machine precision") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 24);
    const VectorField u0 = make_divfree_ic(g, 8, 1.0, IcProfile::gaussian_bump);
    const VectorField two_step = stokes_evolve(stokes_evolve(u0, 0.6), 1.1);
    const VectorField one_step = stokes_evolve(u0, 1.7);
    CHECK(rel_diff(two_step, one_step) < 1e-6);
}

TEST_CASE("stokes_forced_step with zero force equals stokes_evolve") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 24);
    const VectorField u0 = make_divfree_ic(g, 5, 1.0, IcProfile::gaussian_bump);
    const ForceTensor f(g);
    const double dt = 0.4;
    const VectorField a = stokes_forced_step(u0, f, dt);
    const VectorField b = stokes_evolve(u0, dt);
    CHECK(rel_diff(a, b) < 1e-10);
}

TEST_CASE("forced step keeps the discrete constraints exact") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 32);
    const VectorField u0 = make_divfree_ic(g, 6, 1.0, IcProfile::gaussian_bump);
    ForceTensor f(g);
    // Interior-supported generic symmetric force.
    for (int k = 1; k <= 3; ++k)
        for (int l = k; l <= 3; ++l) {
            Rng rng(100 * k + l);
            SpectralField& e = f.entry(k, l);
            for (int i1 = 0; i1 < g.N; ++i1)
                for (int i2 = 0; i2 <= i1; ++i2) {
                    if (g.b_of(i1, i2) == 0.0 || !g.keep(i1, i2)) continue;
                    const cplx c(rng.gauss(), rng.gauss());
                    for (int m = 0; m < g.M; ++m) {
                        const double x = g.x3(m);
                        const double prof =
                            x * x * std::exp(-0.8 * x);  // zero at the wall
                        e.at(i1, i2, m) = c * prof;
                        e.at((g.N - i1) % g.N, (g.N - i2) % g.N, m) =
                            std::conj(c) * prof;
                    }
                }
        }
    const VectorField u = stokes_forced_step(u0, f, 0.25);
    CHECK(check_div(u) < 1e-10);
    CHECK(check_bc(u) < 1e-10);
}

TEST_CASE("f33-only force: output is nonzero and admissible") {
    const GridSpec g = make_grid(16.0, 16, 8.0, 32);
    VectorField u0(g);
    ForceTensor f(g);
    for (int m = 0; m < g.M; ++m) {
        const double x = g.x3(m);
        const double prof = x * x * std::exp(-x);
        f.e33.at(1, 0, m) = prof;
        f.e33.at(g.N - 1, 0, m) = prof;
    }
    const VectorField u = stokes_forced_step(u0, f, 0.2);
    CHECK(l2_norm(u) > 0.0);
    CHECK(check_div(u) < 1e-10);
    CHECK(check_bc(u) < 1e-10);
    // Symmetry: an f33-only force at mode (k, 0) cannot excite u2 -- every
    // term carries a factor xi_2 = 0 in that component.
    CHECK(l2_norm(u.u2) < 1e-14 * l2_norm(u));
}

TEST_CASE("dt -> 0 difference quotient converges to the projected force") {
    // u0 = 0: u(dt)/dt -> P div f.  Verify first-order convergence of the
    // quotient by step halving (the limit itself needs the projection, which
    // the mild module realizes; here we check the Cauchy rate).
    const GridSpec g = make_grid(16.0, 16, 8.0, 32);
    VectorField u0(g);
    ForceTensor f(g);
    for (int m = 0; m < g.M; ++m) {
        const double x = g.x3(m);
        const double prof = x * x * std::exp(-x);
        f.e13.at(1, 0, m) = prof;
        f.e13.at(g.N - 1, 0, m) = prof;
        f.e22.at(2, 0, m) = 0.5 * prof;
        f.e22.at(g.N - 2, 0, m) = 0.5 * prof;
    }
    auto quotient = [&](double dt) {
        VectorField u = stokes_forced_step(u0, f, dt);
        for (int c = 0; c < 3; ++c) scale(u.comp(c), 1.0 / dt);
        return u;
    };
    const VectorField q1 = quotient(0.08);
    const VectorField q2 = quotient(0.04);
    const VectorField q3 = quotient(0.02);
    double d12 = 0.0, d23 = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < q1.comp(c).c.size(); ++i) {
            d12 = std::max(d12, std::abs(q1.comp(c).c[i] - q2.comp(c).c[i]));
            d23 = std::max(d23, std::abs(q2.comp(c).c[i] - q3.comp(c).c[i]));
        }
    CHECK(d23 < 0.6 * d12);  // first-order Cauchy decrease
    CHECK(d23 > 0.0);
}

}  // TEST_SUITE
