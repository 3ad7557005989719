#include <doctest.h>

#include <cmath>

#include "anisolab/decay.hpp"
#include "anisolab/lp.hpp"

using namespace anisolab;

namespace {

NormSeries power_law(double slope, double scale, int n, double t0, double t1) {
    NormSeries s;
    for (int i = 0; i < n; ++i) {
        const double t = t0 * std::pow(t1 / t0, double(i) / (n - 1));
        s.samples.emplace_back(t, scale * std::pow(t, slope));
    }
    return s;
}

}  // namespace

TEST_SUITE("decay") {

TEST_CASE("theoretical_exponent: pinned values and coverage") {
    auto rate = [](FlowComponent c, double p, double q, int ah) {
        RateQuery rq;
        rq.component = c;
        rq.p = p;
        rq.q = q;
        rq.alpha_h = ah;
        return theoretical_exponent(rq);
    };
    CHECK(rate(FlowComponent::horizontal, 2, 2, 0).value() ==
          doctest::Approx(0.5));
    CHECK(rate(FlowComponent::vertical, kInf, kInf, 0).value() ==
          doctest::Approx(1.5));
    CHECK(!rate(FlowComponent::horizontal, 1, 1, 0).has_value());
    CHECK(rate(FlowComponent::vertical, 1, kInf, 1).value() ==
          doctest::Approx(1.0));
    CHECK(rate(FlowComponent::vertical, 2, 2, 0).value() ==
          doctest::Approx(0.75));
    CHECK(rate(FlowComponent::horizontal, kInf, 2, 0).value() ==
          doctest::Approx(1.0));
    // Vertical queries with a vertical derivative are outside the table.
    RateQuery bad;
    bad.component = FlowComponent::vertical;
    bad.alpha_3 = 1;
    CHECK(!theoretical_exponent(bad).has_value());
}

TEST_CASE("rate-table identities: p-monotone; vertical gap = (1-1/q)/2") {
    const double ps[] = {1.0, 1.5, 2.0, 4.0, kInf};
    for (double q : {2.0, 4.0, kInf})
        for (int ah : {0, 1}) {
            double prev = -1.0;
            for (double p : ps) {
                RateQuery h{FlowComponent::horizontal, p, q, ah, 0};
                RateQuery v{FlowComponent::vertical, p, q, ah, 0};
                const auto rh = theoretical_exponent(h);
                const auto rv = theoretical_exponent(v);
                if (rh && rv) {
                    const double gap = 0.5 * (1.0 - (std::isinf(q) ? 0.0
                                                                   : 1.0 / q));
                    CHECK(*rv - *rh == doctest::Approx(gap).epsilon(1e-12));
                }
                if (rh) {
                    CHECK(*rh >= prev - 1e-12);
                    prev = *rh;
                }
            }
        }
}

TEST_CASE("fit_exponent: exact power law, constant, perturbed") {
    const NormSeries s = power_law(-0.75, 3.0, 20, 1.0, 100.0);
    const FitResult f = fit_exponent(s, 2.0, 80.0);
    CHECK(std::abs(f.slope + 0.75) < 1e-12);
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    NormSeries c;
    for (int i = 0; i < 20; ++i) c.samples.emplace_back(1.0 + i, 2.5);
    const FitResult fc = fit_exponent(c, 2.0, 19.0);
    CHECK(fc.slope == 0.0);
    CHECK(fc.r_squared == 1.0);

    NormSeries pert;
    for (int i = 0; i < 40; ++i) {
        const double t = std::pow(10.0, i / 13.0);
        pert.samples.emplace_back(
            t, (1.0 + 0.01 * std::sin(std::log(t))) / t);
    }
    const FitResult fp = fit_exponent(pert, 1.5, 800.0);
    CHECK(std::abs(fp.slope + 1.0) < 0.01);
}

TEST_CASE("fit_exponent preconditions") {
    const NormSeries s = power_law(-1.0, 1.0, 6, 1.0, 10.0);
    CHECK_THROWS_AS(fit_exponent(s, 1.0, 10.0), std::invalid_argument);
    NormSeries neg = power_law(-1.0, 1.0, 20, 1.0, 10.0);
    neg.samples[5].second = -1.0;
    CHECK_THROWS_AS(fit_exponent(neg, 1.0, 10.0), std::invalid_argument);
}

TEST_CASE("fit_exponent is bit-exactly scale invariant under powers of two") {
    NormSeries s = power_law(-1.3, 1.0, 30, 1.0, 50.0);
    const FitResult a = fit_exponent(s, 1.5, 45.0);
    for (auto& [t, v] : s.samples) v *= 1024.0;
    const FitResult b = fit_exponent(s, 1.5, 45.0);
    CHECK(a.slope == b.slope);  // bit-identical
    CHECK(b.intercept != a.intercept);
}

TEST_CASE("linear campaign on a desk-sized grid reproduces the rates") {
    // Small, fast configuration: L=64 keeps the window t in [4, 36] inside
    // the box-saturation bound (L/8)^2 = 64.
    LinearCampaignConfig cfg;
    cfg.grid = make_grid(64.0, 64, 24.0, 48);
    cfg.seed = 20240817;
    cfg.envelope_width = 0.7;
    FitWindow win;
    win.t0 = 4.0;
    win.t1 = 36.0;
    win.samples = 12;
    win.tolerance = 0.15;
    std::vector<RateQuery> queries{
        {FlowComponent::vertical, 2.0, 2.0, 0, 0},
        {FlowComponent::horizontal, 2.0, 2.0, 0, 0},
        {FlowComponent::horizontal, 1.0, 1.0, 0, 0},  // uncovered, vacuous
    };
    const CampaignReport rep = run_linear_campaign(cfg, queries, win);
    CHECK(rep.results.size() == 3);
    CHECK(rep.results[0].covered);
    CHECK(std::abs(rep.results[0].fit.slope + 0.75) < 0.15);
    CHECK(rep.results[1].covered);
    CHECK(std::abs(rep.results[1].fit.slope + 0.5) < 0.15);
    CHECK(!rep.results[2].covered);
    CHECK(rep.results[2].pass);  // vacuous
    CHECK(rep.pass);
    CHECK(rep.max_div_residual < 1e-6);
    CHECK(rep.max_bc_residual < 1e-6);
}

TEST_CASE("linear campaign rejects windows past box saturation") {
    LinearCampaignConfig cfg;
    cfg.grid = make_grid(16.0, 32, 8.0, 24);
    FitWindow win;  // [5, 50] but (L/8)^2 = 4
    CHECK_THROWS_AS(run_linear_campaign(cfg, {}, win), std::invalid_argument);
}

TEST_CASE("campaign reports are deterministic given seed and config") {
    LinearCampaignConfig cfg;
    cfg.grid = make_grid(64.0, 32, 16.0, 24);
    cfg.seed = 99;
    FitWindow win;
    win.t0 = 4.0;
    win.t1 = 36.0;
    win.samples = 12;
    std::vector<RateQuery> q{{FlowComponent::vertical, 2.0, 2.0, 0, 0}};
    const CampaignReport a = run_linear_campaign(cfg, q, win);
    const CampaignReport b = run_linear_campaign(cfg, q, win);
    CHECK(a.results[0].fit.slope == b.results[0].fit.slope);  // bit-identical
}

TEST_CASE("verify_operator_bounds passes on a reduced corpus") {
    const OperatorBoundsReport rep = verify_operator_bounds(20240817, 20);
    CHECK(rep.pass);
    CHECK(!rep.rows.empty());
    double u_ratio = -1.0;
    for (const auto& row : rep.rows) {
        CHECK(row.pass);
        CHECK(row.max_ratio <= row.bound);
        if (row.op == "U") u_ratio = row.max_ratio;
    }
    CHECK(u_ratio >= 0.0);
    CHECK(u_ratio <= 2.0);
    CHECK_THROWS_AS(verify_operator_bounds(1, 0), std::invalid_argument);
}

TEST_CASE("kernel quadrature matches closed forms to 1e-8") {
    CHECK(kernel_oracle_max_error() < 1e-8);
}

}  // TEST_SUITE
