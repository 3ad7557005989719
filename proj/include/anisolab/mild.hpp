#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anisolab/stokes.hpp"

namespace anisolab {

enum class FlowComponent { horizontal, vertical };

/// A norm to record along a run: mixed L^q_{x3} L^p_{xh} norm of the
/// horizontal pair (u1, u2) or of u3, optionally after one horizontal
/// derivative (realized as the radial multiplier |grad_h|) and/or one
/// vertical finite-difference derivative.  A finite/inf sigma switches to
/// the Chemin-Lerner norm with that dyadic summation exponent; NaN (the
/// default) means the plain mixed norm.
struct NormRequest {
    FlowComponent component = FlowComponent::vertical;
    double p = 2.0;
    double q = 2.0;
    int alpha_h = 0;
    int alpha_3 = 0;
    double sigma = std::numeric_limits<double>::quiet_NaN();
};

/// Sampled time series of one recorded norm.
struct NormSeries {
    NormRequest spec;
    std::vector<std::pair<double, double>> samples;  ///< (t, value), t increasing
};

double evaluate_norm(const VectorField& u, const NormRequest& r);

struct IntegratorConfig {
    double dt = 0.0;
    double t_max = 0.0;
    int picard_iters = 2;        ///< >= 1; >= 2 gives a second-order step
    bool dealias = true;
    double smallness_delta = 1e-2;  ///< warn-only bound on the initial X^1 norm
    int save_every = 1;          ///< record norms / store state every k-th step
    bool store_states = true;    ///< keep full states (memory-heavy on big grids)
};

struct StepMeta {
    int picard_iters = 0;
    double div_residual = 0.0;
    double bc_residual = 0.0;
};

struct Trajectory {
    std::vector<double> times;         ///< saved times, starting at 0
    std::vector<VectorField> states;   ///< aligned with times when stored
    std::vector<StepMeta> step_meta;   ///< one entry per time step taken
};

struct IntegrateResult {
    Trajectory traj;
    std::vector<NormSeries> series;
    bool blew_up = false;
};

/// Signals Picard-iterate divergence (> 10x norm growth within one step).
struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Nonlinear flux f = -u (x) u, computed pointwise in physical space and
/// dealiased by the 2/3 mask on re-transformation.
ForceTensor momentum_flux(const VectorField& u);

/// One mild step: v0 = stokes_forced_step(u, momentum_flux(u), dt), then
/// Picard midpoint corrections v <- stokes_forced_step(u,
/// momentum_flux((u + v)/2), dt).  Throws BlowUpError on runaway growth.
VectorField mild_step(const VectorField& u, const IntegratorConfig& cfg);

/// Fixed-step march to t_max.  Norms are recorded (and states stored, if
/// enabled) at t = 0 and after every save_every-th step; on_save, when set,
/// is invoked at each save point (e.g. for checkpointing without keeping
/// states in memory).  A blow-up aborts the march and returns the partial
/// result with blew_up set.
IntegrateResult integrate(
    const VectorField& u0, const IntegratorConfig& cfg,
    const std::vector<NormRequest>& requests,
    const std::function<void(double, const VectorField&)>& on_save = {});

/// Max over saved times of the relative defect in the energy equality
///   ||u(t)||_2^2 + 2 int_0^t ||grad_h u||_2^2 = ||u0||_2^2
/// with trapezoid time quadrature over the saved states.  Zero IC gives 0.
double energy_ledger(const Trajectory& traj);

/// Relative residual of the pressure-eliminated equation at an interior
/// saved time t: central time difference, spectral Lap_h, flux divergence,
/// then removal of the gradient part (Leray projection with a per-mode
/// vertical Poisson solve, Neumann condition at the wall).  Normalized by
/// the sum of the three term magnitudes.  Throws at trajectory endpoints.
double pde_residual(const Trajectory& traj, double t);

}  // namespace anisolab
