#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisolab/decay.hpp"

namespace anisolab {

/// Raised on malformed or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full run configuration.  JSON with strict unknown-key rejection:
///   grid:  {L, N, Z, M, dealias_fraction?}          (required)
///   time:  {dt, t_max, save_every?}                 (required by simulate)
///   ic:    {profile, amplitude, seed}               (required by simulate)
///   norms: [{component, p, q, alpha: [ah, a3]}]     (optional)
///   fit:   {t0, t1, tolerance?}                     (optional)
///   smallness_delta: number                         (optional)
/// p and q are numbers or the string "inf".
struct RunConfig {
    GridSpec grid;
    bool has_time = false;
    double dt = 0.0;
    double t_max = 0.0;
    int save_every = 1;
    bool has_ic = false;
    IcProfile profile = IcProfile::gaussian_bump;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    std::vector<NormRequest> norms;
    bool has_fit = false;
    double fit_t0 = 0.0, fit_t1 = 0.0, fit_tolerance = 0.15;
    double smallness_delta = 1e-2;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// norms.csv: header t,component,p,q,alpha_h,alpha_3,value; rows ordered by
/// sample time (outer) then series (inner); doubles as %.17g, infinity as
/// "inf".  Chemin-Lerner series (finite sigma) are not representable in the
/// schema and are rejected.
void write_norms_csv(const std::string& path,
                     const std::vector<NormSeries>& series);
std::vector<NormSeries> read_norms_csv(const std::string& path);

/// Checkpoint: magic "ANS1", u32 version = 1, grid (L f64, N u32, Z f64,
/// M u32, dealias_fraction f64), u32 component count = 3, t f64, then the
/// spectral coefficients of u1, u2, u3 as interleaved re/im f64 in storage
/// order.  Little-endian throughout; round-trips bit-exactly.
struct Checkpoint {
    double t = 0.0;
    VectorField u;
};
void write_checkpoint(const std::string& path, const VectorField& u, double t);
Checkpoint read_checkpoint(const std::string& path);

/// Atomically replaces path with content (write temp + rename).
void atomic_write_file(const std::string& path, const std::string& content);

/// CLI entry points; return process exit codes
/// (0 pass, 1 check failure, 2 config error, 3 blow-up).
int run_simulate(const std::string& config_path, const std::string& out_dir);
int run_decay_fit(const std::string& csv_path, double t0, double t1);
int run_verify_ops(std::uint64_t seed, int trials);
int run_lp_check(const std::string& config_path);

}  // namespace anisolab
