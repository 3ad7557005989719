#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace anisolab {

inline constexpr double kPi = 3.14159265358979323846;

/// Discretization of the half-space: horizontal periodic box of side L with
/// N samples per axis, vertical ray truncated at height Z with M uniform
/// nodes.  Node 0 sits on the boundary x3 = 0.
struct GridSpec {
    double L = 0.0;               ///< horizontal period length
    int N = 0;                    ///< horizontal samples per axis (power of two)
    double Z = 0.0;               ///< vertical truncation height
    int M = 0;                    ///< vertical node count
    double dealias_fraction = 2.0 / 3.0;
    int kmax = 0;                 ///< max retained |k| per axis after dealiasing

    double dx() const { return L / N; }
    double dz() const { return Z / (M - 1); }
    double x3(int m) const { return m * dz(); }

    /// Signed integer wavenumber for storage index i in [0, N):
    /// k in {-N/2+1, ..., N/2}.
    int k_of(int i) const { return (i <= N / 2) ? i : i - N; }

    /// Angular wavenumber along one axis for storage index i.
    double xi(int i) const { return 2.0 * kPi * k_of(i) / L; }

    /// |xi_h| for the mode at storage indices (i1, i2).
    double b_of(int i1, int i2) const {
        const double a = xi(i1), b = xi(i2);
        return std::sqrt(a * a + b * b);
    }

    bool keep(int i1, int i2) const {
        return std::abs(k_of(i1)) <= kmax && std::abs(k_of(i2)) <= kmax;
    }

    std::size_t horizontal_size() const {
        return static_cast<std::size_t>(N) * N;
    }
    std::size_t size() const { return horizontal_size() * M; }

    bool operator==(const GridSpec&) const = default;
};

/// Validates parameters and precomputes the dealias cutoff.
/// Throws std::invalid_argument on bad input.
GridSpec make_grid(double L, int N, double Z, int M,
                   double dealias_fraction = 2.0 / 3.0);

}  // namespace anisolab
