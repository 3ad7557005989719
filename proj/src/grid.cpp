#include "anisolab/grid.hpp"

namespace anisolab {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

GridSpec make_grid(double L, int N, double Z, int M, double dealias_fraction) {
    if (!is_power_of_two(N) || N < 8)
        throw std::invalid_argument("make_grid: N must be a power of two >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("make_grid: L must be positive");
    if (!(Z > 0.0)) throw std::invalid_argument("make_grid: Z must be positive");
    if (M < 4) throw std::invalid_argument("make_grid: M must be >= 4");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
        throw std::invalid_argument("make_grid: dealias_fraction must be in (0, 1]");

    GridSpec g;
    g.L = L;
    g.N = N;
    g.Z = Z;
    g.M = M;
    g.dealias_fraction = dealias_fraction;
    g.kmax = static_cast<int>(std::floor(dealias_fraction * (N / 2)));
    return g;
}

}  // namespace anisolab
