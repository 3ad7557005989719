#include "anisolab/field.hpp"

#include <fftw3.h>

#include <map>
#include <stdexcept>

namespace anisolab {

namespace {

/// Cached FFTW plans for one (N, M) shape.  Plans are created with
/// FFTW_ESTIMATE so planning is deterministic and does not touch the data.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<cplx> buf;  // in-place work buffer, N*N*M
};

PlanPair& plans_for(const GridSpec& g) {
    static std::map<std::pair<int, int>, PlanPair> cache;
    auto key = std::make_pair(g.N, g.M);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    PlanPair p;
    p.buf.resize(g.size());
    int n[2] = {g.N, g.N};
    auto* buf = reinterpret_cast<fftw_complex*>(p.buf.data());
    // howmany = M batched transforms, one per vertical node; the vertical
    // index is the fastest-varying (stride M between horizontal neighbors).
    p.forward = fftw_plan_many_dft(2, n, g.M, buf, nullptr, g.M, 1, buf,
                                   nullptr, g.M, 1, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward = fftw_plan_many_dft(2, n, g.M, buf, nullptr, g.M, 1, buf,
                                    nullptr, g.M, 1, FFTW_BACKWARD, FFTW_ESTIMATE);
    auto [ins, ok] = cache.emplace(key, std::move(p));
    (void)ok;
    return ins->second;
}

}  // namespace

SpectralField to_spectral(const PhysicalField& f) {
    const GridSpec& g = f.grid;
    PlanPair& p = plans_for(g);
    for (std::size_t i = 0; i < f.v.size(); ++i) p.buf[i] = f.v[i];
    fftw_execute(p.forward);

    SpectralField out(g);
    const double inv = 1.0 / (static_cast<double>(g.N) * g.N);
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = p.buf[i] * inv;

    // Enforce Hermitian symmetry exactly: average conjugate pairs.
    const int N = g.N, M = g.M;
    for (int i1 = 0; i1 < N; ++i1) {
        const int j1 = (N - i1) % N;
        for (int i2 = 0; i2 < N; ++i2) {
            const int j2 = (N - i2) % N;
            if (j1 * N + j2 < i1 * N + i2) continue;  // visit each pair once
            for (int m = 0; m < M; ++m) {
                const cplx a = out.at(i1, i2, m);
                const cplx b = out.at(j1, j2, m);
                const cplx avg = 0.5 * (a + std::conj(b));
                out.at(i1, i2, m) = avg;
                out.at(j1, j2, m) = std::conj(avg);
            }
        }
    }
    return out;
}

PhysicalField to_physical(const SpectralField& f) {
    const GridSpec& g = f.grid;
    PlanPair& p = plans_for(g);
    p.buf = f.c;
    fftw_execute(p.backward);
    PhysicalField out(g);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = p.buf[i].real();
    return out;
}

void dealias(SpectralField& f) {
    const GridSpec& g = f.grid;
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            if (g.keep(i1, i2)) continue;
            cplx* col = &f.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) col[m] = 0.0;
        }
}

SpectralField d3(const SpectralField& f) {
    const GridSpec& g = f.grid;
    SpectralField out(g);
    const int M = g.M;
    const double inv2h = 1.0 / (2.0 * g.dz());
    const std::size_t cols = g.horizontal_size();
    for (std::size_t col = 0; col < cols; ++col) {
        const cplx* a = &f.c[col * M];
        cplx* d = &out.c[col * M];
        d[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) * inv2h;
        for (int m = 1; m < M - 1; ++m) d[m] = (a[m + 1] - a[m - 1]) * inv2h;
        d[M - 1] = (3.0 * a[M - 1] - 4.0 * a[M - 2] + a[M - 3]) * inv2h;
    }
    return out;
}

void axpy(cplx a, const SpectralField& x, SpectralField& y) {
    if (x.c.size() != y.c.size())
        throw std::invalid_argument("axpy: shape mismatch");
    for (std::size_t i = 0; i < x.c.size(); ++i) y.c[i] += a * x.c[i];
}

void scale(SpectralField& f, double a) {
    for (auto& v : f.c) v *= a;
}

double max_abs(const SpectralField& f) {
    double m = 0.0;
    for (const auto& v : f.c) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace anisolab
