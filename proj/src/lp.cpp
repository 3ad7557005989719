#include "anisolab/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace anisolab {

double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double chi_bump(double r) {
    return 1.0 - smoothstep((r - 0.75) / (4.0 / 3.0 - 0.75));
}

double phi_bump(double r) { return chi_bump(0.5 * r) - chi_bump(r); }

DyadicPartition build_partition(const GridSpec& grid) {
    const double xi_min = 2.0 * kPi / grid.L;
    const double xi_max = grid.kmax * xi_min * std::sqrt(2.0);
    DyadicPartition part;
    part.j_min = static_cast<int>(std::floor(std::log2(xi_min))) - 1;
    part.j_max = static_cast<int>(std::ceil(std::log2(xi_max))) + 1;
    if (part.shells() < 2)
        throw std::invalid_argument("build_partition: grid hosts < 2 shells");
    return part;
}

SpectralField dyadic_block(const SpectralField& f, const DyadicPartition& part,
                           int j) {
    if (j < part.j_min || j > part.j_max)
        throw std::invalid_argument("dyadic_block: j out of range");
    const GridSpec& g = f.grid;
    SpectralField out(g);
    const double s = std::pow(2.0, -j);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const double w = phi_bump(s * g.b_of(i1, i2));
            if (w == 0.0) continue;
            const cplx* a = &f.at(i1, i2, 0);
            cplx* b = &out.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) b[m] = w * a[m];
        }
    return out;
}

SpectralField low_remainder(const SpectralField& f,
                            const DyadicPartition& part) {
    const GridSpec& g = f.grid;
    SpectralField out(g);
    const double s = std::pow(2.0, -part.j_min);
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const double w = chi_bump(s * g.b_of(i1, i2));
            if (w == 0.0) continue;
            const cplx* a = &f.at(i1, i2, 0);
            cplx* b = &out.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) b[m] = w * a[m];
        }
    return out;
}

namespace {

/// Mixed-norm reduction over a nonnegative magnitude array in field layout.
double reduce_mixed(const GridSpec& g, const std::vector<double>& mag,
                    double p, double q) {
    const std::size_t cols = g.horizontal_size();
    const double wh = g.dx() * g.dx();
    const double h = g.dz();
    std::vector<double> inner(g.M, 0.0);
    if (std::isinf(p)) {
        for (std::size_t col = 0; col < cols; ++col)
            for (int m = 0; m < g.M; ++m)
                inner[m] = std::max(inner[m], mag[col * g.M + m]);
    } else {
        for (std::size_t col = 0; col < cols; ++col)
            for (int m = 0; m < g.M; ++m)
                inner[m] += std::pow(mag[col * g.M + m], p);
        for (int m = 0; m < g.M; ++m) inner[m] = std::pow(inner[m] * wh, 1.0 / p);
    }
    if (std::isinf(q)) {
        double mx = 0.0;
        for (int m = 0; m < g.M; ++m) mx = std::max(mx, inner[m]);
        return mx;
    }
    double acc = 0.0;
    for (int m = 0; m < g.M; ++m) {
        const double w = (m == 0 || m == g.M - 1) ? 0.5 * h : h;
        acc += std::pow(inner[m], q) * w;
    }
    return std::pow(acc, 1.0 / q);
}

std::vector<double> magnitude(const SpectralField& f) {
    PhysicalField ph = to_physical(f);
    std::vector<double> mag(ph.v.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(ph.v[i]);
    return mag;
}

std::vector<double> magnitude(const VectorField& u) {
    PhysicalField p1 = to_physical(u.u1);
    PhysicalField p2 = to_physical(u.u2);
    PhysicalField p3 = to_physical(u.u3);
    std::vector<double> mag(p1.v.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::sqrt(p1.v[i] * p1.v[i] + p2.v[i] * p2.v[i] +
                           p3.v[i] * p3.v[i]);
    return mag;
}

double combine_lsigma(const std::vector<double>& vals, double sigma) {
    if (std::isinf(sigma)) {
        double mx = 0.0;
        for (double v : vals) mx = std::max(mx, v);
        return mx;
    }
    double acc = 0.0;
    for (double v : vals) acc += std::pow(v, sigma);
    return std::pow(acc, 1.0 / sigma);
}

}  // namespace

double mixed_norm(const SpectralField& f, double p, double q) {
    return reduce_mixed(f.grid, magnitude(f), p, q);
}

double mixed_norm(const VectorField& u, double p, double q) {
    return reduce_mixed(u.grid, magnitude(u), p, q);
}

double chemin_lerner_norm(const SpectralField& f, const DyadicPartition& part,
                          double p, double q, double sigma) {
    std::vector<double> vals;
    vals.reserve(part.shells());
    for (int j = part.j_min; j <= part.j_max; ++j)
        vals.push_back(mixed_norm(dyadic_block(f, part, j), p, q));
    return combine_lsigma(vals, sigma);
}

double chemin_lerner_norm(const VectorField& u, const DyadicPartition& part,
                          double p, double q, double sigma) {
    std::vector<double> vals;
    vals.reserve(part.shells());
    for (int j = part.j_min; j <= part.j_max; ++j) {
        VectorField blk(u.grid);
        blk.u1 = dyadic_block(u.u1, part, j);
        blk.u2 = dyadic_block(u.u2, part, j);
        blk.u3 = dyadic_block(u.u3, part, j);
        vals.push_back(mixed_norm(blk, p, q));
    }
    return combine_lsigma(vals, sigma);
}

namespace {

std::array<double, 9> table_from_magnitude(const GridSpec& g,
                                           const std::vector<double>& mag) {
    const double exps[3] = {1.0, 2.0, kInf};
    std::array<double, 9> out{};
    for (int ip = 0; ip < 3; ++ip)
        for (int iq = 0; iq < 3; ++iq)
            out[3 * ip + iq] = reduce_mixed(g, mag, exps[ip], exps[iq]);
    return out;
}

}  // namespace

std::array<double, 9> mixed_norm_table(const SpectralField& f) {
    return table_from_magnitude(f.grid, magnitude(f));
}

std::array<double, 9> mixed_norm_table(const VectorField& u) {
    return table_from_magnitude(u.grid, magnitude(u));
}

double l2_norm(const SpectralField& f) {
    // Parseval: integral over the box of |f|^2 equals L^2 sum_k |c_k(x3)|^2.
    const GridSpec& g = f.grid;
    const double h = g.dz();
    double acc = 0.0;
    const std::size_t cols = g.horizontal_size();
    for (std::size_t col = 0; col < cols; ++col)
        for (int m = 0; m < g.M; ++m) {
            const double w = (m == 0 || m == g.M - 1) ? 0.5 * h : h;
            acc += std::norm(f.c[col * g.M + m]) * w;
        }
    return std::sqrt(acc * g.L * g.L);
}

double l2_norm(const VectorField& u) {
    const double a = l2_norm(u.u1), b = l2_norm(u.u2), c = l2_norm(u.u3);
    return std::sqrt(a * a + b * b + c * c);
}

namespace {

SpectralField horizontal_derivative(const SpectralField& f, int b1, int b2) {
    const GridSpec& g = f.grid;
    SpectralField out = f;
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            cplx w = 1.0;
            for (int r = 0; r < b1; ++r) w *= cplx(0.0, g.xi(i1));
            for (int r = 0; r < b2; ++r) w *= cplx(0.0, g.xi(i2));
            cplx* a = &out.at(i1, i2, 0);
            for (int m = 0; m < g.M; ++m) a[m] *= w;
        }
    return out;
}

}  // namespace

double xs_norm(const VectorField& u, int s, const DyadicPartition& part) {
    if (s < 0) throw std::invalid_argument("xs_norm: s must be >= 0");
    if (s >= u.grid.M)
        throw std::invalid_argument("xs_norm: s exceeds vertical resolution");
    double hs_sq = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
        SpectralField vert = u.comp(comp);
        for (int b3 = 0; b3 <= s; ++b3) {
            if (b3 > 0) vert = d3(vert);
            for (int b1 = 0; b1 + b3 <= s; ++b1)
                for (int b2 = 0; b1 + b2 + b3 <= s; ++b2) {
                    const double v = l2_norm(horizontal_derivative(vert, b1, b2));
                    hs_sq += v * v;
                }
        }
    }
    double cl = 0.0;
    VectorField du(u.grid);
    du.u1 = d3(u.u1);
    du.u2 = d3(u.u2);
    du.u3 = d3(u.u3);
    for (const VectorField* v : {&u, const_cast<const VectorField*>(&du)}) {
        cl += chemin_lerner_norm(*v, part, 1.0, 1.0, kInf);
        cl += chemin_lerner_norm(*v, part, 1.0, kInf, kInf);
    }
    return std::sqrt(hs_sq) + cl;
}

double verify_bernstein(const SpectralField& f, const DyadicPartition& part,
                        int j, int a1, int a2, double p, double q) {
    const GridSpec& g = f.grid;
    if (j < part.j_min || j > part.j_max)
        throw std::invalid_argument("verify_bernstein: j out of range");
    // Shell support check: no mass outside [3/4 * 2^j, 8/3 * 2^j].
    const double lo = 0.75 * std::pow(2.0, j), hi = 8.0 / 3.0 * std::pow(2.0, j);
    double outside = 0.0, total = 0.0;
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2) {
            const double b = g.b_of(i1, i2);
            const cplx* a = &f.at(i1, i2, 0);
            double mass = 0.0;
            for (int m = 0; m < g.M; ++m) mass += std::norm(a[m]);
            total += mass;
            if (b < lo - 1e-12 || b > hi + 1e-12) outside += mass;
        }
    if (total == 0.0) return 0.0;
    if (outside > 1e-20 * total)
        throw std::invalid_argument("verify_bernstein: field not shell-supported");

    SpectralField df = horizontal_derivative(f, a1, a2);
    PhysicalField pf = to_physical(f);
    PhysicalField pdf = to_physical(df);

    const double wh = g.dx() * g.dx();
    const double factor =
        std::pow(2.0, j * ((a1 + a2) + 2.0 * (1.0 / p - 1.0 / q)));
    const std::size_t cols = g.horizontal_size();
    double ratio = 0.0;
    for (int m = 0; m < g.M; ++m) {
        double den = 0.0, num = 0.0;
        if (std::isinf(p)) {
            for (std::size_t col = 0; col < cols; ++col)
                den = std::max(den, std::abs(pf.v[col * g.M + m]));
        } else {
            for (std::size_t col = 0; col < cols; ++col)
                den += std::pow(std::abs(pf.v[col * g.M + m]), p);
            den = std::pow(den * wh, 1.0 / p);
        }
        if (std::isinf(q)) {
            for (std::size_t col = 0; col < cols; ++col)
                num = std::max(num, std::abs(pdf.v[col * g.M + m]));
        } else {
            for (std::size_t col = 0; col < cols; ++col)
                num += std::pow(std::abs(pdf.v[col * g.M + m]), q);
            num = std::pow(num * wh, 1.0 / q);
        }
        if (den > 1e-300) ratio = std::max(ratio, num / (factor * den));
    }
    return ratio;
}

}  // namespace anisolab
