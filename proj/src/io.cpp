#include "anisolab/io.hpp"

#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anisolab/lp.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

namespace anisolab {

namespace {

using json = nlohmann::ordered_json;

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_exp(double v) { return std::isinf(v) ? "inf" : fmt_g17(v); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const char* where) {
    if (!obj.is_object())
        throw ConfigError(std::string(where) + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok)
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
}

double require_number(const json& obj, const char* key, const char* where) {
    if (!obj.contains(key))
        throw ConfigError(std::string(where) + ": missing key '" + key + "'");
    if (!obj[key].is_number())
        throw ConfigError(std::string(where) + ": '" + key + "' must be a number");
    return obj[key].get<double>();
}

double parse_exponent(const json& v, const char* where) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kInf;
        throw ConfigError(std::string(where) + ": exponent string must be \"inf\"");
    }
    if (!v.is_number())
        throw ConfigError(std::string(where) + ": exponent must be number or \"inf\"");
    const double x = v.get<double>();
    if (x < 1.0)
        throw ConfigError(std::string(where) + ": exponent must be >= 1");
    return x;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(root, {"grid", "time", "ic", "norms", "fit", "smallness_delta"},
               "config");
    RunConfig cfg;
    if (!root.contains("grid")) throw ConfigError("config: missing 'grid'");
    {
        const json& g = root["grid"];
        check_keys(g, {"L", "N", "Z", "M", "dealias_fraction"}, "config.grid");
        const double frac = g.contains("dealias_fraction")
                                ? require_number(g, "dealias_fraction", "config.grid")
                                : 2.0 / 3.0;
        try {
            cfg.grid = make_grid(require_number(g, "L", "config.grid"),
                                 static_cast<int>(require_number(g, "N", "config.grid")),
                                 require_number(g, "Z", "config.grid"),
                                 static_cast<int>(require_number(g, "M", "config.grid")),
                                 frac);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config.grid: ") + e.what());
        }
    }
    if (root.contains("time")) {
        const json& t = root["time"];
        check_keys(t, {"dt", "t_max", "save_every"}, "config.time");
        cfg.has_time = true;
        cfg.dt = require_number(t, "dt", "config.time");
        cfg.t_max = require_number(t, "t_max", "config.time");
        cfg.save_every =
            t.contains("save_every")
                ? static_cast<int>(require_number(t, "save_every", "config.time"))
                : 1;
        if (cfg.dt <= 0.0 || cfg.t_max < cfg.dt || cfg.save_every < 1)
            throw ConfigError("config.time: need dt > 0, t_max >= dt, save_every >= 1");
    }
    if (root.contains("ic")) {
        const json& ic = root["ic"];
        check_keys(ic, {"profile", "amplitude", "seed"}, "config.ic");
        cfg.has_ic = true;
        if (!ic.contains("profile") || !ic["profile"].is_string())
            throw ConfigError("config.ic: 'profile' must be a string");
        try {
            cfg.profile = parse_ic_profile(ic["profile"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config.ic: ") + e.what());
        }
        cfg.amplitude = require_number(ic, "amplitude", "config.ic");
        if (cfg.amplitude < 0.0)
            throw ConfigError("config.ic: amplitude must be >= 0");
        const double seed = require_number(ic, "seed", "config.ic");
        if (seed < 0.0 || seed != std::floor(seed))
            throw ConfigError("config.ic: seed must be a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (root.contains("norms")) {
        if (!root["norms"].is_array())
            throw ConfigError("config.norms: expected an array");
        for (const json& n : root["norms"]) {
            check_keys(n, {"component", "p", "q", "alpha"}, "config.norms[]");
            NormRequest r;
            if (!n.contains("component") || !n["component"].is_string())
                throw ConfigError("config.norms[]: 'component' must be a string");
            const std::string comp = n["component"].get<std::string>();
            if (comp == "horizontal")
                r.component = FlowComponent::horizontal;
            else if (comp == "vertical")
                r.component = FlowComponent::vertical;
            else
                throw ConfigError(
                    "config.norms[]: component must be 'horizontal' or 'vertical'");
            if (!n.contains("p") || !n.contains("q"))
                throw ConfigError("config.norms[]: missing 'p' or 'q'");
            r.p = parse_exponent(n["p"], "config.norms[]");
            r.q = parse_exponent(n["q"], "config.norms[]");
            if (n.contains("alpha")) {
                const json& a = n["alpha"];
                if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
                    !a[1].is_number_integer())
                    throw ConfigError(
                        "config.norms[]: alpha must be [alpha_h, alpha_3]");
                r.alpha_h = a[0].get<int>();
                r.alpha_3 = a[1].get<int>();
                if (r.alpha_h < 0 || r.alpha_3 < 0 || r.alpha_h + r.alpha_3 > 1)
                    throw ConfigError("config.norms[]: |alpha| must be <= 1");
            }
            cfg.norms.push_back(r);
        }
    }
    if (root.contains("fit")) {
        const json& f = root["fit"];
        check_keys(f, {"t0", "t1", "tolerance"}, "config.fit");
        cfg.has_fit = true;
        cfg.fit_t0 = require_number(f, "t0", "config.fit");
        cfg.fit_t1 = require_number(f, "t1", "config.fit");
        if (f.contains("tolerance"))
            cfg.fit_tolerance = require_number(f, "tolerance", "config.fit");
        if (!(cfg.fit_t0 < cfg.fit_t1) || cfg.fit_tolerance <= 0.0)
            throw ConfigError("config.fit: need t0 < t1 and tolerance > 0");
    }
    if (root.contains("smallness_delta")) {
        cfg.smallness_delta = require_number(root, "smallness_delta", "config");
        if (cfg.smallness_delta <= 0.0)
            throw ConfigError("config: smallness_delta must be > 0");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string component_name(FlowComponent c) {
    return c == FlowComponent::horizontal ? "horizontal" : "vertical";
}

}  // namespace

void write_norms_csv(const std::string& path,
                     const std::vector<NormSeries>& series) {
    for (const NormSeries& s : series)
        if (!std::isnan(s.spec.sigma))
            throw std::invalid_argument(
                "write_norms_csv: Chemin-Lerner series not representable");
    std::size_t n = 0;
    for (const NormSeries& s : series) n = std::max(n, s.samples.size());
    std::ostringstream out;
    out << "t,component,p,q,alpha_h,alpha_3,value\n";
    for (std::size_t i = 0; i < n; ++i)
        for (const NormSeries& s : series) {
            if (i >= s.samples.size()) continue;
            const auto& [t, v] = s.samples[i];
            out << fmt_g17(t) << ',' << component_name(s.spec.component) << ','
                << fmt_exp(s.spec.p) << ',' << fmt_exp(s.spec.q) << ','
                << s.spec.alpha_h << ',' << s.spec.alpha_3 << ',' << fmt_g17(v)
                << '\n';
        }
    atomic_write_file(path, out.str());
}

std::vector<NormSeries> read_norms_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_norms_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "t,component,p,q,alpha_h,alpha_3,value")
        throw std::runtime_error("read_norms_csv: bad header");
    auto parse_double = [](const std::string& s, const char* what) {
        if (s == "inf") return kInf;
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || s.empty())
            throw std::runtime_error(std::string("read_norms_csv: bad ") + what +
                                     " field '" + s + "'");
        return v;
    };
    std::vector<NormSeries> series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        while (true) {
            const std::size_t c = line.find(',', pos);
            f.push_back(line.substr(pos, c - pos));
            if (c == std::string::npos) break;
            pos = c + 1;
        }
        if (f.size() != 7) throw std::runtime_error("read_norms_csv: bad row");
        NormRequest spec;
        if (f[1] == "horizontal")
            spec.component = FlowComponent::horizontal;
        else if (f[1] == "vertical")
            spec.component = FlowComponent::vertical;
        else
            throw std::runtime_error("read_norms_csv: bad component");
        spec.p = parse_double(f[2], "p");
        spec.q = parse_double(f[3], "q");
        spec.alpha_h = static_cast<int>(parse_double(f[4], "alpha_h"));
        spec.alpha_3 = static_cast<int>(parse_double(f[5], "alpha_3"));
        const double t = parse_double(f[0], "t");
        const double v = parse_double(f[6], "value");
        NormSeries* dst = nullptr;
        for (NormSeries& s : series)
            if (s.spec.component == spec.component && s.spec.p == spec.p &&
                s.spec.q == spec.q && s.spec.alpha_h == spec.alpha_h &&
                s.spec.alpha_3 == spec.alpha_3)
                dst = &s;
        if (!dst) {
            series.push_back({spec, {}});
            dst = &series.back();
        }
        dst->samples.emplace_back(t, v);
    }
    if (series.empty()) throw std::runtime_error("read_norms_csv: no data rows");
    return series;
}

namespace {

template <typename T>
void put_raw(std::string& out, const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    out.append(p, sizeof(T));
}

template <typename T>
T get_raw(const std::string& in, std::size_t& off) {
    if (off + sizeof(T) > in.size())
        throw std::runtime_error("checkpoint: truncated file");
    T v;
    std::memcpy(&v, in.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const VectorField& u, double t) {
    const GridSpec& g = u.grid;
    std::string out;
    out.reserve(64 + 3 * g.size() * 2 * sizeof(double));
    out.append("ANS1", 4);
    put_raw<std::uint32_t>(out, 1);
    put_raw<double>(out, g.L);
    put_raw<std::uint32_t>(out, static_cast<std::uint32_t>(g.N));
    put_raw<double>(out, g.Z);
    put_raw<std::uint32_t>(out, static_cast<std::uint32_t>(g.M));
    put_raw<double>(out, g.dealias_fraction);
    put_raw<std::uint32_t>(out, 3);
    put_raw<double>(out, t);
    for (int c = 0; c < 3; ++c)
        for (const cplx& z : u.comp(c).c) {
            put_raw<double>(out, z.real());
            put_raw<double>(out, z.imag());
        }
    atomic_write_file(path, out);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    std::size_t off = 0;
    if (data.size() < 4 || data.compare(0, 4, "ANS1") != 0)
        throw std::runtime_error("checkpoint: bad magic");
    off = 4;
    if (get_raw<std::uint32_t>(data, off) != 1)
        throw std::runtime_error("checkpoint: unsupported version");
    const double L = get_raw<double>(data, off);
    const int N = static_cast<int>(get_raw<std::uint32_t>(data, off));
    const double Z = get_raw<double>(data, off);
    const int M = static_cast<int>(get_raw<std::uint32_t>(data, off));
    const double frac = get_raw<double>(data, off);
    if (get_raw<std::uint32_t>(data, off) != 3)
        throw std::runtime_error("checkpoint: unexpected component count");
    Checkpoint ck;
    ck.t = get_raw<double>(data, off);
    ck.u = VectorField(make_grid(L, N, Z, M, frac));
    for (int c = 0; c < 3; ++c)
        for (cplx& z : ck.u.comp(c).c) {
            const double re = get_raw<double>(data, off);
            const double im = get_raw<double>(data, off);
            z = cplx(re, im);
        }
    if (off != data.size())
        throw std::runtime_error("checkpoint: trailing bytes");
    return ck;
}

namespace {

json fit_to_json(const NormRequest& spec, const FitResult& fit) {
    json j;
    j["component"] = component_name(spec.component);
    j["p"] = fmt_exp(spec.p);
    j["q"] = fmt_exp(spec.q);
    j["alpha_h"] = spec.alpha_h;
    j["alpha_3"] = spec.alpha_3;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["t0"] = fit.t0;
    j["t1"] = fit.t1;
    return j;
}

}  // namespace

int run_simulate(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = load_config(config_path);
    if (!cfg.has_time || !cfg.has_ic)
        throw ConfigError("simulate: config requires 'time' and 'ic' sections");
    const VectorField u0 =
        make_divfree_ic(cfg.grid, cfg.seed, cfg.amplitude, cfg.profile);
    std::filesystem::create_directories(out_dir);

    IntegratorConfig icfg;
    icfg.dt = cfg.dt;
    icfg.t_max = cfg.t_max;
    icfg.save_every = cfg.save_every;
    icfg.smallness_delta = cfg.smallness_delta;
    icfg.store_states = false;
    auto save_ckpt = [&](double t, const VectorField& u) {
        char name[64];
        std::snprintf(name, sizeof name, "ckpt_%.6g.ans", t);
        write_checkpoint(out_dir + "/" + name, u, t);
    };
    const IntegrateResult res = integrate(u0, icfg, cfg.norms, save_ckpt);

    write_norms_csv(out_dir + "/norms.csv", res.series);

    double max_div = 0.0, max_bc = 0.0;
    for (const StepMeta& m : res.traj.step_meta) {
        max_div = std::max(max_div, m.div_residual);
        max_bc = std::max(max_bc, m.bc_residual);
    }
    const bool residuals_pass = max_div < 1e-5 && max_bc < 1e-5;

    bool fits_pass = true;
    json fits = json::array();
    for (const NormSeries& s : res.series) {
        json j;
        bool fitted = false;
        if (cfg.has_fit) {
            bool positive = !s.samples.empty();
            int inside = 0;
            for (const auto& [t, v] : s.samples)
                if (t > cfg.fit_t0 && t < cfg.fit_t1) {
                    ++inside;
                    positive = positive && v > 0.0;
                }
            if (positive && inside >= 8) {
                const FitResult fit = fit_exponent(s, cfg.fit_t0, cfg.fit_t1);
                j = fit_to_json(s.spec, fit);
                RateQuery rq;
                rq.component = s.spec.component;
                rq.p = s.spec.p;
                rq.q = s.spec.q;
                rq.alpha_h = s.spec.alpha_h;
                rq.alpha_3 = s.spec.alpha_3;
                const auto rate = theoretical_exponent(rq);
                j["covered"] = rate.has_value();
                if (rate) {
                    j["theoretical"] = -*rate;
                    j["pass"] = std::abs(fit.slope + *rate) <= cfg.fit_tolerance;
                    fits_pass = fits_pass && j["pass"].get<bool>();
                }
                fitted = true;
            }
        }
        if (!fitted) {
            j["component"] = component_name(s.spec.component);
            j["p"] = fmt_exp(s.spec.p);
            j["q"] = fmt_exp(s.spec.q);
            j["alpha_h"] = s.spec.alpha_h;
            j["alpha_3"] = s.spec.alpha_3;
            j["skipped"] = true;
        }
        fits.push_back(j);
    }

    const bool pass = residuals_pass && fits_pass && !res.blew_up;
    json report;
    report["pass"] = pass;
    report["blew_up"] = res.blew_up;
    report["max_div_residual"] = max_div;
    report["max_bc_residual"] = max_bc;
    report["residuals_pass"] = residuals_pass;
    report["fits"] = fits;
    atomic_write_file(out_dir + "/report.json", report.dump(2) + "\n");

    if (res.blew_up) return 3;
    return pass ? 0 : 1;
}

int run_decay_fit(const std::string& csv_path, double t0, double t1) {
    std::vector<NormSeries> series;
    try {
        series = read_norms_csv(csv_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "decay-fit: %s\n", e.what());
        return 2;
    }
    try {
        for (const NormSeries& s : series) {
            const FitResult fit = fit_exponent(s, t0, t1);
            std::printf("%s\n", fit_to_json(s.spec, fit).dump().c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "decay-fit: %s\n", e.what());
        return 2;
    }
    return 0;
}

int run_verify_ops(std::uint64_t seed, int trials) {
    OperatorBoundsReport rep;
    try {
        rep = verify_operator_bounds(seed, trials);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "verify-ops: %s\n", e.what());
        return 2;
    }
    const double oracle_err = kernel_oracle_max_error();
    const bool oracle_pass = oracle_err < 1e-8;
    json out;
    out["seed"] = seed;
    out["trials"] = trials;
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json j;
        j["op"] = r.op;
        j["max_ratio"] = r.max_ratio;
        j["bound"] = r.bound;
        j["pass"] = r.pass;
        rows.push_back(j);
    }
    out["ratios"] = rows;
    out["kernel_oracle_max_error"] = oracle_err;
    out["kernel_oracle_pass"] = oracle_pass;
    out["pass"] = rep.pass && oracle_pass;
    std::printf("%s\n", out.dump(2).c_str());
    return (rep.pass && oracle_pass) ? 0 : 1;
}

int run_lp_check(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const GridSpec& g = cfg.grid;
    const DyadicPartition part = build_partition(g);
    const bool corrupt = std::getenv("ANISOLAB_LP_CORRUPT") != nullptr;

    // Partition of unity over all grid radii plus a dense log sweep.
    std::vector<double> radii;
    for (int i1 = 0; i1 < g.N; ++i1)
        for (int i2 = 0; i2 < g.N; ++i2)
            if (g.b_of(i1, i2) > 0.0) radii.push_back(g.b_of(i1, i2));
    {
        // The low remainder + shell sum telescopes to chi(2^{-(j_max+1)} r),
        // which is exactly 1 up to r = 3/4 * 2^{j_max+1}; beyond that the
        // partition rolls off by construction, so the sweep stops there.
        const double lo = std::pow(2.0, part.j_min - 1);
        const double hi = 0.75 * std::pow(2.0, part.j_max + 1);
        for (int i = 0; i <= 2000; ++i)
            radii.push_back(lo * std::pow(hi / lo, i / 2000.0));
    }
    double max_dev = 0.0;
    for (double r : radii) {
        double s = chi_bump(std::pow(2.0, -part.j_min) * r);
        for (int j = part.j_min; j <= part.j_max; ++j) {
            // Fault-injection hook: a corrupted shell profile must be caught.
            const double arg = std::pow(2.0, -j) * r *
                               (corrupt && j == part.j_min + 1 ? 1.01 : 1.0);
            s += phi_bump(arg);
        }
        max_dev = std::max(max_dev, std::abs(s - 1.0));
    }
    const bool partition_pass = max_dev < 1e-8;

    // Telescoping reconstruction on seeded admissible data.
    const VectorField u =
        make_divfree_ic(g, 12345, 1.0, IcProfile::gaussian_bump);
    SpectralField recon = low_remainder(u.u3, part);
    for (int j = part.j_min; j <= part.j_max; ++j)
        axpy(cplx(1.0), dyadic_block(u.u3, part, j), recon);
    axpy(cplx(-1.0), u.u3, recon);
    const double tele = max_abs(recon) / std::max(max_abs(u.u3), 1e-300);
    const bool tele_pass = tele < 1e-10;

    // Bernstein ratios on the populated shells.
    double max_bern = 0.0;
    const double total = l2_norm(u.u3);
    for (int j = part.j_min + 1; j < part.j_max; ++j) {
        const SpectralField blk = dyadic_block(u.u3, part, j);
        if (l2_norm(blk) < 1e-8 * total) continue;
        max_bern = std::max(max_bern, verify_bernstein(blk, part, j, 0, 0, 1.0, 2.0));
        max_bern = std::max(max_bern, verify_bernstein(blk, part, j, 0, 0, 2.0, kInf));
        max_bern = std::max(max_bern, verify_bernstein(blk, part, j, 1, 0, 2.0, 2.0));
        max_bern = std::max(max_bern, verify_bernstein(blk, part, j, 0, 1, 1.0, kInf));
    }
    const bool bern_pass = max_bern <= 4.0;

    json out;
    out["partition_max_deviation"] = max_dev;
    out["partition_pass"] = partition_pass;
    out["telescoping_residual"] = tele;
    out["telescoping_pass"] = tele_pass;
    out["bernstein_max_ratio"] = max_bern;
    out["bernstein_pass"] = bern_pass;
    const bool pass = partition_pass && tele_pass && bern_pass;
    out["pass"] = pass;
    std::printf("%s\n", out.dump(2).c_str());
    return pass ? 0 : 1;
}

}  // namespace anisolab
