// Command-line front end: Hill/Floquet analysis, stroboscopic trajectories,
// grid propagation and the scattering diagnostics, with deterministic CSV and
// JSON outputs plus a machine-readable manifest per run.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include "floqmag/classical.hpp"
#include "floqmag/config.hpp"
#include "floqmag/hill.hpp"
#include "floqmag/propagator.hpp"
#include "floqmag/scattering.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fm = floqmag;
using nlohmann::json;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::size_t grid_n = 0;  // 0 = keep config value
    double grid_L = 0.0;
};

fm::RunConfig load_config(const Common& c) {
    fm::RunConfig cfg = fm::RunConfig::from_file(c.config_path);
    if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
    if (c.grid_n) cfg.grid.n = c.grid_n;
    if (c.grid_L > 0.0) cfg.grid.half_extent = c.grid_L;
    cfg.grid = fm::GridSpec(cfg.grid.n, cfg.grid.half_extent);  // re-validate
    std::filesystem::create_directories(cfg.output_dir);
#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
    return cfg;
}

// RFC 4180 line endings
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(path, std::ios::binary);
    fm::require(os.good(), "ConfigError", "cannot write " + path);
    os << header << "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << row[i];
        }
        os << "\r\n";
    }
}

void write_manifest(const fm::RunConfig& cfg, const std::string& subcommand,
                    const json& parameters,
                    const std::vector<std::string>& outputs,
                    const std::vector<fm::ExcludedPair>& excluded = {}) {
    json m;
    m["subcommand"] = subcommand;
    m["config_hash"] = cfg.hash();
    m["grid"] = {{"n", cfg.grid.n}, {"L", cfg.grid.half_extent}};
    m["tolerances"] = {{"tau_D", cfg.tolerances.tau_D},
                       {"gamma_min", cfg.tolerances.gamma_min},
                       {"wronskian_tol", cfg.tolerances.wronskian_tol}};
    m["parameters"] = parameters;
    m["outputs"] = outputs;
    json ex = json::array();
    for (const auto& e : excluded)
        ex.push_back({{"tau", e.tau}, {"s", e.s}, {"gamma", e.gamma}});
    m["excluded_caustic_pairs"] = ex;
    std::ofstream os(cfg.output_dir + "/manifest.json", std::ios::binary);
    os << m.dump(2) << "\n";
}

fm::FundamentalPair build_pair(const fm::RunConfig& cfg) {
    return fm::FundamentalPair::integrate(cfg.field, cfg.field.period() / 4096.0,
                                          cfg.tolerances.wronskian_tol);
}

json classify_json(const fm::RunConfig& cfg) {
    const auto pair = build_pair(cfg);
    const auto mono = fm::monodromy(pair);
    const auto sc = fm::classify(mono, cfg.tolerances.tau_D);
    const auto z1 = fm::find_zeros(pair, 1);
    const auto z2 = fm::find_zeros(pair, 2);
    json out;
    out["D"] = sc.discriminant;
    out["regime"] = fm::regime_name(sc.regime);
    if (sc.regime == fm::Regime::Hyperbolic)
        out["lambda"] = sc.floquet_exponent;
    else
        out["lambda"] = nullptr;
    out["zeta2_T"] = mono.phi_T.b;
    out["zeros_zeta1"] = z1.zeros;
    out["zeros_zeta2"] = z2.zeros;
    return out;
}

struct ScanAxis {
    std::string name;
    double start = 0.0, stop = 0.0;
    int count = 0;
};

ScanAxis parse_axis(const std::string& text) {
    ScanAxis ax;
    std::size_t p0 = text.find(':');
    fm::require(p0 != std::string::npos, "ConfigError",
                "scan axis must be name:start:stop:count");
    ax.name = text.substr(0, p0);
    const std::string rest = text.substr(p0 + 1);
    char dummy = 0;
    if (std::sscanf(rest.c_str(), "%lf:%lf:%d%c", &ax.start, &ax.stop, &ax.count,
                    &dummy) != 3 ||
        ax.count < 1)
        fm::fail("ConfigError", "scan axis must be name:start:stop:count");
    return ax;
}

double axis_value(const ScanAxis& ax, int i) {
    if (ax.count == 1) return ax.start;
    return ax.start + (ax.stop - ax.start) * static_cast<double>(i) /
                          static_cast<double>(ax.count - 1);
}

fm::FieldSpec with_param(const fm::FieldSpec& f, const std::string& name,
                         double value) {
    double T = f.period();
    fm::Profile prof = f.profile();
    if (name == "T") {
        T = value;
    } else if (name == "B0") {
        if (auto* c = std::get_if<fm::ConstantProfile>(&prof)) c->B0 = value;
        else if (auto* p = std::get_if<fm::PulsedProfile>(&prof)) p->B0 = value;
        else fm::fail("ConfigError", "profile has no parameter B0");
    } else if (name == "T0") {
        if (auto* p = std::get_if<fm::PulsedProfile>(&prof)) p->T0 = value;
        else fm::fail("ConfigError", "profile has no parameter T0");
    } else if (name == "Bdc") {
        if (auto* s = std::get_if<fm::SinusoidalProfile>(&prof)) s->Bdc = value;
        else fm::fail("ConfigError", "profile has no parameter Bdc");
    } else if (name == "Bac") {
        if (auto* s = std::get_if<fm::SinusoidalProfile>(&prof)) s->Bac = value;
        else fm::fail("ConfigError", "profile has no parameter Bac");
    } else {
        fm::fail("ConfigError", "unknown scan parameter \"" + name + "\"");
    }
    return fm::FieldSpec(T, f.mass(), f.charge(), prof);
}

fm::Vec2 parse_vec2(const std::string& s) {
    double a = 0.0, b = 0.0;
    char dummy = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &a, &b, &dummy) != 2)
        fm::fail("ConfigError", "vector flag must be \"x,y\"");
    return {a, b};
}

int run_cli(int argc, char** argv) {
    CLI::App app{"time-periodic magnetic field toolkit"};
    app.require_subcommand(1);
    Common common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config file")
            ->required();
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--threads", common.threads, "worker threads (0 = auto)");
        sub->add_option("--grid-n", common.grid_n, "grid points per axis");
        sub->add_option("--grid-L", common.grid_L, "grid half extent");
    };

    auto* cmd_classify = app.add_subcommand("classify", "stability classification");
    add_common(cmd_classify);

    auto* cmd_zeros = app.add_subcommand("zeros", "zero sets of the fundamental solutions");
    add_common(cmd_zeros);

    auto* cmd_scan = app.add_subcommand("scan", "stability chart over two parameters");
    add_common(cmd_scan);
    std::string ax1_text, ax2_text;
    cmd_scan->add_option("--param1", ax1_text, "name:start:stop:count")->required();
    cmd_scan->add_option("--param2", ax2_text, "name:start:stop:count")->required();

    auto* cmd_traj = app.add_subcommand("trajectory", "stroboscopic classical trajectory");
    add_common(cmd_traj);
    std::string x0_text = "1,0", p0_text = "0,0";
    long traj_N = 20;
    cmd_traj->add_option("--x0", x0_text, "initial position \"x,y\"");
    cmd_traj->add_option("--p0", p0_text, "initial momentum \"px,py\"");
    cmd_traj->add_option("--N", traj_N, "number of periods");

    auto* cmd_prop = app.add_subcommand("propagate", "evolve a wavefunction");
    add_common(cmd_prop);
    double prop_from = 0.0, prop_to = 0.0, gauss_w = 1.0;
    std::string method = "mehler", input_wfn;
    std::size_t prop_steps = 2048;
    cmd_prop->add_option("--from", prop_from, "initial time");
    cmd_prop->add_option("--to", prop_to, "final time")->required();
    cmd_prop->add_option("--method", method, "mehler or strang");
    cmd_prop->add_option("--steps", prop_steps, "strang steps");
    cmd_prop->add_option("--gaussian-width", gauss_w, "width of the initial gaussian");
    cmd_prop->add_option("--input", input_wfn, "initial state snapshot (.wfn)");

    auto* cmd_disp = app.add_subcommand("dispersive", "dispersive-ratio sweep");
    add_common(cmd_disp);
    int disp_pairs = 50;
    unsigned long long disp_seed = 12345;
    double disp_floor = 0.1;
    cmd_disp->add_option("--pairs", disp_pairs, "number of (tau, s) pairs");
    cmd_disp->add_option("--seed", disp_seed, "sampling seed");
    cmd_disp->add_option("--gamma-floor", disp_floor, "minimum Gamma of sampled pairs");

    auto* cmd_res = app.add_subcommand("resolvent", "singular integrals and series sums");
    add_common(cmd_res);
    double res_p = 6.0;
    long res_nmax = 12;
    cmd_res->add_option("--p", res_p, "integrability exponent");
    cmd_res->add_option("--n-max", res_nmax, "largest period index");

    auto* cmd_cook = app.add_subcommand("cook", "wave-operator existence sums");
    add_common(cmd_cook);
    double cook_p = 6.0, cook_w = 1.0;
    long cook_nmax = 8;
    std::size_t cook_slices = 8;
    cmd_cook->add_option("--p", cook_p, "integrability exponent");
    cmd_cook->add_option("--n-max", cook_nmax, "largest period index");
    cmd_cook->add_option("--slices", cook_slices, "quadrature slices per period");
    cmd_cook->add_option("--gaussian-width", cook_w, "width of the initial gaussian");

    auto* cmd_sigma = app.add_subcommand("sigma-r", "truncated resolvent time integral");
    add_common(cmd_sigma);
    double sig_p = 6.0, sig_lambda = 0.0, sig_tau = 0.0, sig_R = 0.0, sig_ds = 0.0, sig_w = 1.0;
    cmd_sigma->add_option("--p", sig_p, "integrability exponent");
    cmd_sigma->add_option("--lambda-spec", sig_lambda,
                          "real spectral parameter (unimodular phase; no effect on norms)");
    cmd_sigma->add_option("--tau-im", sig_tau, "imaginary shift");
    cmd_sigma->add_option("--R", sig_R, "integration endpoint")->required();
    cmd_sigma->add_option("--dsigma", sig_ds, "panel width (<= T/8)")->required();
    cmd_sigma->add_option("--gaussian-width", sig_w, "width of the initial gaussian");

    auto* cmd_wave = app.add_subcommand("waveop", "wave-operator Cauchy defect");
    add_common(cmd_wave);
    long w_n1 = 1, w_n2 = 2;
    std::string w_scheme = "direct";
    std::size_t w_strang = 2048, w_kicks = 64;
    double w_width = 1.0;
    cmd_wave->add_option("--n1", w_n1, "first period count");
    cmd_wave->add_option("--n2", w_n2, "second period count");
    cmd_wave->add_option("--scheme", w_scheme, "direct or interaction");
    cmd_wave->add_option("--strang-steps", w_strang, "strang steps per period (direct)");
    cmd_wave->add_option("--kicks", w_kicks, "kicks per period (interaction)");
    cmd_wave->add_option("--gaussian-width", w_width, "width of the initial gaussian");

    CLI11_PARSE(app, argc, argv);

    if (cmd_classify->parsed()) {
        const auto cfg = load_config(common);
        const json out = classify_json(cfg);
        const std::string text = out.dump(2);
        std::cout << text << "\n";
        std::ofstream(cfg.output_dir + "/classify.json", std::ios::binary)
            << text << "\n";
        write_manifest(cfg, "classify", json::object(), {"classify.json"});
        return 0;
    }

    if (cmd_zeros->parsed()) {
        const auto cfg = load_config(common);
        const auto pair = build_pair(cfg);
        const auto z1 = fm::find_zeros(pair, 1);
        const auto z2 = fm::find_zeros(pair, 2);
        json out;
        out["zeros_zeta1"] = z1.zeros;
        out["derivatives_zeta1"] = z1.derivative_at_zero;
        out["zeros_zeta2"] = z2.zeros;
        out["derivatives_zeta2"] = z2.derivative_at_zero;
        const std::string text = out.dump(2);
        std::cout << text << "\n";
        std::ofstream(cfg.output_dir + "/zeros.json", std::ios::binary)
            << text << "\n";
        write_manifest(cfg, "zeros", json::object(), {"zeros.json"});
        return 0;
    }

    if (cmd_scan->parsed()) {
        const auto cfg = load_config(common);
        const ScanAxis ax1 = parse_axis(ax1_text), ax2 = parse_axis(ax2_text);
        const int total = ax1.count * ax2.count;
        std::vector<std::vector<std::string>> rows(
            static_cast<std::size_t>(total));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int idx = 0; idx < total; ++idx) {
            const int i = idx / ax2.count, j = idx % ax2.count;
            const double v1 = axis_value(ax1, i), v2 = axis_value(ax2, j);
            const fm::FieldSpec f =
                with_param(with_param(cfg.field, ax1.name, v1), ax2.name, v2);
            const auto pair = fm::FundamentalPair::integrate(
                f, f.period() / 4096.0, cfg.tolerances.wronskian_tol);
            const auto sc =
                fm::classify(fm::monodromy(pair), cfg.tolerances.tau_D);
            rows[static_cast<std::size_t>(idx)] = {
                fm::format_double(v1), fm::format_double(v2),
                fm::format_double(sc.discriminant), fm::regime_name(sc.regime),
                sc.regime == fm::Regime::Hyperbolic
                    ? fm::format_double(sc.floquet_exponent)
                    : std::string()};
        }
        const std::string path = cfg.output_dir + "/scan.csv";
        write_csv(path, "param1,param2,D,regime,lambda", rows);
        write_manifest(cfg, "scan",
                       {{"param1", ax1_text}, {"param2", ax2_text}},
                       {"scan.csv"});
        return 0;
    }

    if (cmd_traj->parsed()) {
        const auto cfg = load_config(common);
        const auto pair = build_pair(cfg);
        const auto mono = fm::monodromy(pair);
        const double omega_T = cfg.field.omega_integral(cfg.field.period());
        fm::PhaseState st{parse_vec2(x0_text), parse_vec2(p0_text)};
        std::vector<std::vector<std::string>> rows;
        for (long N = 0; N <= traj_N; ++N) {
            const auto out = fm::propagate_stroboscopic(mono, omega_T, st, N);
            rows.push_back({std::to_string(N), fm::format_double(out.x.x),
                            fm::format_double(out.x.y), fm::format_double(out.p.x),
                            fm::format_double(out.p.y),
                            fm::format_double(out.x.norm())});
        }
        const std::string path = cfg.output_dir + "/trajectory.csv";
        write_csv(path, "N,x1,x2,p1,p2,norm_x", rows);
        write_manifest(cfg, "trajectory",
                       {{"x0", x0_text}, {"p0", p0_text}, {"N", traj_N}},
                       {"trajectory.csv"});
        return 0;
    }

    if (cmd_prop->parsed()) {
        const auto cfg = load_config(common);
        const auto pair = build_pair(cfg);
        const auto mono = fm::monodromy(pair);
        fm::WaveFunction psi =
            input_wfn.empty() ? fm::WaveFunction::gaussian(cfg.grid, gauss_w)
                              : fm::WaveFunction::load(input_wfn);
        fm::WaveFunction out(psi.grid());
        if (method == "mehler") {
            fm::PropagateOptions opts;
            opts.gamma_min = cfg.tolerances.gamma_min;
            out = fm::mehler_propagate(pair, mono, prop_to, prop_from, psi, opts);
        } else if (method == "strang") {
            out = fm::strang_oracle(cfg.field,
                                    cfg.potential ? &*cfg.potential : nullptr,
                                    prop_from, prop_to, prop_steps, psi);
        } else {
            fm::fail("ConfigError", "method must be mehler or strang");
        }
        const std::string path = cfg.output_dir + "/final.wfn";
        out.save(path);
        json summary;
        summary["l2"] = out.l2_norm();
        summary["sup"] = out.sup_norm();
        summary["second_moment"] = out.second_moment();
        std::cout << summary.dump(2) << "\n";
        write_manifest(cfg, "propagate",
                       {{"from", prop_from}, {"to", prop_to}, {"method", method},
                        {"steps", prop_steps}},
                       {"final.wfn"});
        return 0;
    }

    if (cmd_disp->parsed()) {
        const auto cfg = load_config(common);
        const auto pair = build_pair(cfg);
        const auto mono = fm::monodromy(pair);
        const auto psi = fm::WaveFunction::gaussian(cfg.grid);
        const double T = cfg.field.period();
        std::mt19937_64 rng(disp_seed);
        std::uniform_real_distribution<double> us(0.0, T), ud(0.1, 2.0 * T);
        std::vector<std::vector<std::string>> rows;
        fm::PropagateOptions opts;
        opts.gamma_min = cfg.tolerances.gamma_min;
        const auto spread = fm::estimate_spread(psi);
        opts.radius_x = spread.radius_x;
        opts.radius_k = spread.radius_k;
        opts.policy = fm::GuardPolicy::NormOnly;
        std::vector<fm::ExcludedPair> excluded;
        std::size_t attempts = 0;
        while (rows.size() < static_cast<std::size_t>(disp_pairs) &&
               attempts < 200 * static_cast<std::size_t>(disp_pairs)) {
            ++attempts;
            const double s = us(rng);
            const double tau = s + ud(rng);
            const double G = fm::gamma(pair, mono, tau, s);
            if (G < disp_floor) continue;
            try {
                const double ratio =
                    fm::dispersive_ratio(pair, mono, tau, s, psi, opts);
                rows.push_back({fm::format_double(tau), fm::format_double(s),
                                fm::format_double(G), fm::format_double(ratio)});
            } catch (const fm::PreconditionError&) {
                excluded.push_back({tau, s, G});  // caustic or aliasing guard
            }
        }
        const std::string path = cfg.output_dir + "/dispersive.csv";
        write_csv(path, "tau,s,gamma,ratio", rows);
        write_manifest(cfg, "dispersive",
                       {{"pairs", disp_pairs}, {"seed", disp_seed},
                        {"gamma_floor", disp_floor}},
                       {"dispersive.csv"}, excluded);
        return 0;
    }

    if (cmd_res->parsed()) {
        const auto cfg = load_config(common);
        const auto pair = build_pair(cfg);
        const auto mono = fm::monodromy(pair);
        const auto sums =
            fm::resolvent_series_partial_sums(pair, mono, res_p, res_nmax);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < sums.I_values.size(); ++i)
            rows.push_back({std::to_string(i), fm::format_double(sums.I_values[i]),
                            fm::format_double(sums.partial_sums[i])});
        const std::string path = cfg.output_dir + "/resolvent.csv";
        write_csv(path, "N,I_N,S_N", rows);
        write_manifest(cfg, "resolvent", {{"p", res_p}, {"n_max", res_nmax}},
                       {"resolvent.csv"});
        return 0;
    }

    if (cmd_cook->parsed()) {
        const auto cfg = load_config(common);
        fm::require(cfg.potential.has_value(), "ConfigError",
                    "cook requires a potential");
        const auto pair = build_pair(cfg);
        const auto mono = fm::monodromy(pair);
        const auto psi = fm::WaveFunction::gaussian(cfg.grid, cook_w);
        const auto cs = fm::cook_integrand_partial_sums(
            pair, mono, *cfg.potential, psi, cook_nmax, cook_p, cook_slices,
            cfg.tolerances.gamma_min);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < cs.terms.size(); ++i)
            rows.push_back({std::to_string(i + 1),
                            fm::format_double(cs.partial_sums[i]),
                            fm::format_double(cs.terms[i])});
        const std::string path = cfg.output_dir + "/cook.csv";
        write_csv(path, "N,C_N,increment", rows);
        write_manifest(cfg, "cook",
                       {{"p", cook_p}, {"n_max", cook_nmax},
                        {"slices", cook_slices}},
                       {"cook.csv"}, cs.excluded);
        return 0;
    }

    if (cmd_sigma->parsed()) {
        const auto cfg = load_config(common);
        fm::require(cfg.potential.has_value(), "ConfigError",
                    "sigma-r requires a potential");
        const auto pair = build_pair(cfg);
        const auto mono = fm::monodromy(pair);
        const auto psi = fm::WaveFunction::gaussian(cfg.grid, sig_w);
        const auto res = fm::sigma_R_quadrature(
            pair, mono, *cfg.potential, psi, sig_lambda, sig_tau, sig_R, sig_ds,
            sig_p, cfg.tolerances.gamma_min);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < res.R_values.size(); ++i)
            rows.push_back({fm::format_double(res.R_values[i]),
                            fm::format_double(res.running[i])});
        const std::string path = cfg.output_dir + "/sigma_r.csv";
        write_csv(path, "R,sigma_R", rows);
        write_manifest(cfg, "sigma-r",
                       {{"p", sig_p}, {"lambda_spec", sig_lambda},
                        {"tau_im", sig_tau}, {"R", sig_R}, {"dsigma", sig_ds}},
                       {"sigma_r.csv"}, res.excluded);
        return 0;
    }

    if (cmd_wave->parsed()) {
        const auto cfg = load_config(common);
        const auto pair = build_pair(cfg);
        const auto mono = fm::monodromy(pair);
        const auto psi = fm::WaveFunction::gaussian(cfg.grid, w_width);
        fm::WaveopOptions wopts;
        wopts.strang_steps_per_period = w_strang;
        wopts.kicks_per_period = w_kicks;
        wopts.gamma_min = cfg.tolerances.gamma_min;
        if (w_scheme == "interaction")
            wopts.scheme = fm::WaveopScheme::Interaction;
        else
            fm::require(w_scheme == "direct", "ConfigError",
                        "scheme must be direct or interaction");
        const auto d = fm::wave_operator_defect(
            pair, mono, cfg.potential ? &*cfg.potential : nullptr, psi, w_n1,
            w_n2, wopts);
        const std::string path = cfg.output_dir + "/waveop.csv";
        write_csv(path, "N1,N2,defect",
                  {{std::to_string(d.N1), std::to_string(d.N2),
                    fm::format_double(d.defect)}});
        write_manifest(cfg, "waveop",
                       {{"n1", w_n1}, {"n2", w_n2}, {"scheme", w_scheme}},
                       {"waveop.csv"});
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const fm::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
