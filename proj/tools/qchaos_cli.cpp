// qchaos: command-line front end. Every subcommand writes its data files into
// --out-dir together with a run manifest listing SHA-256 digests of inputs
// and outputs. Exit codes: 0 ok, 2 bad arguments, 3 numerical or domain
// failure, 4 I/O failure.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qchaos/qchaos.hpp"

namespace fs = std::filesystem;
using namespace qchaos;

namespace {

constexpr int kExitArgs = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Context {
    fs::path out_dir = ".";
    std::uint64_t seed = 1;
    std::string manifest_path;
    std::vector<std::string> argv;
    RunManifest manifest;

    fs::path out(const fs::path& name) const { return name.is_absolute() ? name : out_dir / name; }
    void produced(const fs::path& p) { manifest.outputs.push_back(relative(digest(p))); }
    void consumed(const fs::path& p) { manifest.inputs.push_back(digest(p)); }
    void produced_with_sidecar(const fs::path& p) {
        produced(p);
        if (fs::exists(sidecar_path(p))) produced(sidecar_path(p));
    }

    FileDigest relative(FileDigest d) const {
        std::error_code ec;
        const fs::path rel = fs::relative(d.path, out_dir, ec);
        if (!ec && !rel.empty() && rel.native().rfind("..", 0) != 0) d.path = rel.string();
        return d;
    }
};

struct MatrixFlags {
    long long a = 2, b = 1, c = 3, d = 2;
    bool generators = false;

    void add(CLI::App* sc) {
        sc->add_option("--a", a, "matrix entry a")->capture_default_str();
        sc->add_option("--b", b, "matrix entry b")->capture_default_str();
        sc->add_option("--c", c, "matrix entry c")->capture_default_str();
        sc->add_option("--d", d, "matrix entry d")->capture_default_str();
        sc->add_flag("--allow-generators", generators, "quantize non-checkerboard matrices through the generator product");
    }
    SymplecticMatrix matrix() const { return {a, b, c, d}; }
    CatQuantization policy() const { return generators ? CatQuantization::AllowGenerators : CatQuantization::Strict; }
};

const char* kDefaultKick = "cos(2pi*(1x+0p)) + cos(2pi*(0x+1p))";

void write_spectrum_outputs(Context& ctx, const std::string& stem, const SpectralData& spec) {
    const fs::path csv = ctx.out(stem + "_spectrum.csv");
    write_spectrum_csv(csv, spec);
    ctx.produced(csv);
    const fs::path bundle = ctx.out(stem + "_eigvecs.tqs");
    write_eigenvector_bundle(bundle, spec);
    ctx.produced_with_sidecar(bundle);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--klist", "not a number: '" + item + "'");
        }
    }
    if (v.empty()) throw CLI::ValidationError("--klist", "empty list");
    return v;
}

int run(const std::vector<std::string>& args);

/// Copies args without the --out-dir and --manifest options.
std::vector<std::string> strip_location(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--out-dir" || a == "--manifest") {
            ++i;
            continue;
        }
        if (a.rfind("--out-dir=", 0) == 0 || a.rfind("--manifest=", 0) == 0) continue;
        out.push_back(a);
    }
    return out;
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Quantum chaos on the torus: quantized maps, phase-space pictures, eigenstate statistics, random waves"};
    app.fallthrough();
    app.require_subcommand(1);
    Context ctx;
    std::string out_dir = ".";
    app.add_option("--out-dir", out_dir, "directory for all outputs")->capture_default_str();
    app.add_option("--seed", ctx.seed, "global 64-bit seed")->capture_default_str();
    app.add_option("--manifest", ctx.manifest_path, "manifest path (default <out-dir>/<subcommand>.manifest.json)");

    std::function<void()> action;
    bool write_manifest = true;

    // cat-spectrum
    MatrixFlags cat_m;
    int cat_N = 0;
    double cat_eps = 0.0;
    std::string cat_kick = kDefaultKick;
    auto* cat = app.add_subcommand("cat-spectrum", "eigenphases and eigenvectors of a (perturbed) cat map");
    cat_m.add(cat);
    cat->add_option("--N", cat_N, "Hilbert space dimension")->required()->check(CLI::Range(1, 1 << 14));
    cat->add_option("--eps", cat_eps, "kick strength")->capture_default_str();
    cat->add_option("--kick", cat_kick, "kick Hamiltonian")->capture_default_str();
    cat->callback([&] {
        action = [&] {
            const TorusObservable H = parse_observable(cat_kick, true);
            const UnitaryPropagator U = cat_eps == 0.0 ? quantize_cat(cat_m.matrix(), cat_N, cat_m.policy())
                                                       : perturbed_cat(cat_m.matrix(), cat_N, cat_eps, H, cat_m.policy());
            write_spectrum_outputs(ctx, "cat", eigensystem(U));
        };
    });

    // baker-spectrum
    int baker_N = 0;
    auto* baker = app.add_subcommand("baker-spectrum", "eigenphases and eigenvectors of the quantized baker map");
    baker->add_option("--N", baker_N, "Hilbert space dimension (even)")->required();
    baker->callback([&] { action = [&] { write_spectrum_outputs(ctx, "baker", eigensystem(quantize_baker(baker_N))); }; });

    // husimi
    std::string hus_state, hus_out = "husimi.pgm";
    int hus_M = 128;
    auto* hus = app.add_subcommand("husimi", "Husimi density of a stored state as a 16-bit PGM");
    hus->add_option("--state", hus_state, "TQS1 state file")->required();
    hus->add_option("--grid", hus_M, "grid size M (multiple of N)")->capture_default_str();
    hus->add_option("--out", hus_out, "PGM path")->capture_default_str();
    hus->callback([&] {
        action = [&] {
            const TorusState psi = read_state(hus_state);
            ctx.consumed(hus_state);
            const fs::path p = ctx.out(hus_out);
            write_husimi_pgm(p, husimi_grid(psi, hus_M));
            ctx.produced_with_sidecar(p);
        };
    });

    // zeros
    std::string z_state, z_out = "zeros.csv";
    bool z_check = false;
    int z_probes = 50;
    auto* zeros = app.add_subcommand("zeros", "certified zeros of the Bargmann function of a stored state");
    zeros->add_option("--state", z_state, "TQS1 state file")->required();
    zeros->add_option("--out", z_out, "CSV path")->capture_default_str();
    zeros->add_flag("--check-reconstruction", z_check, "rebuild the Bargmann function from its zeros");
    zeros->add_option("--probes", z_probes, "probe points for the reconstruction check")->capture_default_str();
    zeros->callback([&] {
        action = [&] {
            const TorusState psi = read_state(z_state);
            ctx.consumed(z_state);
            const StellarSet z = stellar_zeros(psi);
            const fs::path p = ctx.out(z_out);
            write_zeros_csv(p, z);
            ctx.produced(p);
            json rep;
            rep["format"] = "qchaos-zeros-report/1";
            rep["N"] = psi.dim();
            rep["zeros"] = z.zeros.size();
            rep["multiplicity_sum"] = z.multiplicity_sum();
            rep["total_winding"] = z.total_winding;
            if (z_check) {
                Rng rng(ctx.seed, "zeros-probes", 0);
                std::vector<cplx> probes;
                while (static_cast<int>(probes.size()) < z_probes) {
                    const cplx w(rng.uniform(), -rng.uniform());
                    bool ok = true;
                    for (const auto& q : z.zeros) ok = ok && std::hypot(w.real() - q.x, -w.imag() - q.p) > 1e-2;
                    if (ok) probes.push_back(w);
                }
                rep["reconstruction_max_relative_deviation"] = reconstruct_check(psi, z, probes).max_relative_deviation;
            }
            const fs::path rp = ctx.out("zeros_report.json");
            write_json(rp, rep);
            ctx.produced(rp);
        };
    });

    // qvariance
    std::string qv_map = "perturbed-cat", qv_obs = "cos(2pi*(1x+0p))", qv_kick = kDefaultKick;
    MatrixFlags qv_m;
    int qv_N = 64;
    double qv_eps = 0.1;
    long long qv_tmax = 0, qv_samples = 20000;
    auto* qv = app.add_subcommand("qvariance", "quantum variance of eigenstate averages against the classical variance");
    qv->add_option("--map", qv_map, "cat | baker | perturbed-cat")->check(CLI::IsMember({"cat", "baker", "perturbed-cat"}))->capture_default_str();
    qv->add_option("--obs", qv_obs, "observable")->capture_default_str();
    qv->add_option("--N", qv_N, "Hilbert space dimension")->capture_default_str();
    qv->add_option("--eps", qv_eps, "kick strength for perturbed-cat")->capture_default_str();
    qv->add_option("--kick", qv_kick, "kick Hamiltonian for perturbed-cat")->capture_default_str();
    qv->add_option("--tmax", qv_tmax, "classical correlation sum cut-off (0 means N)")->capture_default_str();
    qv->add_option("--cl-samples", qv_samples, "Monte Carlo orbits for the classical variance")->capture_default_str();
    qv_m.add(qv);
    qv->callback([&] {
        action = [&] {
            const TorusObservable f = parse_observable(qv_obs, true);
            UnitaryPropagator U;
            ClassicalMap cm;
            if (qv_map == "cat") {
                U = quantize_cat(qv_m.matrix(), qv_N, qv_m.policy());
                cm = ClassicalMap::cat(qv_m.matrix());
            } else if (qv_map == "baker") {
                U = quantize_baker(qv_N);
                cm = ClassicalMap::baker();
            } else {
                const TorusObservable H = parse_observable(qv_kick, true);
                U = perturbed_cat(qv_m.matrix(), qv_N, qv_eps, H, qv_m.policy());
                cm = ClassicalMap::perturbed_cat(qv_m.matrix(), qv_eps, H);
            }
            const SpectralData spec = eigensystem(U);
            const double var = quantum_variance(spec, f);
            const long long T = qv_tmax > 0 ? qv_tmax : qv_N;
            const ClassicalVariance vc = classical_variance(cm, f, T, {ctx.seed, qv_samples, 0.0});
            const auto avg = eigenstate_averages(spec, f);
            std::vector<std::vector<double>> rows;
            for (int j = 0; j < spec.N; ++j) rows.push_back({double(j), spec.phases[j], avg[j]});
            const fs::path csv = ctx.out("qvariance_averages.csv");
            write_csv(csv, "qchaos-eigen-averages/1", {"j", "theta_j", "average"}, rows);
            ctx.produced(csv);
            json j;
            j["format"] = "qchaos-qvariance/1";
            j["map"] = cm.name();
            j["observable"] = serialize_observable(f);
            j["N"] = qv_N;
            j["var_N"] = var;
            j["N_var_over_2"] = qv_N * var / 2.0;
            j["var_cl"] = vc.value;
            j["var_cl_stderr"] = vc.stderr_;
            j["var_cl_tmax"] = T;
            j["var_cl_remainder_bound"] = vc.remainder_bound;
            j["ratio"] = vc.value != 0.0 ? qv_N * var / (2.0 * vc.value) : 0.0;
            j["max_residual"] = spec.max_residual();
            const fs::path p = ctx.out("qvariance.json");
            write_json(p, j);
            ctx.produced(p);
        };
    });

    // scar-scan
    MatrixFlags ss_m;
    int ss_nmin = 2, ss_nmax = 100;
    std::string ss_cap = "3N";
    auto* ss = app.add_subcommand("scar-scan", "measure propagator periods and flag scar candidates");
    ss_m.add(ss);
    ss->add_option("--nmin", ss_nmin, "smallest N")->capture_default_str();
    ss->add_option("--nmax", ss_nmax, "largest N")->capture_default_str();
    ss->add_option("--period-cap", ss_cap, "longest period searched: 3N or 4TE")->check(CLI::IsMember({"3N", "4TE"}))->capture_default_str();
    ss->callback([&] {
        action = [&] {
            const SymplecticMatrix S = ss_m.matrix();
            ScanOptions opt;
            opt.policy = ss_m.policy();
            if (ss_cap == "4TE") {
                const double lam = lyapunov(S);
                opt.period_cap = [lam](int N) { return static_cast<long long>(std::ceil(4.0 * ehrenfest_time(N, lam))); };
            }
            const auto scan = scan_short_periods(S, ss_nmin, ss_nmax, opt);
            std::vector<std::vector<double>> rows;
            for (const auto& e : scan)
                rows.push_back({double(e.N), e.period ? double(*e.period) : -1.0, e.ehrenfest, e.candidate ? 1.0 : 0.0, e.defect});
            const fs::path csv = ctx.out("scar_scan.csv");
            write_csv(csv, "qchaos-period-scan/1", {"N", "T_N", "T_E", "candidate", "defect"}, rows);
            ctx.produced(csv);
            json j;
            j["format"] = "qchaos-scar-scan/1";
            j["matrix"] = S.str();
            j["period_cap"] = ss_cap;
            json cands = json::array();
            for (const auto& e : scan)
                if (e.candidate) cands.push_back({{"N", e.N}, {"T_N", *e.period}, {"T_E", e.ehrenfest}});
            j["candidates"] = cands;
            if (auto best = best_scar_candidate(scan)) j["best"] = {{"N", best->N}, {"T_N", *best->period}, {"T_E", best->ehrenfest}};
            else j["best"] = nullptr;
            const fs::path p = ctx.out("scar_scan.json");
            write_json(p, j);
            ctx.produced(p);
        };
    });

    // half-scar
    MatrixFlags hs_m;
    int hs_N = 0, hs_grid = 128, hs_ldos_points = 1024;
    double hs_x = 0.0, hs_p = 0.0, hs_r = 0.1, hs_width = 0.0;
    auto* hs = app.add_subcommand("half-scar", "project a fixed-point coherent state on an eigenspace of a periodic cat propagator");
    hs_m.add(hs);
    hs->add_option("--N", hs_N, "Hilbert space dimension")->required()->check(CLI::Range(1, 1 << 14));
    hs->add_option("--x", hs_x, "fixed point x")->capture_default_str();
    hs->add_option("--p", hs_p, "fixed point p")->capture_default_str();
    hs->add_option("--radius", hs_r, "disk radius for the mass report")->capture_default_str();
    hs->add_option("--grid", hs_grid, "Husimi grid size")->capture_default_str();
    hs->add_option("--ldos-width", hs_width, "LDOS smoothing width (0 means 2 pi / (2 T_E))")->capture_default_str();
    hs->add_option("--ldos-points", hs_ldos_points, "LDOS grid points")->capture_default_str();
    hs->callback([&] {
        action = [&] {
            const SymplecticMatrix S = hs_m.matrix();
            const HalfScar h = half_scarred_state(S, hs_N, {hs_x, hs_p}, hs_m.policy(), hs_r, hs_grid);
            const fs::path st = ctx.out("half_scar.tqs");
            write_state(st, h.state);
            ctx.produced_with_sidecar(st);
            const fs::path rep = ctx.out("half_scar.json");
            write_json(rep, to_json(h.report));
            ctx.produced(rep);
            const fs::path pgm = ctx.out("half_scar_husimi.pgm");
            write_husimi_pgm(pgm, husimi_grid(h.state, hs_grid));
            ctx.produced_with_sidecar(pgm);
            const double w = hs_width > 0.0 ? hs_width : default_ldos_width(hs_N, lyapunov(S));
            const SpectralData spec = eigensystem(quantize_cat(S, hs_N, hs_m.policy()));
            const fs::path ld = ctx.out("half_scar_ldos.csv");
            write_ldos_csv(ld, smoothed_ldos(spec, {hs_x, hs_p}, w, hs_ldos_points));
            ctx.produced(ld);
        };
    });

    // rwm-corr
    double rc_k = 100.0, rc_R = 0.2, rc_krmax = 10.0;
    int rc_samples = 20, rc_M = 0, rc_points = 41;
    std::string rc_ens = "plane";
    auto* rc = app.add_subcommand("rwm-corr", "isotropic two-point correlation of random waves against J0");
    rc->add_option("--k", rc_k, "wavenumber")->capture_default_str();
    rc->add_option("--samples", rc_samples, "number of fields")->capture_default_str()->check(CLI::PositiveNumber);
    rc->add_option("--M", rc_M, "grid size (0: at least 16 samples per wavelength)")->capture_default_str();
    rc->add_option("--R", rc_R, "averaging radius")->capture_default_str();
    rc->add_option("--kr-max", rc_krmax, "largest k r")->capture_default_str();
    rc->add_option("--points", rc_points, "r-grid points")->capture_default_str()->check(CLI::Range(2, 100000));
    rc->add_option("--ensemble", rc_ens, "plane | bessel")->check(CLI::IsMember({"plane", "bessel"}))->capture_default_str();
    rc->callback([&] {
        action = [&] {
            const int M = rc_M > 0 ? rc_M : supnorm_grid(rc_k);
            std::vector<ScalarField2D> fields;
            for (int s = 0; s < rc_samples; ++s) {
                const std::uint64_t seed = substream_seed(ctx.seed, "rwm-corr", s);
                fields.push_back(rc_ens == "plane" ? sample_plane_wave_field(rc_k, seed, M) : sample_bessel_field(rc_k, seed, M));
            }
            const CorrelationCurve c = correlation_estimate(fields, rc_R, kr_grid(rc_k, rc_krmax, rc_points));
            const fs::path csv = ctx.out("rwm_corr.csv");
            write_field_correlation_csv(csv, c, rc_k);
            ctx.produced(csv);
            StatReport r = value_moments(fields);
            r.seed = ctx.seed;
            r.extra["rms_deviation_j0"] = rms_deviation_from_j0(c, rc_k);
            r.extra["k"] = rc_k;
            r.extra["M"] = M;
            const fs::path p = ctx.out("rwm_corr.json");
            write_json(p, to_json(r));
            ctx.produced(p);
        };
    });

    // rwm-nodal
    double rn_k = 200.0;
    int rn_samples = 30;
    CensusOptions rn_opt;
    auto* rn = app.add_subcommand("rwm-nodal", "nodal-domain census of random plane-wave fields");
    rn->add_option("--k", rn_k, "wavenumber")->capture_default_str();
    rn->add_option("--samples", rn_samples, "number of fields")->capture_default_str();
    rn->add_option("--M", rn_opt.M, "grid size")->capture_default_str();
    rn->add_option("--window-hi", rn_opt.window_hi, "upper edge of the area fit window")->capture_default_str();
    rn->callback([&] {
        action = [&] {
            const StatReport r = nodal_census(rn_k, rn_samples, ctx.seed, rn_opt);
            json j = to_json(r);
            j["constants"] = {{"mean", kNodalMeanConstant}, {"variance", kNodalVarianceConstant}, {"area_exponent", kAreaExponent}};
            const fs::path p = ctx.out("rwm_nodal.json");
            write_json(p, j);
            ctx.produced(p);
        };
    });

    // rwm-supnorm
    std::string su_klist = "50,100,200,400";
    int su_samples = 20;
    auto* su = app.add_subcommand("rwm-supnorm", "sup-norm to rms ratios of random waves across k");
    su->add_option("--klist", su_klist, "comma-separated wavenumbers")->capture_default_str();
    su->add_option("--samples", su_samples, "fields per k")->capture_default_str();
    su->callback([&] {
        action = [&] {
            const SupNormScan s = sup_norm_scan(parse_list(su_klist), su_samples, ctx.seed);
            const fs::path p = ctx.out("rwm_supnorm.json");
            write_json(p, to_json(sup_norm_report(s, ctx.seed)));
            ctx.produced(p);
        };
    });

    // state
    std::string st_kind = "random", st_out = "state.tqs";
    int st_N = 16, st_index = 0;
    double st_x = 0.0, st_p = 0.0;
    auto* st = app.add_subcommand("state", "write a torus state in the TQS1 format");
    st->add_option("--kind", st_kind, "random | real | coherent | position | momentum")
        ->check(CLI::IsMember({"random", "real", "coherent", "position", "momentum"}))
        ->capture_default_str();
    st->add_option("--N", st_N, "dimension")->capture_default_str()->check(CLI::Range(1, 1 << 20));
    st->add_option("--x", st_x, "coherent-state x")->capture_default_str();
    st->add_option("--p", st_p, "coherent-state p")->capture_default_str();
    st->add_option("--index", st_index, "basis index for position and momentum states")->capture_default_str();
    st->add_option("--out", st_out, "output path")->capture_default_str();
    st->callback([&] {
        action = [&] {
            TorusState psi;
            if (st_kind == "random") psi = random_state(st_N, substream_seed(ctx.seed, "cli-state", 0));
            else if (st_kind == "real") psi = random_real_state(st_N, substream_seed(ctx.seed, "cli-state", 0));
            else if (st_kind == "coherent") psi = coherent_state(st_N, st_x, st_p);
            else if (st_kind == "position") psi = position_state(st_N, st_index);
            else psi = momentum_state(st_N, st_index);
            const fs::path p = ctx.out(st_out);
            write_state(p, psi, ctx.seed);
            ctx.produced_with_sidecar(p);
        };
    });

    // replay
    std::string rp_manifest;
    auto* rp = app.add_subcommand("replay", "re-run a manifest's command into --out-dir and compare output digests");
    rp->add_option("--from", rp_manifest, "manifest to replay")->required();
    rp->callback([&] {
        write_manifest = false;
        action = [&] {
            const RunManifest m = RunManifest::from_json(read_json(rp_manifest));
            if (m.subcommand == "replay") throw DomainError("replay: refusing to replay a replay");
            std::vector<std::string> again = strip_location(m.argv);
            again.push_back("--out-dir");
            again.push_back(ctx.out_dir.string());
            const int code = run(again);
            if (code != 0) throw NumericalError("replay: command exited with code " + std::to_string(code));
            int mismatches = 0;
            for (const auto& d : m.outputs) {
                const fs::path p = ctx.out(d.path);
                const std::string now = fs::exists(p) ? sha256_file(p) : std::string("missing");
                if (now != d.sha256) {
                    ++mismatches;
                    std::cerr << "replay: digest mismatch for " << d.path << '\n';
                }
            }
            std::cout << "replay: " << m.outputs.size() - mismatches << "/" << m.outputs.size() << " outputs identical\n";
            if (mismatches) throw NumericalError("replay: outputs differ from the manifest");
        };
    });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitArgs;
    }

    ctx.out_dir = out_dir;
    ctx.argv = args;
    ctx.manifest.argv = args;
    ctx.manifest.seed = ctx.seed;
    ctx.manifest.subcommand = app.get_subcommands().front()->get_name();
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());

    const auto t0 = std::chrono::steady_clock::now();
    action();
    ctx.manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (write_manifest) {
        const fs::path mp = ctx.manifest_path.empty() ? ctx.out(ctx.manifest.subcommand + ".manifest.json") : fs::path(ctx.manifest_path);
        write_json(mp, ctx.manifest.to_json());
    }
    return 0;
}

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArgs;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArgs;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }
