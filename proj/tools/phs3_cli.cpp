#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "phs3/common.hpp"
#include "phs3/flow.hpp"
#include "phs3/fourier.hpp"
#include "phs3/geom.hpp"
#include "phs3/invariants.hpp"
#include "phs3/io.hpp"
#include "phs3/stationary.hpp"

namespace fs = std::filesystem;
using namespace phs3;

namespace {

struct CommonOpts {
    std::string out = "out";
    std::string format = "json";
    std::size_t samples = 0;  // 0 means per-command default
    double tol = 1e-4;
    std::int64_t max_denominator = 64;
};

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

// flat single-record CSV alternative to the JSON report
std::string report_csv_from_json(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    std::string head, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_structured()) continue;
        if (!head.empty()) { head += ','; row += ','; }
        head += it.key();
        if (it.value().is_number_float())
            row += format_real(it.value().get<double>());
        else
            row += it.value().dump();
    }
    return head + "\n" + row + "\n";
}

void write_report(const std::string& json_text, const CommonOpts& opts, const fs::path& dir,
                  const std::string& stem) {
    if (opts.format == "csv")
        write_text_file(report_csv_from_json(json_text), (dir / (stem + ".csv")).string());
    else
        write_text_file(json_text, (dir / (stem + ".json")).string());
}

int cmd_torus_knot(int m, int n, const CommonOpts& opts) {
    const std::size_t samples = opts.samples ? opts.samples : 4096;
    SampledCurve curve = torus_knot_curve(m, n, samples);
    InvariantReport rep = invariant_report(curve);
    fs::path dir = ensure_out_dir(opts.out);
    write_curve_csv(curve, (dir / "curve.csv").string());
    write_report(invariant_report_json(rep), opts, dir, "invariants");
    std::printf("torus-knot m=%d n=%d samples=%zu maslov=%d clifford=%d spin=%g bennequin=%s out=%s\n",
                m, n, samples, rep.maslov, rep.clifford_index, rep.spin.value(),
                rep.bennequin ? std::to_string(*rep.bennequin).c_str() : "none",
                opts.out.c_str());
    return 0;
}

int cmd_evolve(const std::string& profile_path, int flow_index, double t_end, int snapshots,
               const CommonOpts& opts) {
    CurvatureProfile k = read_profile_csv(profile_path);
    if (opts.samples) k.values = spectral_resample(k.values, opts.samples);
    if (snapshots < 1) throw validation_error("need at least one snapshot");
    FlowState state{k, 0.0, std::nullopt};
    std::vector<double> times{0.0};
    std::vector<CurvatureProfile> series{state.k};
    std::vector<ConservationRow> rows;
    auto record = [&](const FlowState& st) {
        ConservationRow row;
        row.t = st.t;
        row.integrals = conserved_integrals(st.k);
        row.sup_k = 0.0;
        for (double v : st.k.values) row.sup_k = std::max(row.sup_k, std::fabs(v));
        rows.push_back(row);
    };
    record(state);
    for (int i = 1; i <= snapshots; ++i) {
        double target = t_end * static_cast<double>(i) / static_cast<double>(snapshots);
        state = evolve_curvature(state, flow_index, target);
        times.push_back(state.t);
        series.push_back(state.k);
        record(state);
    }
    fs::path dir = ensure_out_dir(opts.out);
    write_snapshots_csv(times, series, (dir / "snapshots.csv").string());
    write_conservation_csv(rows, (dir / "conservation.csv").string());
    double drift = 0.0;
    for (int c = 0; c < 3; ++c) {
        double scale = std::max(1.0, std::fabs(rows.front().integrals[c]));
        drift = std::max(drift,
                         std::fabs(rows.back().integrals[c] - rows.front().integrals[c]) / scale);
    }
    std::printf("evolve flow=%d t_end=%s snapshots=%d nodes=%zu drift=%s out=%s\n", flow_index,
                format_real(t_end).c_str(), snapshots, state.k.values.size(),
                format_real(drift).c_str(), opts.out.c_str());
    return 0;
}

int cmd_stationary(double e1, double e3, std::optional<double> e2, const std::string& kind,
                   const CommonOpts& opts) {
    Modulus mod = [&] {
        if (kind == "symmetric") {
            if (e2) throw validation_error("--e2 needs --case dnoidal or cnoidal");
            return Modulus::symmetric(e1, e3);
        }
        if (!e2) throw validation_error("--case dnoidal/cnoidal needs --e2");
        return kind == "dnoidal" ? Modulus::dnoidal(e1, *e2, e3) : Modulus::cnoidal(e1, *e2, e3);
    }();
    const std::size_t samples = opts.samples ? opts.samples : 512;
    RationalDetect detect{0.0, opts.max_denominator, opts.tol};
    ClosureReport rep = closure_quanta(mod, detect, std::max<std::size_t>(samples, 2048));
    fs::path dir = ensure_out_dir(opts.out);
    write_profile_csv(curvature_profile(mod, samples), (dir / "profile.csv").string());
    write_report(closure_report_json(rep), opts, dir, "closure");
    bool loop_written = false;
    if (mod.kind == ModulusCase::symmetric_cnoidal && rep.closed && rep.wave_number) {
        PhiLoop loop = standard_phi_loop(mod, samples, detect);
        write_curve_csv(loop.curve, (dir / "loop.csv").string());
        // a loop snapped from publication-precision moduli can be too seamy
        // for the lift pipeline; invariants are best-effort in that case
        try {
            write_report(invariant_report_json(invariant_report(loop.curve, false)), opts, dir,
                         "invariants");
        } catch (const numerical_error&) {
        }
        loop_written = true;
    } else {
        QuadratureFrame qf = reconstruct_frame_by_quadrature(mod, samples);
        SampledCurve wavelength;
        wavelength.period_L = qf.period_L;
        for (const Frame& F : qf.frames) wavelength.samples.push_back(F.gamma);
        write_curve_csv(wavelength, (dir / "wavelength.csv").string());
    }
    std::printf(
        "stationary case=%s e1=%s e3=%s closed=%s exceptional=%s phi2_regularized=%s wave_number=%s %s=%s\n",
        kind.c_str(), format_real(e1).c_str(), format_real(e3).c_str(),
        rep.closed ? "true" : "false", rep.exceptional ? "true" : "false",
        format_real(rep.phi2_regularized).c_str(),
        rep.wave_number ? std::to_string(*rep.wave_number).c_str() : "none",
        loop_written ? "loop" : "wavelength", opts.out.c_str());
    return 0;
}

int cmd_scan(std::int64_t q_num, std::int64_t q_den, const CommonOpts& opts) {
    if (q_den <= 0) throw validation_error("the level denominator must be positive");
    double q = static_cast<double>(q_num) / static_cast<double>(q_den);
    ScanResult res = scan_modular_curve(q);
    fs::path dir = ensure_out_dir(opts.out);
    write_scan_csv(res, (dir / "trace.csv").string());
    nlohmann::json j;
    j["q"] = {q_num, q_den};
    j["points"] = res.points.size();
    j["reached_e1_limit"] = res.reached_e1_limit;
    for (const auto& al : res.axis_limits) j["axis_limits"].push_back({al[0], al[1]});
    if (res.exceptional_crossing)
        j["exceptional_crossing"] = {(*res.exceptional_crossing)[0],
                                     (*res.exceptional_crossing)[1]};
    write_report(j.dump(2), opts, dir, "summary");
    std::string limits;
    for (const auto& al : res.axis_limits) {
        if (!limits.empty()) limits += ';';
        limits += format_real(al[1]);
    }
    std::printf("scan q=%lld/%lld points=%zu axis_limits=%s crossing=%s unbounded=%s out=%s\n",
                static_cast<long long>(q_num), static_cast<long long>(q_den), res.points.size(),
                limits.c_str(),
                res.exceptional_crossing
                    ? (format_real((*res.exceptional_crossing)[0]) + "," +
                       format_real((*res.exceptional_crossing)[1])).c_str()
                    : "none",
                res.reached_e1_limit ? "true" : "false", opts.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Legendrian curves in the pseudohermitian 3-sphere: generation, evolution, classification"};
    app.require_subcommand(1);

    CommonOpts opts;
    int tk_m = 1, tk_n = 1;
    std::string profile_path;
    int flow_index = 1, snapshots = 8;
    double t_end = 1.0;
    double e1 = 0.0, e3 = 0.0;
    std::optional<double> e2;
    std::string kind = "symmetric";
    std::int64_t q_num = 5, q_den = 6;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opts.out, "output directory");
        cmd->add_option("--format", opts.format, "report format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--samples", opts.samples, "sample count override");
        cmd->add_option("--tol", opts.tol, "rational detection tolerance");
        cmd->add_option("--max-denominator", opts.max_denominator,
                        "rational detection denominator bound");
    };

    CLI::App* tk = app.add_subcommand("torus-knot", "constant-curvature torus knot and invariants");
    tk->add_option("m", tk_m, "first winding")->required();
    tk->add_option("n", tk_n, "second winding")->required();
    add_common(tk);

    CLI::App* ev = app.add_subcommand("evolve", "run a curvature flow from a profile file");
    ev->add_option("profile", profile_path, "CSV profile with header s,k")->required();
    ev->add_option("--flow", flow_index, "hierarchy flow index");
    ev->add_option("--t-end", t_end, "final time")->required();
    ev->add_option("--snapshots", snapshots, "number of recorded snapshots");
    add_common(ev);

    CLI::App* st = app.add_subcommand("stationary", "stationary curve pipeline for a modulus");
    st->add_option("e1", e1, "largest real root")->required();
    st->add_option("e3", e3, "third modulus parameter")->required();
    st->add_option("--e2", e2, "second real root for general cases");
    st->add_option("--case", kind, "modulus case")
        ->check(CLI::IsMember({"symmetric", "dnoidal", "cnoidal"}));
    add_common(st);

    CLI::App* sc = app.add_subcommand("scan", "trace a level set of the regularized quantum");
    sc->add_option("q_num", q_num, "level numerator")->required();
    sc->add_option("q_den", q_den, "level denominator")->required();
    add_common(sc);

    try {
        app.parse(argc, argv);
        if (tk->parsed()) return cmd_torus_knot(tk_m, tk_n, opts);
        if (ev->parsed()) return cmd_evolve(profile_path, flow_index, t_end, snapshots, opts);
        if (st->parsed()) return cmd_stationary(e1, e3, e2, kind, opts);
        if (sc->parsed()) return cmd_scan(q_num, q_den, opts);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    }
}
