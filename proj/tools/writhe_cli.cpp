// writhekit command-line tool.
//
//   writhekit writhe   --input curve.json [--n-samples N] [--band B]
//   writhekit fuller   --input curve.json [--out indicatrix.json]
//   writhekit fix-writhe --input curve.json --target W [--s0 S] [--out DIR]
//   writhekit family-correct  --input manifest.json [--out DIR]
//   writhekit homotopy-sample --input manifest.json --t T [--out DIR]
//   writhekit corpus [--seed S] [--out DIR]
//
// Exit status 0 when every checked invariant holds, 1 when one fails, 2 on
// errors (reported as a JSON record on stderr).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "writhekit/writhekit.hpp"

namespace fs = std::filesystem;
using namespace writhekit;

namespace {

struct Config {
    std::string input;
    std::optional<std::size_t> samples;
    std::size_t band = kDefaultBand;
    double target = 0.0;
    double t = 1.0;
    double s0 = 0.5;
    std::string out;
    std::uint64_t seed = 2024;
    std::size_t workers = 0;
    double tol = 0.0;
};

int status(bool ok) { return ok ? 0 : 1; }

std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_writhe(const Config& cfg) {
    const ClosedCurve c = read_curve(cfg.input, cfg.samples);
    const WritheReport q = cross_validate(c, cfg.band, cfg.workers);
    WritheReport p;
    p.method = WritheMethod::PolygonalExact;
    p.samples = q.samples;
    p.value = *q.oracle_value;
    std::cout << csv_header_writhe() << "\n" << csv_row(q) << "\n" << csv_row(p) << "\n";
    if (!cfg.out.empty()) {
        json j;
        j["seed"] = cfg.seed;
        j["input"] = cfg.input;
        j["quadrature"] = to_json(q);
        j["polygonal_exact"] = to_json(p);
        write_text_file(cfg.out, j.dump(2) + "\n");
    }
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-2;
    return status(*q.oracle_delta < tol);
}

int cmd_fuller(const Config& cfg) {
    const ClosedCurve c = read_curve(cfg.input, cfg.samples);
    const auto ind = tangent_indicatrix(c);
    const IndicatrixReport r = fuller_report(c.size(), writhe_polygonal(c, cfg.workers).value, enclosed_area(ind));
    std::cout << csv_header_fuller() << "\n" << csv_row(r) << "\n";
    if (!cfg.out.empty()) {
        json j = points_json(ind);
        j["meta"] = "tangent indicatrix of " + c.meta();
        j["seed"] = cfg.seed;
        j["report"] = to_json(r);
        write_text_file(cfg.out, j.dump() + "\n");
    }
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-2;
    return status(r.residual_mod2 < tol);
}

int cmd_fix(const Config& cfg) {
    const ClosedCurve c = read_curve(cfg.input, cfg.samples);
    DeformOptions opt;
    opt.workers = cfg.workers;
    opt.s0 = cfg.s0;
    if (cfg.tol > 0.0) opt.tol_writhe = cfg.tol;
    auto [bar, tr] = correct_writhe(c, cfg.target, opt);
    json j = to_json(tr);
    j["seed"] = cfg.seed;
    j["fuller_residual"] = round12(fuller_check(bar, WritheMethod::PolygonalExact, cfg.band, cfg.workers).residual_mod2);
    std::cout << j.dump(2) << "\n";
    if (!cfg.out.empty()) {
        write_curve(fs::path(cfg.out) / "curve.json", bar);
        write_text_file(fs::path(cfg.out) / "trace.json", j.dump(2) + "\n");
    }
    return status(tr.error() < opt.tol_writhe && tr.embedded_after && tr.locality && std::abs(tr.connector_area) < 1e-6);
}

CurveFamily corrected_family(const Config& cfg, const CurveFamily& raw) {
    FamilyOptions opt;
    opt.workers = cfg.workers;
    if (cfg.tol > 0.0) opt.tol_writhe = cfg.tol;
    return correct_family(raw, opt);
}

int cmd_family(const Config& cfg) {
    const CurveFamily raw = read_family(cfg.input, cfg.samples);
    const CurveFamily fam = corrected_family(cfg, raw);
    std::cout << family_csv(fam);
    if (!cfg.out.empty()) write_family(cfg.out, fam);
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-2;
    int n = fam.traces.front().helix.n;
    bool ok = max_deviation(fam) < tol;
    for (const auto& t : fam.traces) ok = ok && std::abs(t.w_applied) < n && t.embedded_after;
    return status(ok);
}

int cmd_homotopy(const Config& cfg) {
    const CurveFamily raw = read_family(cfg.input, cfg.samples);
    const CurveFamily fam = corrected_family(cfg, raw);
    const CurveFamily snap = omega_homotopy(raw, fam, cfg.t);
    bool ok = true;
    if (cfg.t == 1.0)
        for (std::size_t i = 0; i < fam.size(); ++i) ok = ok && snap.curves[i].points() == fam.curves[i].points();
    if (cfg.t == 0.5) {
        const CurveFamily tilde = tilde_family(raw, fam);
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (std::size_t j = 0; j < snap.curves[i].size(); ++j)
                ok = ok && distance(snap.curves[i][j], tilde.curves[i][j]) < 1e-9;
    }
    std::cout << "node_id,dist,t,writhe\n";
    for (std::size_t i = 0; i < snap.size(); ++i)
        std::cout << i << "," << g12(snap.space.nodes[i].dist) << "," << g12(cfg.t) << ","
                  << g12(writhe_polygonal(snap.curves[i], cfg.workers).value) << "\n";
    if (!cfg.out.empty()) write_family(cfg.out, snap);
    return status(ok);
}

int cmd_corpus(const Config& cfg) {
    SuiteOptions opt;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    if (cfg.samples) opt.samples = *cfg.samples;
    opt.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; };
    std::cout << "seed " << cfg.seed << "\n";
    const auto results = run_acceptance(opt);
    bool ok = true;
    std::string csv = "criterion,name,pass,detail\n";
    for (const auto& r : results) {
        ok = ok && r.pass;
        csv += std::to_string(r.id) + "," + r.name + "," + (r.pass ? "1" : "0") + ",\"" + r.detail + "\"\n";
    }
    if (!cfg.out.empty()) write_text_file(fs::path(cfg.out) / "corpus_summary.csv", csv);
    std::cout << (ok ? "all criteria pass" : "some criteria FAIL") << "\n";
    return status(ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Writhe of closed space curves, Fuller checks and writhe-fixing deformations"};
    app.require_subcommand(1);
    Config cfg;
    std::size_t samples = 0;

    auto common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", cfg.input, "Curve file or family manifest (JSON)");
        if (needs_input) in->required()->check(CLI::ExistingFile);
        sub->add_option("--n-samples", samples, "Resample to N points");
        sub->add_option("--band", cfg.band, "Quadrature diagonal band")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "Output file or directory");
        sub->add_option("--seed", cfg.seed, "Seed recorded in outputs and used by randomized checks");
        sub->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
        sub->add_option("--tol", cfg.tol, "Override the pass tolerance");
    };

    auto* wr = app.add_subcommand("writhe", "Writhe by quadrature, cross-checked by the polygonal formula");
    common(wr, true);
    auto* fu = app.add_subcommand("fuller", "Check 1 + Wr = A/2pi (mod 2)");
    common(fu, true);
    auto* fx = app.add_subcommand("fix-writhe", "Insert a helix so the writhe equals --target");
    common(fx, true);
    fx->add_option("--target", cfg.target, "Target writhe")->required();
    fx->add_option("--s0", cfg.s0, "Splice point in (0,1)");
    auto* fa = app.add_subcommand("family-correct", "Correct every curve of a family to the basepoint writhe");
    common(fa, true);
    auto* ho = app.add_subcommand("homotopy-sample", "Snapshot of the homotopy between raw and corrected family");
    common(ho, true);
    ho->add_option("--t", cfg.t, "Homotopy time")->required()->check(CLI::Range(0.0, 1.0));
    auto* co = app.add_subcommand("corpus", "Run the acceptance suite on the reference corpus");
    common(co, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (samples > 0) cfg.samples = samples;

    try {
        if (*wr) return cmd_writhe(cfg);
        if (*fu) return cmd_fuller(cfg);
        if (*fx) return cmd_fix(cfg);
        if (*fa) return cmd_family(cfg);
        if (*ho) return cmd_homotopy(cfg);
        return cmd_corpus(cfg);
    } catch (const Error& e) {
        json err;
        err["error"] = to_string(e.kind());
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err;
        err["error"] = "internal";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    }
}
