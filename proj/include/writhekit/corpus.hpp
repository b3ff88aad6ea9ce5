#pragma once

// Reference corpus and the end-to-end acceptance checks run against it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "curve.hpp"
#include "deform.hpp"
#include "family.hpp"
#include "indicatrix.hpp"
#include "writhe.hpp"

namespace writhekit {

struct CorpusEntry {
    std::string name;
    std::function<ClosedCurve(std::size_t)> make;
};

/// Circle, (2,3), (3,2) and (2,5) torus knots, three perturbed circles.
inline std::vector<CorpusEntry> analytic_corpus() {
    std::vector<CorpusEntry> c{
        {"circle", [](std::size_t n) { return make_circle(1.0, n); }},
        {"torus(2,3)", [](std::size_t n) { return make_torus_knot(2, 3, 2.0, 1.0, n); }},
        {"torus(3,2)", [](std::size_t n) { return make_torus_knot(3, 2, 2.0, 0.5, n); }},
        {"torus(2,5)", [](std::size_t n) { return make_torus_knot(2, 5, 2.0, 0.75, n); }},
    };
    for (std::uint64_t seed : {1, 2, 3})
        c.push_back({"perturbed(" + std::to_string(seed) + ")",
                     [seed](std::size_t n) { return make_perturbed_circle(seed, 0.2, 0.3, 4, n); }});
    return c;
}

/// Tolerances of the acceptance suite.
struct Tolerances {
    double oracle = 1e-3;
    double seconds_oracle = 60.0;
    double fuller = 1e-2;
    double writhe = 1e-2;
    double pitch = 1e-12;
    double connector = 1e-6;
    double family = 1e-2;
    double homotopy_half = 1e-9;
    double sweep_jump = 0.2;
    double convergence_floor = 1e-10;  // deltas below this count as converged
};

struct SuiteOptions {
    std::uint64_t seed = 2024;
    std::size_t samples = 4096;
    std::size_t trials = 100;
    std::size_t helix_trials = 1000;
    std::size_t family_nodes = 64;
    std::size_t family_samples = 2048;
    std::size_t sweep_nodes = 4;
    std::size_t workers = 0;
    Tolerances tol;
    std::function<void(const struct CriterionResult&)> on_result;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline std::string format_result(const CriterionResult& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%s] %d %-22s %7.1fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds);
    return buf + r.detail;
}

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// Least-squares slope of log(v) against log2 of a doubling index.
inline double log_slope(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = static_cast<double>(i), y = std::log2(v[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Curves used for randomized corrections: the corpus plus a mirrored,
/// a rigidly moved and a coiled curve.
inline std::vector<CorpusEntry> trial_curves() {
    auto c = analytic_corpus();
    c.push_back({"mirror(2,3)", [](std::size_t n) { return mirrored(make_torus_knot(2, 3, 2.0, 1.0, n)); }});
    c.push_back({"moved(2,5)", [](std::size_t n) {
                     return transformed(make_torus_knot(2, 5, 2.0, 0.75, n),
                                        axis_angle(normalized(Vec3{1, 2, 3}), 0.7), {0.3, -1.0, 2.0}, 1.7);
                 }});
    c.push_back({"coil(4)", [](std::size_t n) { return make_coil(4, 2.0, 0.3, 1.0, n); }});
    return c;
}

}  // namespace detail

/// Runs all eight acceptance criteria in order.
inline std::vector<CriterionResult> run_acceptance(const SuiteOptions& opt = {}) {
    std::vector<CriterionResult> out;
    const Tolerances& tol = opt.tol;
    auto emit = [&](CriterionResult r) {
        if (opt.on_result) opt.on_result(r);
        out.push_back(std::move(r));
    };
    const auto corpus = analytic_corpus();

    // 1. oracle equivalence
    std::vector<ClosedCurve> curves;
    {
        detail::Stopwatch sw;
        double worst = 0.0;
        std::string worst_name;
        for (const auto& e : corpus) {
            curves.push_back(e.make(opt.samples));
            const auto rep = cross_validate(curves.back(), kDefaultBand, opt.workers);
            if (*rep.oracle_delta >= worst) {
                worst = *rep.oracle_delta;
                worst_name = e.name;
            }
        }
        const double secs = sw.seconds();
        emit({1, "oracle equivalence", worst < tol.oracle && secs < tol.seconds_oracle,
              "max |quad-poly| = " + detail::sci(worst) + " (" + worst_name + ") < " + detail::sci(tol.oracle) +
                  ", N=" + std::to_string(opt.samples) + ", " + detail::sci(secs) + "s < " +
                  detail::sci(tol.seconds_oracle) + "s",
              secs});
    }

    // 3 and 5 share their corrections; 2 also covers their outputs.
    detail::Stopwatch sw3;
    double worst_fuller_corpus = 0.0;
    for (const auto& c : curves) worst_fuller_corpus = std::max(worst_fuller_corpus, fuller_check(c).residual_mod2);

    std::mt19937 rng(static_cast<std::mt19937::result_type>(opt.seed));
    const auto pool = detail::trial_curves();
    std::vector<std::optional<PreparedSplice>> prepared(pool.size());
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_real_distribution<double> deficit(-4.9, 4.9);
    double worst_err = 0.0, worst_fuller_out = 0.0, worst_conn = 0.0;
    std::size_t failures = 0, errors = 0;
    std::string first_error;
    for (std::size_t k = 0; k < opt.trials; ++k) {
        const std::size_t i = pick(rng);
        const double w = deficit(rng);
        try {
            if (!prepared[i]) {
                DeformOptions d;
                d.workers = opt.workers;
                prepared[i] = prepare_splice(pool[i].make(opt.samples), d);
            }
            auto [bar, tr] = apply_correction(*prepared[i], prepared[i]->wr_tilde + w, std::nullopt, opt.workers);
            worst_err = std::max(worst_err, tr.error());
            worst_conn = std::max(worst_conn, std::abs(tr.connector_area));
            worst_fuller_out = std::max(worst_fuller_out, fuller_check(bar).residual_mod2);
            if (tr.error() >= tol.writhe || !tr.embedded_after || !tr.locality) ++failures;
        } catch (const Error& e) {
            ++errors;
            if (first_error.empty()) first_error = pool[i].name + ": " + e.what();
        }
    }
    const double secs3 = sw3.seconds();

    emit({2, "fuller relation", std::max(worst_fuller_corpus, worst_fuller_out) < tol.fuller && errors == 0,
          "max residual corpus " + detail::sci(worst_fuller_corpus) + ", deformed " + detail::sci(worst_fuller_out) +
              " < " + detail::sci(tol.fuller),
          0.0});
    emit({3, "writhe fixing", failures == 0 && errors == 0,
          std::to_string(opt.trials) + " trials |w|<4.9, max err " + detail::sci(worst_err) + " < " +
              detail::sci(tol.writhe) + ", " + std::to_string(failures) + " failed, " + std::to_string(errors) +
              " errors" + (first_error.empty() ? "" : " (" + first_error + ")"),
          secs3});

    // 4. helix algebra
    {
        detail::Stopwatch sw;
        std::uniform_int_distribution<int> turns(1, 8);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst_pitch = 0.0, worst_ball = 0.0;
        for (std::size_t k = 0; k < opt.helix_trials; ++k) {
            const int n = turns(rng);
            const double w = (2.0 * unit(rng) - 1.0) * n * (1.0 - 1e-9);
            const double eps = 0.01 + 2.0 * unit(rng);
            const double S = unit(rng);
            const HelixSpec h = helix_params(w, n, eps, S);
            if (h.r > 0.0 || h.p > 0.0)
                worst_pitch = std::max(worst_pitch, std::abs(std::sin(h.pitch_angle()) - (1.0 - std::abs(w) / n)));
            const double ball = S * eps / (2.0 * n);
            const double turn = (h.s4 - h.s3) / n;
            for (int j = 0; j <= 256; ++j) {
                const double s = h.s3 + (h.s4 - h.s3) * j / 256.0;
                const int which = std::min(n - 1, static_cast<int>((s - h.s3) / turn));
                const Vec3 centre{0.0, 0.0, -0.5 * h.height() + (which + 0.5) * h.p};
                const double excess = distance(h.position(s), centre) - ball;
                worst_ball = std::max(worst_ball, excess / std::max(ball, 1e-300));
            }
        }
        emit({4, "helix algebra", worst_pitch < tol.pitch && worst_ball <= 1e-12,
              std::to_string(opt.helix_trials) + " specs, max |sin psi - (1-|w|/n)| = " + detail::sci(worst_pitch) +
                  " < " + detail::sci(tol.pitch) + ", max relative ball excess " + detail::sci(worst_ball) + " <= 0",
              sw.seconds()});
    }

    // 6. family constancy (5 is reported after it to include the family)
    detail::Stopwatch sw6;
    const ParamSpace space = ParamSpace::sphere(1, opt.family_nodes);
    const CurveFamily raw = make_coil_family(space, 4, 2.0, 0.3, opt.family_samples);
    std::optional<CurveFamily> fam;
    std::string fam_error;
    double variation = 0.0, max_w = 0.0, deviation = 0.0;
    int shared_n = 0;
    try {
        fam = correct_family(raw, {.workers = opt.workers});
        double hi = -1e300, lo = 1e300;
        for (const auto& t : fam->traces) {
            hi = std::max(hi, t.wr_input);
            lo = std::min(lo, t.wr_input);
            max_w = std::max(max_w, std::abs(t.w_applied));
            worst_conn = std::max(worst_conn, std::abs(t.connector_area));
        }
        variation = hi - lo;
        shared_n = fam->traces.front().helix.n;
        deviation = max_deviation(*fam);
    } catch (const Error& e) {
        fam_error = e.what();
    }
    const double secs6 = sw6.seconds();
    emit({5, "connector cancellation", errors == 0 && fam && worst_conn < tol.connector,
          "max |area(iota+xi)| = " + detail::sci(worst_conn) + " < " + detail::sci(tol.connector) +
              " over all corrections",
          0.0});
    emit({6, "family constancy",
          fam && variation >= 1.0 && deviation < tol.family && max_w < shared_n,
          fam ? std::to_string(space.size()) + " nodes, variation " + detail::sci(variation) + " >= 1, max dev " +
                    detail::sci(deviation) + " < " + detail::sci(tol.family) + ", max|w| " + detail::sci(max_w) +
                    " < n=" + std::to_string(shared_n)
              : "correction failed: " + fam_error,
          secs6});

    // 7. homotopy endpoints and sweep
    {
        detail::Stopwatch sw;
        bool exact = false;
        double half = std::numeric_limits<double>::infinity(), jump = 0.0;
        if (fam) {
            exact = true;
            half = 0.0;
            const CurveFamily one = omega_homotopy(raw, *fam, 1.0);
            const CurveFamily mid = omega_homotopy(raw, *fam, 0.5);
            const CurveFamily tilde = tilde_family(raw, *fam);
            for (std::size_t i = 0; i < raw.size(); ++i) {
                exact = exact && one.curves[i].points() == fam->curves[i].points();
                for (std::size_t j = 0; j < mid.curves[i].size(); ++j)
                    half = std::max(half, distance(mid.curves[i][j], tilde.curves[i][j]));
            }
            for (std::size_t q = 1; q <= opt.sweep_nodes; ++q) {
                const std::size_t node = q * (raw.size() / 2) / opt.sweep_nodes;
                double prev = 0.0;
                for (int k = 0; k <= 20; ++k) {
                    const double wr =
                        writhe_polygonal(homotopy_curve(raw.curves[node], fam->traces[node], 0.05 * k), opt.workers)
                            .value;
                    if (k > 0) jump = std::max(jump, std::abs(wr - prev));
                    prev = wr;
                }
            }
        }
        emit({7, "homotopy endpoints", exact && half < tol.homotopy_half && jump < tol.sweep_jump,
              std::string("t=1 ") + (exact ? "bit-exact" : "differs") + ", t=1/2 max dist " + detail::sci(half) +
                  " < " + detail::sci(tol.homotopy_half) + ", sweep max jump " + detail::sci(jump) + " < " +
                  detail::sci(tol.sweep_jump) + " (" + std::to_string(opt.sweep_nodes) + " nodes, dt=0.05)",
              sw.seconds()});
    }

    // 8. convergence of the quadrature towards the polygonal oracle: the
    // least-squares slope of log(delta) against log(N) is negative and the
    // last three resolutions are non-increasing
    {
        detail::Stopwatch sw;
        bool trend = true;
        std::string detail_text;
        for (const auto& e : corpus) {
            std::vector<double> d;
            std::string row = e.name + ":";
            for (std::size_t n = 256; n <= 4096; n *= 2) {
                d.push_back(std::max(*cross_validate(e.make(n), kDefaultBand, opt.workers).oracle_delta,
                                     tol.convergence_floor));
                row += " " + detail::sci(d.back());
            }
            const double slope = detail::log_slope(d);
            const bool floor = std::all_of(d.begin(), d.end(), [&](double x) { return x <= tol.convergence_floor; });
            bool tail = true;
            for (std::size_t i = d.size() - 2; i < d.size(); ++i) tail = tail && d[i] <= d[i - 1];
            if (!floor && !(slope < 0.0 && tail)) trend = false;
            row += floor ? " (at floor)" : " (slope " + detail::sci(slope) + ")";
            detail_text += (detail_text.empty() ? "" : "; ") + row;
        }
        emit({8, "convergence", trend, "delta at N=256..4096: " + detail_text, sw.seconds()});
    }
    return out;
}

}  // namespace writhekit
