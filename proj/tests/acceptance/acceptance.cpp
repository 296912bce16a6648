// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line through the listener below. Shared runs are cached so the reference
// trajectory is integrated once.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "sirtax/sirtax.hpp"

using namespace sirtax;

namespace {

class CriterionReporter : public Catch::EventListenerBase {
public:
    using EventListenerBase::EventListenerBase;
    void testCaseEnded(const Catch::TestCaseStats& stats) override {
        std::printf("[%s] %s\n", stats.totals.assertions.allPassed() ? "PASS" : "FAIL",
                    stats.testInfo->name.c_str());
        std::fflush(stdout);
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> lattice(double t_end, int n) {
    std::vector<double> v;
    for (int k = 0; k <= n; ++k) v.push_back(t_end * k / n);
    return v;
}

/// Reference scenario: Table-1 rates, K=15, three seeds, 65x65 on [0,10]^2,
/// t_end=10, safety 0.5, clamping off; sampled every quarter time unit.
struct ReferenceRuns {
    Grid grid;
    RunResult unclamped;
    RunResult clamped;
    double build_seconds = 0.0;
};

const ReferenceRuns& reference_runs() {
    static const ReferenceRuns cached = [] {
        const auto t0 = std::chrono::steady_clock::now();
        RunConfig c = parse_config("");
        ReferenceRuns out{grid_from_config(c), {}, {}, 0.0};
        const SimState s0 = initial_state(c, out.grid);
        out.unclamped = run(s0, c.params, out.grid, c.control, c.t_end, lattice(c.t_end, 40));
        StepControl clamping = c.control;
        clamping.clamping = true;
        out.clamped = run(s0, c.params, out.grid, clamping, c.t_end, lattice(c.t_end, 40));
        out.build_seconds = seconds_since(t0);
        return out;
    }();
    return cached;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "sirtax_acceptance" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

Figure1Result figure1_into(const std::string& dir_name) {
    RunConfig c = parse_config("");
    c.mode = RunMode::figure1_pair;
    c.out_dir = fresh_dir(dir_name).string();
    return run_mode_figure1(c);
}

/// Stabilization: a series passes when its running max stays below ten times
/// its first-quarter max; an identically-vanishing series passes outright.
bool stabilizes(const std::vector<DiagnosticsRow>& rows, double (*get)(const DiagnosticsRow&),
                double t_quarter, const char* name) {
    double q1 = 0.0, total = 0.0;
    for (const DiagnosticsRow& r : rows) {
        if (r.t <= t_quarter) q1 = std::max(q1, get(r));
        total = std::max(total, get(r));
    }
    const bool ok = total <= 1e-14 || total < 10.0 * q1;
    std::printf("    %-22s first-quarter max %.4e, running max %.4e -> %s\n", name, q1, total,
                ok ? "stable" : "exceeds 10x");
    return ok;
}

} // namespace

CATCH_REGISTER_LISTENER(CriterionReporter)

TEST_CASE("criterion 1: disease-free fixed point is preserved to t=10") {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid grid = build_grid(2, {10.0, 10.0}, {65, 65});
    const SimState s0 =
        make_state(0.0, Field(grid, 1.0), Field(grid, 0.0), Field(grid, 0.0));
    const RunConfig c = parse_config("");
    const RunResult r = run(s0, c.params, grid, c.control, 10.0, {});

    double deviation = 0.0;
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        deviation = std::max(deviation, std::abs(r.final_state.S[k] - 1.0));
        deviation = std::max(deviation, std::abs(r.final_state.I[k]));
        deviation = std::max(deviation, std::abs(r.final_state.R[k]));
    }
    CHECK(deviation <= 1e-12);
    CHECK(seconds_since(t0) < 10.0);
}

TEST_CASE("criterion 2: range preservation without clamping on the reference run") {
    const ReferenceRuns& ref = reference_runs();
    REQUIRE(ref.unclamped.snapshots.size() == 41);

    for (std::size_t k = 0; k < ref.unclamped.snapshots.size(); ++k) {
        const DiagnosticsRow& row = ref.unclamped.diagnostics.rows[k];
        CHECK(row.min_S >= -1e-10);
        CHECK(row.max_S <= 1.0 + 1e-10);
        CHECK(field_min(ref.unclamped.snapshots[k].I) >= -1e-10);
    }
    CHECK(ref.clamped.clamp_events == 0);
    CHECK(ref.build_seconds < 120.0);
}

TEST_CASE("criterion 3: taxis run carries more infected and more susceptible mass at t=10") {
    const auto t0 = std::chrono::steady_clock::now();
    const Figure1Result fig = figure1_into("criterion3");
    const DiagnosticsRow& taxis = fig.taxis.diagnostics.rows.back();
    const DiagnosticsRow& no_taxis = fig.no_taxis.diagnostics.rows.back();
    REQUIRE(taxis.t == 10.0);

    std::printf("    mass_I: K=15 %.6f vs K=0 %.6f (rel %+.3e)\n", taxis.mass_I, no_taxis.mass_I,
                taxis.mass_I / no_taxis.mass_I - 1.0);
    std::printf("    mass_S: K=15 %.6f vs K=0 %.6f (rel %+.3e)\n", taxis.mass_S, no_taxis.mass_S,
                taxis.mass_S / no_taxis.mass_S - 1.0);
    CHECK(taxis.mass_I >= no_taxis.mass_I * (1.0 + 1e-4));
    CHECK(taxis.mass_S >= no_taxis.mass_S * (1.0 + 1e-4));
    CHECK(seconds_since(t0) < 300.0);
}

TEST_CASE("criterion 4: vanishing-regularization distances form a Cauchy sequence") {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig c = parse_config("grid.nodes = 33");
    const Grid grid = grid_from_config(c);
    const auto entries = epsilon_continuation(initial_state(c, grid), c.params, grid, c.control,
                                              5.0, {0.5, 0.25, 0.125, 0.0625, 0.0},
                                              lattice(5.0, 20));
    REQUIRE(entries.size() == 5);
    std::vector<double> d;
    for (std::size_t k = 1; k < entries.size(); ++k) {
        d.push_back(*entries[k].distance_to_previous);
        std::printf("    eps %.4g -> %.4g: distance %.6f\n", entries[k - 1].eps, entries[k].eps,
                    d.back());
    }
    for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] < d[k - 1]);
    CHECK(d.back() < 0.5 * d.front());
    CHECK(seconds_since(t0) < 300.0);
}

TEST_CASE("criterion 5: 1D susceptibles with a positive floor stay strictly positive") {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig c = parse_config(
        "mode = positivity-1d\ngrid.dim = 1\ngrid.nodes = 257\n"
        "ic.amplitudes = 0.1 0.2 0.3\nic.centers = 2.5 5 7.5\nic.sigma = 0.25\n");
    c.out_dir = fresh_dir("criterion5").string();
    const RunResult r = run_mode_positivity_1d(c);
    std::printf("    reported floor: min over run of min_x S = %.6e (informational: > 1e-3 expected)\n",
                r.min_S_over_run);
    CHECK(r.min_S_over_run > 0.0);
    CHECK(seconds_since(t0) < 30.0);
}

TEST_CASE("criterion 6: manufactured-solution convergence orders") {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Grid> grids = {build_grid(2, {10.0, 10.0}, {33, 33}),
                                     build_grid(2, {10.0, 10.0}, {65, 65}),
                                     build_grid(2, {10.0, 10.0}, {129, 129})};

    for (MmsOperator op : {MmsOperator::laplacian, MmsOperator::gradient}) {
        const auto rows = mms_convergence_study(op, grids);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            std::printf("    %s h=%.4f error=%.3e order=%.3f\n",
                        op == MmsOperator::laplacian ? "laplacian" : "gradient ", rows[k].h,
                        rows[k].error, *rows[k].observed_order);
            CHECK(*rows[k].observed_order >= 1.7);
            CHECK(*rows[k].observed_order <= 2.3);
        }
    }
    const auto upw = mms_convergence_study(MmsOperator::upwind_taxis, grids);
    for (std::size_t k = 1; k < upw.size(); ++k) {
        std::printf("    upwind    h=%.4f error=%.3e order=%.3f\n", upw[k].h, upw[k].error,
                    *upw[k].observed_order);
        CHECK(*upw[k].observed_order >= 0.7);
        CHECK(*upw[k].observed_order <= 1.5);
    }
    CHECK(seconds_since(t0) < 60.0);
}

TEST_CASE("criterion 7: discrete conservation of both flux-form operators") {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid grid = build_grid(2, {10.0, 10.0}, {33, 33});
    const double tol = 1e-12 * static_cast<double>(grid.node_count());
    const double pi = 3.14159265358979323846;

    double worst = 0.0;
    for (int m = 0; m < 100; ++m) {
        // fixed cosine series, coefficients varying with the field index
        Field S(grid), I(grid);
        for (std::size_t k = 0; k < grid.node_count(); ++k) {
            const auto x = grid.node_coords(k);
            double s = 0.0, i = 0.0;
            for (int p = 0; p <= 2; ++p)
                for (int q = 0; q <= 2; ++q) {
                    const double cs = std::sin(0.37 * m + 1.1 * p + 2.3 * q + 0.2);
                    const double ci = std::cos(0.59 * m + 1.7 * p + 0.9 * q + 1.4);
                    const double mode =
                        std::cos(p * pi * x[0] / 10.0) * std::cos(q * pi * x[1] / 10.0);
                    s += cs * mode;
                    i += ci * mode;
                }
            S[k] = 0.5 + 0.4 * s / 9.0;
            I[k] = 1.0 + i / 9.0;
        }
        worst = std::max(worst, std::abs(field_integral(neumann_laplacian(I))));
        worst = std::max(worst, std::abs(field_integral(upwind_taxis_divergence(S, I, 15.0))));
    }
    std::printf("    worst |volume-weighted sum| over 100 fields: %.3e (tol %.3e)\n", worst, tol);
    CHECK(worst <= tol);
    CHECK(seconds_since(t0) < 10.0);
}

TEST_CASE("criterion 8: supersolution slack bounded by the calibrated discretization allowance") {
    const auto t0 = std::chrono::steady_clock::now();
    // calibrated on the 33x33 reference run (measured 0.088) and frozen
    const double c_cal = 0.3;

    RunConfig c33 = parse_config("grid.nodes = 33");
    const Grid g33 = grid_from_config(c33);
    const SimState s33 = initial_state(c33, g33);
    const RunResult r33 = run(s33, c33.params, g33, c33.control, 10.0, lattice(10.0, 40));
    double min33 = 0.0;
    for (const auto& row : r33.diagnostics.rows)
        min33 = std::min(min33, row.supersolution_slack);
    const double dt33 = stable_dt(s33, c33.params, g33, c33.control);
    const double h33 = g33.min_spacing();
    std::printf("    33x33 min slack %.6f, measured constant %.4f (frozen %.2f)\n", min33,
                -min33 / (dt33 + h33 * h33), c_cal);
    CHECK(-min33 / (dt33 + h33 * h33) <= c_cal);

    const ReferenceRuns& ref = reference_runs();
    double min65 = 0.0;
    for (const auto& row : ref.unclamped.diagnostics.rows)
        min65 = std::min(min65, row.supersolution_slack);
    RunConfig c65 = parse_config("");
    const SimState s65 = initial_state(c65, ref.grid);
    const double dt65 = stable_dt(s65, c65.params, ref.grid, c65.control);
    const double h65 = ref.grid.min_spacing();
    const double bound = -(dt65 + h65 * h65) * c_cal;
    std::printf("    65x65 min slack %.6f vs bound %.6f\n", min65, bound);
    CHECK(min65 >= bound);
    CHECK(seconds_since(t0) < 180.0);
}

TEST_CASE("criterion 9: monitored norms stabilize over the reference run") {
    const ReferenceRuns& ref = reference_runs();
    const auto& rows = ref.unclamped.diagnostics.rows;
    const double quarter = 2.5;

    CHECK(stabilizes(rows, [](const DiagnosticsRow& r) { return r.norm_grad_I; }, quarter,
                     "norm_grad_I"));
    CHECK(stabilizes(rows, [](const DiagnosticsRow& r) { return r.norm_I; }, quarter, "norm_I"));
    CHECK(stabilizes(rows, [](const DiagnosticsRow& r) { return r.norm_sqrtS_lap_I; }, quarter,
                     "norm_sqrtS_lap_I"));
    CHECK(stabilizes(rows, [](const DiagnosticsRow& r) { return r.norm_sqrt_eps_lap_I; }, quarter,
                     "norm_sqrt_eps_lap_I"));
    CHECK(stabilizes(rows, [](const DiagnosticsRow& r) { return r.norm_dt_I; }, quarter,
                     "norm_dt_I"));
    CHECK(stabilizes(rows, [](const DiagnosticsRow& r) { return r.norm_grad_S; }, quarter,
                     "norm_grad_S"));
    CHECK(stabilizes(rows, [](const DiagnosticsRow& r) { return r.dual_norm_dt_S; }, quarter,
                     "dual_norm_dt_S"));

    for (const DiagnosticsRow& r : rows) {
        REQUIRE(std::isfinite(r.norm_grad_I));
        REQUIRE(std::isfinite(r.norm_dt_I));
        REQUIRE(std::isfinite(r.dual_norm_dt_S));
    }
}

TEST_CASE("criterion 10: repeated figure-1 executions produce byte-identical manifests") {
    const Figure1Result first = figure1_into("criterion10_a");
    const Figure1Result second = figure1_into("criterion10_b");
    (void)first;
    (void)second;
    const auto root = std::filesystem::temp_directory_path() / "sirtax_acceptance";
    const std::string a = slurp(root / "criterion10_a" / "manifest.txt");
    const std::string b = slurp(root / "criterion10_b" / "manifest.txt");
    CHECK(a == b);
    CHECK(a.find("taxis/S_000.csv") != std::string::npos);
}
