// Acceptance suite: one line per criterion, non-zero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wecs/config.hpp"
#include "wecs/drivetrain.hpp"
#include "wecs/mppt.hpp"
#include "wecs/reference_data.hpp"
#include "wecs/report.hpp"
#include "wecs/simulation.hpp"

using namespace wecs;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double pct(double x) { return 100.0 * x; }

Outcome table_reproduction() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = report_table(default_config());
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double worst = 0.0;
    o.check(rows.size() == 9, "expected 9 rows");
    for (const auto& r : rows) {
        if (!r.reference) {
            o.check(false, fmt::format("no reference for v={}", r.model.wind_speed));
            continue;
        }
        for (double d : {*r.dev_p_wt(), *r.dev_omega(), *r.dev_rpm(), *r.dev_p_est()}) worst = std::max(worst, std::abs(d));
    }
    o.check(worst <= 0.005, fmt::format("worst deviation {:.4f}%", pct(worst)));
    o.check(elapsed < 1.0, fmt::format("took {:.3f} s", elapsed));
    if (o.pass) o.detail = fmt::format("worst deviation {:.3f}% over P_wt, omega, n, P_est; {:.1f} ms", pct(worst), elapsed * 1e3);
    return o;
}

Outcome mpp_self_consistency() {
    Outcome o;
    const TurbineParams p;
    const auto opt = optimal_tsr(p);
    const auto [l_grid, cp_grid] = oracle::cp_grid_argmax(1e-4);
    o.check(std::abs(opt.lambda_star - 2.992) <= 1e-3, fmt::format("lambda* {}", opt.lambda_star));
    o.check(std::abs(opt.cp_star - 0.1703) <= 1e-4, fmt::format("Cp* {}", opt.cp_star));
    o.check(std::abs(opt.lambda_star - l_grid) <= 1e-4, fmt::format("grid lambda {}", l_grid));
    o.check(std::abs(opt.cp_star - cp_grid) <= 1e-4, fmt::format("grid Cp {}", cp_grid));
    const double ratio0 = optimal_operating_point(4.0, p).omega / 4.0;
    double worst = 0.0;
    for (double v = 4.0; v <= 12.0 + 1e-9; v += 0.1)
        worst = std::max(worst, rel(optimal_operating_point(v, p).omega / v, ratio0));
    o.check(worst <= 1e-6, fmt::format("omega*/v spread {:.2e}", worst));
    if (o.pass)
        o.detail = fmt::format("lambda*={:.5f} Cp*={:.6f} (grid {:.4f}/{:.6f}), omega*/v spread {:.1e}", opt.lambda_star,
                               opt.cp_star, l_grid, cp_grid, worst);
    return o;
}

Outcome cubic_law() {
    Outcome o;
    const TurbineParams p;
    const double model = optimal_operating_point(12.0, p).power / optimal_operating_point(4.0, p).power;
    const auto rows = reference_mpp_rows();
    const double data = rows.back().p_wt / rows.front().p_wt;
    o.check(rel(model, 27.0) <= 1e-9, fmt::format("model ratio {}", model));
    o.check(rel(data, 27.0) <= 1e-3, fmt::format("data ratio {}", data));
    if (o.pass) o.detail = fmt::format("model {:.12f}, data {:.5f}", model, data);
    return o;
}

Outcome identification() {
    Outcome o;
    std::vector<MppSample> table;
    for (const auto& r : reference_mpp_rows()) table.push_back({r.wind_speed, r.p_wt, r.omega});
    const auto id = identify_params(table, 1.225, TurbineParams{});
    o.check(rel(id.rotor_radius, 2.5) <= 0.01, fmt::format("R {}", id.rotor_radius));

    TurbineParams truth;
    truth.rotor_radius = 1.8;
    truth.air_density = 1.18;
    std::vector<MppSample> synthetic;
    for (double v = 3.0; v <= 13.0; v += 1.0) {
        const auto op = optimal_operating_point(v, truth);
        synthetic.push_back({v, op.power, op.omega});
    }
    const auto back = identify_params(synthetic, truth.air_density, TurbineParams{});
    const double err = rel(back.rotor_radius, truth.rotor_radius);
    o.check(err <= 1e-9, fmt::format("synthetic R error {:.2e}", err));
    if (o.pass)
        o.detail = fmt::format("table R={:.4f} m Cp*={:.4f}; synthetic R error {:.1e}", id.rotor_radius, id.cp_star, err);
    return o;
}

Outcome integrator() {
    Outcome o;
    DrivetrainParams p;
    p.j_motor = 0.5;
    p.j_gearbox = 0.0;
    p.j_generator = 0.0;
    const double j = 0.5, torque = 30.0, c = 1.5, dt = 1e-3;
    const LoadTorque drag = [c](double w) { return c * w; };
    ShaftState s;
    EnergyTally tally;
    double worst = 0.0;
    for (int k = 1; k <= 10000; ++k) {
        s = step_dynamics(s, torque, drag, p, dt, &tally);
        const double exact = torque / c * (1.0 - std::exp(-c * k * dt / j));
        worst = std::max(worst, rel(s.omega, exact));
    }
    const double balance = rel(tally.load_work + 0.5 * j * s.omega * s.omega, tally.drive_work);
    o.check(worst <= 1e-6, fmt::format("trajectory error {:.2e}", worst));
    o.check(balance <= 1e-3, fmt::format("energy error {:.2e}", balance));
    if (o.pass) o.detail = fmt::format("trajectory error {:.1e}, energy error {:.1e}", worst, balance);
    return o;
}

Outcome gearbox_laws() {
    Outcome o;
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> wd(0.0, 100.0), td(-1000.0, 1000.0), id(0.05, 200.0), ed(0.3, 1.0);
    double worst_lossless = 0.0, worst_lossy = 0.0;
    for (int i = 0; i < 10000; ++i) {
        DrivetrainParams p;
        p.gear_ratio = id(rng);
        const double w = wd(rng), t = td(rng);
        const auto g = reflect_to_generator(w, t, p);
        const double scale = std::max(std::abs(w * t), 1e-300);
        worst_lossless = std::max(worst_lossless, std::abs(g.omega * g.torque - w * t) / scale);
        p.gearbox_efficiency = ed(rng);
        const auto h = reflect_to_generator(w, t, p);
        worst_lossy = std::max(worst_lossy, std::abs(h.omega * h.torque - p.gearbox_efficiency * w * t) / scale);
    }
    // exact up to floating-point rounding of the two products
    o.check(worst_lossless <= 4 * 2.3e-16, fmt::format("lossless error {:.2e}", worst_lossless));
    o.check(worst_lossy <= 8 * 2.3e-16, fmt::format("lossy error {:.2e}", worst_lossy));
    if (o.pass) o.detail = fmt::format("10000 draws, max rel error {:.1e} / {:.1e}", worst_lossless, worst_lossy);
    return o;
}

Outcome correction_inertia() {
    Outcome o;
    DrivetrainParams p;
    p.j_motor = 1.0;
    p.j_gearbox = 0.0;
    p.j_generator = 0.0;
    const CorrectionSweep sweep;
    const double zero = estimate_correction_inertia(0.0, p, 10.0, sweep);
    const double jc = estimate_correction_inertia(0.010, p, 10.0, sweep);
    const double doubled = estimate_correction_inertia(0.010, p, 20.0, sweep);
    const double expected =
        oracle::correction_sweep(1.0, 10.0, 10, sweep.jc_min, sweep.jc_max, sweep.resolution, sweep.horizon, sweep.dt);
    o.check(std::abs(zero) <= sweep.resolution, fmt::format("J_c(0) = {}", zero));
    o.check(std::abs(jc - expected) <= 0.5 * sweep.resolution, fmt::format("J_c {} vs sweep {}", jc, expected));
    o.check(std::abs(doubled - jc) <= sweep.resolution, fmt::format("probe doubling {} vs {}", doubled, jc));
    if (o.pass)
        o.detail = fmt::format("J_c(0)={:.4f}, J_c(10 ms)={:.4f} kg m^2 (sweep {:.4f}, doubled probe {:.4f})", zero, jc,
                               expected, doubled);
    return o;
}

Outcome closed_loop() {
    Outcome o;
    const auto cfg = default_config();
    std::string detail;
    for (double v : {4.0, 8.0, 12.0}) {
        Scenario s = cfg.scenario("mpp-" + std::to_string(static_cast<int>(v)));
        s.duration = 60.0;
        const auto r = run_scenario(s, cfg);
        const double target = find_reference_row(v)->omega;
        const double err = rel(r.summary.final_sample.omega, target);
        o.check(err <= 0.01, fmt::format("v={} omega error {:.3f}%", v, pct(err)));
        detail += fmt::format("v={}: {:.3f}%  ", v, pct(err));
    }
    const auto step = run_scenario(cfg.scenario("step-4-12"), cfg);
    const ReferenceRow row = *find_reference_row(12.0);
    const double w_err = rel(step.summary.final_sample.omega, row.omega);
    const double p_err = rel(step.summary.final_sample.p_wt, row.p_wt);
    o.check(w_err <= 0.005 && p_err <= 0.005, fmt::format("step 4->12 errors {:.3f}% / {:.3f}%", pct(w_err), pct(p_err)));
    if (o.pass) o.detail = detail + fmt::format("step 4->12: omega {:.3f}%, P_wt {:.3f}%", pct(w_err), pct(p_err));
    return o;
}

Outcome protection_and_determinism() {
    Outcome o;
    const auto cfg = default_config();
    const auto r = run_scenario(cfg.scenario("overvoltage-trip"), cfg);
    const auto& s = r.samples;
    std::size_t first_over = s.size();
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].u_star > cfg.dc_bus.u_max) {
            first_over = i;
            break;
        }
    o.check(first_over < s.size(), "no overvoltage observed");
    if (first_over < s.size()) {
        o.check(s[first_over].trip_latched, "trip not latched on the overvoltage step");
        std::size_t i = first_over;
        bool exported_while_tripped = false;
        for (; i < s.size() && s[i].trip_latched; ++i) exported_while_tripped |= s[i].p_exported != 0.0;
        o.check(!exported_while_tripped, "power exported while tripped");
        o.check(i < s.size(), "trip never reset");
        o.check(!s.back().trip_latched && s.back().p_exported > 0.0, "operation not restored after reset");
    }
    const auto& turb = cfg.scenario("turbulent");
    const bool identical = telemetry_csv(run_scenario(turb, cfg).samples) == telemetry_csv(run_scenario(turb, cfg).samples);
    o.check(identical, "turbulent CSV differs between runs");
    if (o.pass)
        o.detail = fmt::format("tripped at t={:.3f} s (U*={:.1f} V), restored to {:.1f} W; seeded CSV identical",
                               s[first_over].t, s[first_over].u_star, s.back().p_exported);
    return o;
}

Outcome measured_power_surfaced() {
    Outcome o;
    const auto rows = report_table(default_config());
    std::string flagged;
    for (const auto& r : rows) {
        const bool expect = r.model.wind_speed >= 8.0;
        o.check(r.p_gen_exceeds_p_est() == expect, fmt::format("flag wrong at v={}", r.model.wind_speed));
        if (r.p_gen_exceeds_p_est()) flagged += fmt::format("{} ", r.model.wind_speed);
    }
    const auto text = format_table_text(rows);
    const auto csv = format_table_csv(rows);
    o.check(text.find("P_gen > P_est") != std::string::npos, "text report lacks the note");
    o.check(csv.find("p_gen_ref") != std::string::npos, "csv lacks the measured column");
    if (o.pass) o.detail = "measured P_gen reported side by side, exceeds P_est at v = " + flagged + "m/s";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"table-reproduction", table_reproduction},
        {"mpp-self-consistency", mpp_self_consistency},
        {"cubic-law", cubic_law},
        {"identification-round-trip", identification},
        {"integrator-accuracy", integrator},
        {"gearbox-laws", gearbox_laws},
        {"correction-inertia", correction_inertia},
        {"closed-loop-mpp", closed_loop},
        {"protection-and-determinism", protection_and_determinism},
        {"measured-power-comparison", measured_power_surfaced},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("%s %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
