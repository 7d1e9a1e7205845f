#include "wecs/report.hpp"

#include <fmt/format.h>

namespace wecs {

namespace {

std::optional<double> relative(double model, std::optional<double> ref) {
    if (!ref || *ref == 0.0) return std::nullopt;
    return (model - *ref) / *ref;
}

std::string percent(std::optional<double> x) {
    return x ? fmt::format("{:+.3f}%", 100.0 * *x) : std::string("-");
}

std::string csv_opt(std::optional<double> x) { return x ? fmt::format("{}", *x) : std::string(); }

}  // namespace

std::optional<double> ComparisonRow::dev_p_wt() const {
    return relative(model.p_wt, reference ? std::optional(reference->p_wt) : std::nullopt);
}
std::optional<double> ComparisonRow::dev_omega() const {
    return relative(model.omega, reference ? std::optional(reference->omega) : std::nullopt);
}
std::optional<double> ComparisonRow::dev_rpm() const {
    return relative(model.rpm, reference ? std::optional(reference->rpm) : std::nullopt);
}
std::optional<double> ComparisonRow::dev_p_est() const {
    return relative(model.p_est, reference ? std::optional(reference->p_est) : std::nullopt);
}

bool ComparisonRow::p_gen_exceeds_p_est() const { return reference && reference->p_gen > reference->p_est; }

std::vector<ComparisonRow> report_table(const BenchConfig& config, const TableRequest& request) {
    const double eta = request.eta_conv.value_or(config.generator.conversion_efficiency);
    const auto rows = mpp_table(request.wind_speeds, config.turbine, eta, reference_mpp_rows());
    std::vector<ComparisonRow> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back({row, find_reference_row(row.wind_speed)});
    return out;
}

std::string format_table_text(std::span<const ComparisonRow> rows) {
    std::string out = fmt::format("{:>6} {:>10} {:>9} {:>9} {:>10} {:>10} | {:>9} {:>9} {:>9} {:>9} | {}\n", "v",
                                  "P_wt[W]", "w[rad/s]", "n[rpm]", "P_est[W]", "P_gen[W]", "dP_wt", "dw", "dn",
                                  "dP_est", "note");
    bool any_excess = false;
    for (const auto& r : rows) {
        const auto& m = r.model;
        const std::string p_gen = m.p_gen_reference ? fmt::format("{:.2f}", *m.p_gen_reference) : "-";
        const bool excess = r.p_gen_exceeds_p_est();
        any_excess = any_excess || excess;
        out += fmt::format("{:>6.2f} {:>10.2f} {:>9.3f} {:>9.2f} {:>10.2f} {:>10} | {:>9} {:>9} {:>9} {:>9} | {}\n",
                           m.wind_speed, m.p_wt, m.omega, m.rpm, m.p_est, p_gen, percent(r.dev_p_wt()),
                           percent(r.dev_omega()), percent(r.dev_rpm()), percent(r.dev_p_est()),
                           excess ? "P_gen > P_est" : "");
    }
    out += "Deviations are model vs. published values. P_gen is measured reference data, not modelled.\n";
    if (any_excess) {
        out += "Rows marked 'P_gen > P_est' show measured output above the constant-efficiency estimate; "
               "the bench does not model this.\n";
    }
    return out;
}

std::string format_table_csv(std::span<const ComparisonRow> rows) {
    std::string out = "v,p_wt,omega,n,p_est,p_gen_ref,dev_p_wt,dev_omega,dev_n,dev_p_est,p_gen_gt_p_est\n";
    for (const auto& r : rows) {
        const auto& m = r.model;
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", m.wind_speed, m.p_wt, m.omega, m.rpm, m.p_est,
                           csv_opt(m.p_gen_reference), csv_opt(r.dev_p_wt()), csv_opt(r.dev_omega()),
                           csv_opt(r.dev_rpm()), csv_opt(r.dev_p_est()), r.p_gen_exceeds_p_est() ? 1 : 0);
    }
    return out;
}

std::string power_curve_csv(std::span<const double> wind_speeds, std::span<const double> omega_grid,
                            const TurbineParams& params) {
    std::string out = "v,omega,lambda,cp,power_w,torque_nm\n";
    for (double v : wind_speeds) {
        for (const auto& op : power_curve(v, omega_grid, params)) {
            out += fmt::format("{},{},{},{},{},{}\n", op.wind_speed, op.omega, op.tsr,
                               power_coefficient(op.tsr, params), op.power, op.torque);
        }
    }
    return out;
}

}  // namespace wecs

#include <sstream>

#include "wecs/error.hpp"

namespace wecs {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
}

}  // namespace

std::vector<MppSample> parse_mpp_samples_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("samples: empty input");
    const auto header = split_csv_line(line);
    int col_v = -1;
    int col_p = -1;
    int col_w = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        const std::string& h = header[static_cast<std::size_t>(i)];
        if (h == "v" || h == "wind_speed") col_v = i;
        if (h == "p" || h == "P" || h == "power" || h == "p_wt") col_p = i;
        if (h == "omega") col_w = i;
    }
    if (col_v < 0 || col_p < 0 || col_w < 0) throw ConfigError("samples: header must name v, p and omega columns");

    std::vector<MppSample> samples;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        auto cell = [&](int col) {
            if (col >= static_cast<int>(cells.size()))
                throw ConfigError("samples: line " + std::to_string(line_no) + " has too few columns");
            try {
                return std::stod(cells[static_cast<std::size_t>(col)]);
            } catch (const std::exception&) {
                throw ConfigError("samples: line " + std::to_string(line_no) + " has a non-numeric value");
            }
        };
        samples.push_back({cell(col_v), cell(col_p), cell(col_w)});
    }
    return samples;
}

}  // namespace wecs
