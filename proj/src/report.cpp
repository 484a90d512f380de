#include "illposed/report.hpp"

#include "illposed/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace illposed {

namespace {

using nlohmann::json;

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

void dump_value(const json& v, std::ostringstream& out, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* newline = indent > 0 ? "\n" : "";
    const char* colon = indent > 0 ? ": " : ":";
    switch (v.type()) {
    case json::value_t::object: {
        if (v.empty()) {
            out << "{}";
            return;
        }
        out << '{' << newline;
        bool first = true;
        for (const auto& [key, value] : v.items()) {
            if (!first) out << ',' << newline;
            first = false;
            out << pad << quoted(key) << colon;
            dump_value(value, out, indent, depth + 1);
        }
        out << newline << close_pad << '}';
        return;
    }
    case json::value_t::array: {
        if (v.empty()) {
            out << "[]";
            return;
        }
        out << '[' << newline;
        bool first = true;
        for (const auto& value : v) {
            if (!first) out << ',' << newline;
            first = false;
            out << pad;
            dump_value(value, out, indent, depth + 1);
        }
        out << newline << close_pad << ']';
        return;
    }
    case json::value_t::number_float: {
        const double x = v.get<double>();
        // JSON has no literal for non-finite values
        out << (std::isfinite(x) ? number(x) : quoted(number(x)));
        return;
    }
    default:
        out << v.dump();
    }
}

double as_double(const json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "nan") return std::nan("");
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        throw InvalidArgument("report value '" + s + "' is not a number");
    }
    return v.get<double>();
}

}  // namespace

ReportFormat report_format_from_name(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw InvalidArgument("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

ReportFormat report_format_from_path(const std::string& path) {
    if (path.ends_with(".csv")) return ReportFormat::csv;
    if (path.ends_with(".json")) return ReportFormat::json;
    throw InvalidArgument("cannot infer report format from '" + path + "'; use --format");
}

void write_csv(const RunReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const RunRow& r : report.rows) {
        out << number(r.epsilon) << ',' << number(r.beta) << ',' << number(r.t) << ',' << number(r.error_h) << ','
            << number(r.bound_rhs) << ',' << number(r.gamma_inv_T) << ',' << number(r.gammaT_times_eps) << ','
            << r.iters << ',' << number(r.residual) << '\n';
    }
}

json report_to_json(const RunReport& report) {
    json rows = json::array();
    for (const RunRow& r : report.rows) {
        json row;
        row["epsilon"] = r.epsilon;
        row["beta"] = r.beta;
        row["t"] = r.t;
        row["error_h"] = r.error_h;
        row["bound_rhs"] = r.bound_rhs;
        row["gamma_inv_T"] = r.gamma_inv_T;
        row["gammaT_times_eps"] = r.gammaT_times_eps;
        row["iters"] = r.iters;
        row["residual"] = r.residual;
        rows.push_back(std::move(row));
    }
    json slopes = json::array();
    for (const SlopeRow& s : report.slopes) {
        slopes.push_back({{"t", s.t},
                          {"slope", s.slope},
                          {"theoretical", s.theoretical},
                          {"points", s.points},
                          {"excluded", s.excluded}});
    }
    json out;
    out["config"] = config_to_json(report.config);
    out["rows"] = std::move(rows);
    out["slopes"] = std::move(slopes);
    out["notices"] = report.notices;
    return out;
}

std::string dump_json(const json& value, int indent) {
    std::ostringstream out;
    dump_value(value, out, indent, 0);
    return out.str();
}

void emit_report(const RunReport& report, ReportFormat format, const std::string& path) {
    if (report.rows.empty()) throw InvalidArgument("refusing to write an empty report");
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    if (format == ReportFormat::csv) {
        write_csv(report, out);
    } else {
        out << dump_json(report_to_json(report)) << '\n';
    }
    out.close();
    if (!out) throw Error("failed writing report to '" + path + "'");
}

std::vector<RunRow> rows_from_json(const json& report) {
    std::vector<RunRow> rows;
    for (const json& j : report.at("rows")) {
        RunRow r;
        r.epsilon = as_double(j.at("epsilon"));
        r.beta = as_double(j.at("beta"));
        r.t = as_double(j.at("t"));
        r.error_h = as_double(j.at("error_h"));
        r.bound_rhs = as_double(j.at("bound_rhs"));
        r.gamma_inv_T = as_double(j.at("gamma_inv_T"));
        r.gammaT_times_eps = as_double(j.at("gammaT_times_eps"));
        r.iters = j.at("iters").get<std::size_t>();
        r.residual = as_double(j.at("residual"));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace illposed
