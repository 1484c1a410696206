#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "tfstar/error.hpp"

namespace tfcli {

using tfstar::ErrorCode;
using tfstar::SolverError;

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '<') out += "&lt;";
        else if (ch == '>') out += "&gt;";
        else if (ch == '&') out += "&amp;";
        else out += ch;
    }
    return out;
}

}  // namespace

std::string render_svg(const Chart& chart) {
    const double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (chart.log_x && s.x[i] <= 0.0)) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(chart.title) + "</text>\n";
    s += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", H - bottom) + "\" x2=\"" + fmt("%.2f", W - right) +
         "\" y2=\"" + fmt("%.2f", H - bottom) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", top) + "\" x2=\"" + fmt("%.2f", left) + "\" y2=\"" +
         fmt("%.2f", H - bottom) + "\" stroke=\"black\"/>\n";
    const std::string xl = chart.log_x ? "1e%.3g" : "%.4g";
    s += "<text x=\"" + fmt("%.2f", left) + "\" y=\"" + fmt("%.2f", H - bottom + 16) + "\" text-anchor=\"middle\">" +
         fmt(xl.c_str(), x0) + "</text>\n";
    s += "<text x=\"" + fmt("%.2f", W - right) + "\" y=\"" + fmt("%.2f", H - bottom + 16) + "\" text-anchor=\"middle\">" +
         fmt(xl.c_str(), x1) + "</text>\n";
    s += "<text x=\"" + fmt("%.2f", left - 6) + "\" y=\"" + fmt("%.2f", H - bottom) + "\" text-anchor=\"end\">" +
         fmt("%.4g", y0) + "</text>\n";
    s += "<text x=\"" + fmt("%.2f", left - 6) + "\" y=\"" + fmt("%.2f", top + 4) + "\" text-anchor=\"end\">" +
         fmt("%.4g", y1) + "</text>\n";
    s += "<text x=\"320\" y=\"" + fmt("%.2f", H - 12) + "\" text-anchor=\"middle\">" + escape(chart.xlabel) + "</text>\n";
    s += "<text x=\"16\" y=\"210\" transform=\"rotate(-90 16 210)\" text-anchor=\"middle\">" + escape(chart.ylabel) +
         "</text>\n";
    double ly = top + 8;
    for (const auto& ser : chart.series) {
        std::string pts;
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (!std::isfinite(ser.y[i]) || (chart.log_x && ser.x[i] <= 0.0)) continue;
            pts += fmt("%.2f", px(ser.x[i])) + "," + fmt("%.2f", py(ser.y[i])) + " ";
        }
        if (!pts.empty()) pts.pop_back();
        s += "<polyline fill=\"none\" stroke=\"" + ser.color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        s += "<text x=\"" + fmt("%.2f", W - right - 110) + "\" y=\"" + fmt("%.2f", ly) + "\" fill=\"" + ser.color + "\">" +
             escape(ser.name) + "</text>\n";
        ly += 16;
    }
    s += "</svg>\n";
    return s;
}

RunOutput::RunOutput(std::string dir, std::string command, nlohmann::json config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw SolverError(ErrorCode::Io, "cannot create output directory " + dir_ + ": " + ec.message());
}

std::string RunOutput::path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

void RunOutput::record(const std::string& name, const std::string& kind, std::size_t rows) {
    for (const auto& r : records_) {
        if (r["file"] == name) throw SolverError(ErrorCode::Io, "file written twice: " + name);
    }
    records_.push_back({{"file", name}, {"kind", kind}, {"rows", rows}});
}

void RunOutput::table(const std::string& name, const tfstar::Table& t, const std::string& kind) {
    tfstar::write_table(t, path(name));
    record(name, kind, t.rows.size());
}

void RunOutput::profile_csv(const std::string& name, const tfstar::RadialProfile& p) {
    tfstar::write_profile_csv(p, path(name));
    record(name, "profile", p.r.size());
}

void RunOutput::svg(const std::string& name, const Chart& c, const std::string& kind) {
    std::ofstream f(path(name));
    if (!f) throw SolverError(ErrorCode::Io, "cannot write " + path(name));
    f << render_svg(c);
    record(name, kind, 0);
}

void RunOutput::json(const std::string& name, const nlohmann::json& j, const std::string& kind) {
    std::ofstream f(path(name));
    if (!f) throw SolverError(ErrorCode::Io, "cannot write " + path(name));
    f << j.dump(2) << "\n";
    record(name, kind, 0);
}

void RunOutput::finish(double seconds, const std::string& status) {
    nlohmann::json m;
    m["command"] = command_;
    m["status"] = status;
    m["config"] = config_;
    m["files"] = records_;
    m["summary"] = summary_;
    m["wall_seconds"] = seconds;
    std::ofstream f(path("manifest.json"));
    if (!f) throw SolverError(ErrorCode::Io, "cannot write manifest");
    f << m.dump(2) << "\n";
}

void emit_plot_data(RunOutput& out, const tfstar::RadialProfile& p, const std::string& title) {
    tfstar::Table t;
    t.header = {"r", "rho_e", "rho_p", "ratio"};
    Series se{"rho_e", {}, {}, "#d62728"}, sp{"rho_p", {}, {}, "#1f77b4"};
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        const double re = tfstar::pow32(p.u_e[i]), rp = tfstar::pow32(p.u_p[i]);
        t.add({tfstar::format_number(p.r[i]), tfstar::format_number(re), tfstar::format_number(rp),
               rp > 0.0 ? tfstar::format_number(re / rp) : ""});
        se.x.push_back(p.r[i]);
        se.y.push_back(re);
        sp.x.push_back(p.r[i]);
        sp.y.push_back(rp);
    }
    out.table("plot.csv", t, "plot-data");
    out.svg("plot.svg", Chart{title, "r", "density", false, {se, sp}}, "plot");
}

}  // namespace tfcli
