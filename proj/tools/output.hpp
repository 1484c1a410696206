// Run directory handling for the command-line tool: data files, a small
// hand-written SVG line chart, and the manifest that lists every file.
#pragma once

#include <string>
#include <vector>

#include "tfstar/io.hpp"
#include "tfstar/profile.hpp"

namespace tfcli {

struct Series {
    std::string name;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
};

struct Chart {
    std::string title, xlabel, ylabel;
    bool log_x = false;
    std::vector<Series> series;
};

std::string render_svg(const Chart& chart);

class RunOutput {
public:
    RunOutput(std::string dir, std::string command, nlohmann::json config);

    void table(const std::string& name, const tfstar::Table& t, const std::string& kind);
    void profile_csv(const std::string& name, const tfstar::RadialProfile& p);
    void svg(const std::string& name, const Chart& c, const std::string& kind);
    void json(const std::string& name, const nlohmann::json& j, const std::string& kind);

    nlohmann::json& summary() { return summary_; }
    /// Writes manifest.json; call once at the end.
    void finish(double seconds, const std::string& status);

private:
    std::string path(const std::string& name) const;
    void record(const std::string& name, const std::string& kind, std::size_t rows);

    std::string dir_, command_;
    nlohmann::json config_;
    nlohmann::json records_ = nlohmann::json::array();
    nlohmann::json summary_ = nlohmann::json::object();
};

/// plot.csv (r, rho_e, rho_p, ratio) and plot.svg of both densities.
/// The ratio cell is empty where the proton density vanishes.
void emit_plot_data(RunOutput& out, const tfstar::RadialProfile& p, const std::string& title);

}  // namespace tfcli
