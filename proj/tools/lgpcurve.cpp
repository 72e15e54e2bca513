// Command-line front end: certified piecewise-rational approximation of
// implicit plane curves and of space curves given as surface intersections.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lgp/pipeline.hpp"

namespace {

int log_level() {
    const char* v = std::getenv("LGPCURVE_LOG");
    if (!v) return 1;
    std::string s = v;
    if (s == "off" || s == "0") return 0;
    if (s == "debug" || s == "2") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[lgpcurve] " << msg << "\n";
}

std::vector<lgp::Rat> parse_box(const std::string& text, size_t n) {
    std::vector<lgp::Rat> vals;
    std::string tok;
    std::istringstream is(text);
    while (std::getline(is, tok, ',')) vals.push_back(lgp::rat_from_string(tok));
    if (vals.size() != n)
        throw lgp::input_error("box expects " + std::to_string(n) + " comma-separated values");
    return vals;
}

void write_output(const std::string& data, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw lgp::input_error("cannot open output file " + path);
    os << data;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified rational approximation of algebraic curves"};
    app.require_subcommand(1);

    std::string f_text, g_text, box_text, s_text, export_fmt = "json", out_path;
    double eps = 1e-2;
    int density = 100;
    std::vector<double> grid;

    auto add_common = [&](CLI::App* cmd, bool space) {
        cmd->add_option("--f", f_text, "first polynomial")->required();
        if (space) cmd->add_option("--g", g_text, "second polynomial")->required();
        cmd->add_option("--box", box_text,
                        space ? "x1,x2,y1,y2,z1,z2" : "x1,x2,y1,y2")
            ->required();
        cmd->add_option("--eps", eps, "target precision")->required();
        cmd->add_option("--export", export_fmt, "json|svg|polyline");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--density", density, "polyline samples per piece");
        cmd->add_option("--seed-grid", grid, "free denominator candidates");
        if (space) cmd->add_option("--s", s_text, "shear override (validated)");
    };

    CLI::App* c3 = app.add_subcommand("approx3d", "approximate a space curve f = g = 0");
    add_common(c3, true);
    CLI::App* c2 = app.add_subcommand("approx2d", "approximate a plane curve f = 0");
    add_common(c2, false);

    CLI11_PARSE(app, argc, argv);

    try {
        lgp::JobConfig cfg;
        cfg.f_text = f_text;
        cfg.g_text = g_text;
        cfg.epsilon = eps;
        if (!grid.empty()) cfg.d_grid = grid;
        if (!s_text.empty()) cfg.s_override = lgp::rat_from_string(s_text);

        lgp::PiecewiseOutput out;
        if (app.got_subcommand(c3)) {
            auto b = parse_box(box_text, 6);
            cfg.box = lgp::Box3{b[0], b[1], b[2], b[3], b[4], b[5]};
            info("running the space pipeline");
            out = lgp::run_space_pipeline(cfg);
        } else {
            auto b = parse_box(box_text, 4);
            cfg.box = lgp::Box3{b[0], b[1], b[2], b[3], lgp::Rat(-1), lgp::Rat(1)};
            info("running the plane pipeline");
            out = lgp::run_plane_pipeline(cfg);
        }
        info("pieces: " + std::to_string(out.pieces.size()) +
             ", max certified bound: " + std::to_string(out.max_piece_bound));
        for (const auto& d : out.diagnostics) info("note: " + d);

        std::string data;
        if (export_fmt == "json")
            data = lgp::export_json(out);
        else if (export_fmt == "svg")
            data = lgp::export_svg(out);
        else if (export_fmt == "polyline")
            data = lgp::export_polyline(out, density);
        else
            throw lgp::input_error("unknown export format " + export_fmt);
        write_output(data, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
