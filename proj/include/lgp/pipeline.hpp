#ifndef LGP_PIPELINE_HPP
#define LGP_PIPELINE_HPP

#include <string>

#include "lgp/reparam.hpp"

namespace lgp {

struct JobConfig {
    std::string f_text;
    std::string g_text; // empty in plane mode
    Box3 box{Rat(-2), Rat(2), Rat(-2), Rat(2), Rat(-2), Rat(2)};
    double epsilon = 1e-2;
    std::optional<Rat> s_override;
    double vt_threshold = 100.0;
    int samples_n = 19;
    double tangent_tau = 1e-3;
    std::vector<double> d_grid = {-0.5, 0.5, 1.0, 2.0};

    void validate() const;
};

struct OutputPiece {
    enum class Kind { Plane, Graph, Reparam };
    Kind kind = Kind::Plane;

    SegApprox plane;       // plane mode
    SpacePiece space;      // space mode (graph data kept also when reparametrized)
    std::optional<ReparamTriple> triple;
    double reparam_err = 0;
    double total_bound = 0; // certified distance bound to the true curve
    bool rational = true;
    int h_segment = -1, hbar_segment = -1;
};

struct G1Joint {
    std::array<double, 3> at;
    double cross_norm;
};

struct PiecewiseOutput {
    bool space_mode = true;
    JobConfig cfg;

    // provenance
    Rat s;
    double r = 0, R = 0;
    std::vector<std::array<std::string, 2>> alphas; // enclosure bounds as strings
    double eps_nonvt = 0, eps_vt = 0;

    std::vector<OutputPiece> pieces;

    // topology summary
    int loops = 0;
    int components = 0;
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<double, 3>> singular_points;
    std::vector<std::array<double, 3>> vt_points;

    // checks
    int disjoint_pairs_checked = 0;
    bool disjoint_ok = true;
    double g1_max_cross = 0;
    std::vector<G1Joint> joints;
    double max_piece_bound = 0;

    std::vector<std::string> diagnostics;
};

/// The full certified space pipeline (topology, shear, correspondence,
/// fitting, recovery, reparametrization, checks).
PiecewiseOutput run_space_pipeline(const JobConfig& cfg);

/// The standalone plane engine.
PiecewiseOutput run_plane_pipeline(const JobConfig& cfg);

/// Deterministic exports (fixed 17-significant-digit decimal strings,
/// stable ordering).
std::string export_json(const PiecewiseOutput& out);
std::string export_svg(const PiecewiseOutput& out);               // plane mode only
std::string export_polyline(const PiecewiseOutput& out, int density = 100);

} // namespace lgp

#endif
