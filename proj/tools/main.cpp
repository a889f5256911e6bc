// Command-line pipeline: complex construction, homology embedding,
// independent-basis extraction, loop detection, exports, and the
// perturbation lab.
//
// Exit codes: 0 success, 1 usage/input error, 2 numerical failure,
// 3 topology ambiguity (Betti number undecided).

#include <hodgeloop/boundary.hpp>
#include <hodgeloop/complex.hpp>
#include <hodgeloop/hodge.hpp>
#include <hodgeloop/ica.hpp>
#include <hodgeloop/io.hpp>
#include <hodgeloop/loops.hpp>
#include <hodgeloop/nullspace.hpp>
#include <hodgeloop/perturb.hpp>
#include <hodgeloop/point_cloud.hpp>
#include <hodgeloop/synthetic.hpp>
#include <hodgeloop/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hodgeloop;

namespace {

struct Manifest {
    std::string command;
    json flags = json::object();
    json inputs = json::array();
    std::uint64_t seed = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void add_input(const fs::path& path) {
        inputs.push_back({{"path", path.string()}, {"fnv1a64", file_digest(path)}});
    }
    void write(const fs::path& path) const {
        json j;
        j["format_version"] = 1;
        j["command"] = command;
        j["flags"] = flags;
        j["inputs"] = inputs;
        j["seed"] = seed;
        j["tool_version"] = kVersion;
        j["wall_time_s"] = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        atomic_write(path, j.dump(2) + "\n");
    }
};

json vec_to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json mat_to_json(const Mat& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// shared pipeline pieces

struct BuiltComplex {
    Complex2 complex;
    Vec w2;        // kernel weights (simplicial) or ones
    Vec dist;      // per-edge distances
    Mat vertices;  // per-vertex coordinates (points or pixel row/col)
};

struct CloudFlags {
    std::string input;
    bool header = false;
    int knn = 30;
    double delta = 0.0;
};

struct ImageFlags {
    std::string image;
    int threshold = 0;
    int closing_radius = 0;
    bool invert = false;
};

BuiltComplex build_from_cloud(const CloudFlags& f, Manifest& manifest) {
    PointCloud cloud{read_csv_matrix(f.input, f.header)};
    manifest.add_input(f.input);
    if (f.delta <= 0.0)
        throw InputError("--delta is required (and positive) for point-cloud input");
    auto graph = cknn_graph(cloud, f.knn, f.delta);
    BuiltComplex out;
    out.complex = clique_complex(graph);
    out.w2 = triangle_weights(cloud, out.complex, f.knn, f.delta);
    out.dist = graph.edge_dist;
    out.vertices = cloud.points;
    return out;
}

BuiltComplex build_from_image(const ImageFlags& f, Manifest& manifest) {
    GrayImage img = read_pgm(f.image);
    manifest.add_input(f.image);
    std::vector<int> pixels;
    BuiltComplex out;
    out.complex = cubical_complex(img, f.threshold, f.closing_radius, f.invert,
                                  &pixels);
    out.w2 = Vec::Ones(out.complex.n2());
    out.dist = Vec::Ones(out.complex.n1());  // unit grid spacing
    out.vertices = Mat(out.complex.n0, 2);
    for (int v = 0; v < out.complex.n0; ++v) {
        out.vertices(v, 0) = pixels[v] / img.width;  // row
        out.vertices(v, 1) = pixels[v] % img.width;  // col
    }
    return out;
}

HomologyBasis embed_complex(const Complex2& cx, const Vec& w2,
                            const NullspaceOptions& opts, HodgeSystem* sys_out) {
    auto sys = assemble(cx, w2);
    HomologyBasis basis = harmonic_basis(sys.L, opts);
    if (sys_out) *sys_out = std::move(sys);
    return basis;
}

json basis_meta(const HomologyBasis& basis) {
    json meta;
    meta["format_version"] = 1;
    meta["beta"] = basis.beta;
    meta["eigenvalues"] = vec_to_json(basis.eigenvalues);
    meta["residuals"] = vec_to_json(basis.residuals);
    meta["spectrum_window"] = vec_to_json(basis.spectrum_window);
    meta["gap_ratio"] = basis.gap_ratio;
    meta["op_norm"] = basis.op_norm;
    meta["ambiguous"] = basis.ambiguous;
    meta["candidates"] = basis.candidates;
    return meta;
}

json ica_meta(const UnmixingResult& res, const Mat& y) {
    json meta;
    meta["format_version"] = 1;
    meta["unmix"] = mat_to_json(res.unmix);
    meta["iterations"] = res.iterations;
    meta["converged"] = res.converged;
    meta["condition"] = res.condition;
    meta["degenerate"] = res.degenerate;
    meta["last_update"] = res.last_update;
    Mat recon = y * res.unmix;
    json residuals = json::array();
    for (Eigen::Index j = 0; j < res.Z.cols(); ++j)
        residuals.push_back((res.Z.col(j) - recon.col(j)).norm());
    meta["column_residuals"] = std::move(residuals);
    return meta;
}

json loops_to_json(const std::vector<LoopResult>& loops) {
    json arr = json::array();
    for (const auto& loop : loops) {
        json item;
        item["class"] = loop.class_index;
        item["cycle"] = loop.cycle;
        item["length"] = loop.length;
        item["path_integral"] = loop.path_integral;
        item["tau"] = loop.tau;
        item["relaxations"] = loop.relaxations;
        arr.push_back(std::move(item));
    }
    json out;
    out["format_version"] = 1;
    out["loops"] = std::move(arr);
    return out;
}

std::vector<LoopResult> run_loops(const Mat& z, const Complex2& cx, const Vec& d,
                                  const std::string& variant) {
    if (variant == "exhaustive")
        return shortest_homologous_loops(z, cx.n0, cx.edges, d);
    if (variant == "maxedge") return shortest_loops_maxedge(z, cx.n0, cx.edges, d);
    throw InputError("--variant must be exhaustive or maxedge");
}

// ---------------------------------------------------------------------------

int cmd_build_complex(const CloudFlags& cf, const ImageFlags& imf,
                      const std::string& out, const std::string& out_weights,
                      const std::string& out_dist, const std::string& out_vertices,
                      Manifest& manifest) {
    if (cf.input.empty() == imf.image.empty())
        throw InputError("exactly one of --input or --image is required");
    BuiltComplex built = cf.input.empty() ? build_from_image(imf, manifest)
                                          : build_from_cloud(cf, manifest);
    write_complex_json(out, built.complex);
    if (!out_weights.empty()) write_csv_matrix(out_weights, built.w2);
    if (!out_dist.empty()) write_csv_matrix(out_dist, built.dist);
    if (!out_vertices.empty()) write_csv_matrix(out_vertices, built.vertices);
    std::cerr << "complex: n0=" << built.complex.n0 << " n1=" << built.complex.n1()
              << " n2=" << built.complex.n2() << "\n";
    manifest.write(out + ".manifest.json");
    return 0;
}

int cmd_fps(const std::string& input, bool header, int n, std::uint64_t seed,
            const std::string& out, const std::string& out_indices,
            Manifest& manifest) {
    PointCloud cloud{read_csv_matrix(input, header)};
    manifest.add_input(input);
    auto idx = furthest_point_sample(cloud, n, seed);
    Mat sub(n, cloud.dim());
    Mat indices(n, 1);
    for (int i = 0; i < n; ++i) {
        sub.row(i) = cloud.points.row(idx[i]);
        indices(i, 0) = idx[i];
    }
    write_csv_matrix(out, sub);
    if (!out_indices.empty()) write_csv_matrix(out_indices, indices);
    manifest.write(out + ".manifest.json");
    return 0;
}

int cmd_embed(const std::string& complex_path, const std::string& weights_path,
              const std::string& out_y, const std::string& out_meta,
              const NullspaceOptions& opts, Manifest& manifest) {
    Complex2 cx = read_complex_json(complex_path);
    manifest.add_input(complex_path);
    Vec w2 = Vec::Ones(cx.n2());
    if (!weights_path.empty()) {
        Mat w = read_csv_matrix(weights_path);
        manifest.add_input(weights_path);
        if (w.cols() != 1 || w.rows() != cx.n2())
            throw InputError("--weights must hold one value per 2-cell");
        w2 = w.col(0);
    }
    HomologyBasis basis = embed_complex(cx, w2, opts, nullptr);
    if (!out_meta.empty()) atomic_write(out_meta, basis_meta(basis).dump(2) + "\n");
    if (basis.ambiguous) {
        std::cerr << "embed: Betti number ambiguous (gap ratio " << basis.gap_ratio
                  << "); candidates:";
        for (int c : basis.candidates) std::cerr << " " << c;
        std::cerr << "\n";
        manifest.write(out_y + ".manifest.json");
        return 3;
    }
    write_csv_matrix(out_y, basis.Y);
    std::cerr << "embed: beta=" << basis.beta << " gap_ratio=" << basis.gap_ratio
              << "\n";
    manifest.write(out_y + ".manifest.json");
    return 0;
}

int cmd_ica(const std::string& y_path, const std::string& out_z,
            const std::string& out_meta, const IcaOptions& opts,
            Manifest& manifest) {
    Mat y = read_csv_matrix(y_path);
    manifest.add_input(y_path);
    if (y.cols() == 0) {
        // empty embedding (beta = 0): pass it straight through
        atomic_write(out_z, "");
        if (!out_meta.empty())
            atomic_write(out_meta,
                         json{{"format_version", 1}, {"beta", 0}}.dump(2) + "\n");
        manifest.write(out_z + ".manifest.json");
        return 0;
    }
    auto res = ica_no_prewhite(y, opts);
    write_csv_matrix(out_z, res.Z);
    if (!out_meta.empty()) atomic_write(out_meta, ica_meta(res, y).dump(2) + "\n");
    std::cerr << "ica: iterations=" << res.iterations
              << " converged=" << (res.converged ? "yes" : "no")
              << " cond=" << res.condition << "\n";
    manifest.write(out_z + ".manifest.json");
    return 0;
}

int cmd_loops(const std::string& z_path, const std::string& complex_path,
              const std::string& dist_path, const std::string& out,
              const std::string& variant, Manifest& manifest) {
    Mat z = read_csv_matrix(z_path);
    manifest.add_input(z_path);
    Complex2 cx = read_complex_json(complex_path);
    manifest.add_input(complex_path);
    Mat dist = read_csv_matrix(dist_path);
    manifest.add_input(dist_path);
    if (dist.cols() != 1 || dist.rows() != cx.n1())
        throw InputError("--dist must hold one distance per edge");
    if (z.cols() == 0) {
        atomic_write(out, loops_to_json({}).dump(2) + "\n");
        manifest.write(out + ".manifest.json");
        return 0;
    }
    if (z.rows() != cx.n1())
        throw InputError("--z must hold one row per edge of the complex");
    auto loops = run_loops(z, cx, dist.col(0), variant);
    atomic_write(out, loops_to_json(loops).dump(2) + "\n");
    manifest.write(out + ".manifest.json");
    return 0;
}

int cmd_run_all(const CloudFlags& cf, const ImageFlags& imf, const std::string& out_dir,
                const NullspaceOptions& null_opts, const IcaOptions& ica_opts,
                const std::string& variant, Manifest& manifest) {
    if (cf.input.empty() == imf.image.empty())
        throw InputError("exactly one of --input or --image is required");
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    BuiltComplex built = cf.input.empty() ? build_from_image(imf, manifest)
                                          : build_from_cloud(cf, manifest);
    write_complex_json(dir / "complex.json", built.complex);
    write_csv_matrix(dir / "w2.csv", built.w2);
    write_csv_matrix(dir / "edge_dist.csv", built.dist);
    write_csv_matrix(dir / "vertices.csv", built.vertices);
    std::cerr << "complex: n0=" << built.complex.n0 << " n1=" << built.complex.n1()
              << " n2=" << built.complex.n2() << "\n";

    HomologyBasis basis = embed_complex(built.complex, built.w2, null_opts, nullptr);
    atomic_write(dir / "y_meta.json", basis_meta(basis).dump(2) + "\n");
    if (basis.ambiguous) {
        std::cerr << "run-all: Betti number ambiguous; stopping after embed\n";
        manifest.write(dir / "manifest.json");
        return 3;
    }
    write_csv_matrix(dir / "Y.csv", basis.Y);
    std::cerr << "embed: beta=" << basis.beta << " gap_ratio=" << basis.gap_ratio
              << "\n";

    if (basis.beta == 0) {
        // nothing to factorize or chase: emit empty downstream artifacts
        atomic_write(dir / "Z.csv", "");
        atomic_write(dir / "loops.json", loops_to_json({}).dump(2) + "\n");
        std::cerr << "run-all: beta=0, loop stage skipped\n";
        manifest.write(dir / "manifest.json");
        return 0;
    }

    auto ica_res = ica_no_prewhite(basis.Y, ica_opts);
    write_csv_matrix(dir / "Z.csv", ica_res.Z);
    atomic_write(dir / "z_meta.json", ica_meta(ica_res, basis.Y).dump(2) + "\n");
    std::cerr << "ica: iterations=" << ica_res.iterations
              << " converged=" << (ica_res.converged ? "yes" : "no") << "\n";

    auto loops = run_loops(ica_res.Z, built.complex, built.dist, variant);
    atomic_write(dir / "loops.json", loops_to_json(loops).dump(2) + "\n");
    for (const auto& loop : loops)
        std::cerr << "loop " << loop.class_index << ": length=" << loop.length
                  << " integral=" << loop.path_integral
                  << " vertices=" << loop.cycle.size() - 1 << "\n";
    manifest.write(dir / "manifest.json");
    return 0;
}

int cmd_perturb_check(const std::string& manifold, int n, double noise,
                      std::uint64_t seed, int knn, double delta, bool unit_weights,
                      const std::string& out, const std::string& out_table,
                      Manifest& manifest) {
    auto synth = synth_manifold(manifold_from_string(manifold), n, noise, seed);
    auto inst =
        build_connected_sum(synth.cloud, synth.prime_label, knn, delta, !unit_weights);
    auto rep = evaluate_perturbation(inst);

    json j;
    j["format_version"] = 1;
    j["manifold"] = manifold;
    j["n"] = n;
    j["noise"] = noise;
    j["seed"] = seed;
    j["beta_truth"] = synth.beta1_truth;
    j["beta_glued"] = rep.beta_glued;
    j["beta_primes"] = rep.beta_primes;
    j["homology_preserved"] = rep.homology_preserved;
    j["eps_k"] = rep.eps.eps_k;
    j["eps_km1"] = rep.eps.eps_km1;
    j["epsp_k"] = rep.eps.epsp_k;
    j["epsp_km1"] = rep.eps.epsp_km1;
    j["eigengaps"] = rep.eigengaps;
    j["lambda_k"] = rep.lambda_k;
    j["diff_down_norm"] = rep.diff_down_norm;
    j["diff_up_norm"] = rep.diff_up_norm;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["down_cap"] = rep.down_cap;
    j["up_cap"] = rep.up_cap;
    j["caps_met"] = rep.caps_met;
    j["bound_holds"] = rep.bound_holds;
    atomic_write(out, j.dump(2) + "\n");

    if (!out_table.empty()) {
        double min_gap = rep.eigengaps.empty() ? 0.0 : rep.eigengaps[0];
        for (double g : rep.eigengaps) min_gap = std::min(min_gap, g);
        std::string csv =
            "eps_k,eps_km1,epsp_k,epsp_km1,min_eigengap,diff_down_norm,"
            "diff_up_norm,lhs,rhs,down_cap,up_cap,caps_met,bound_holds\n";
        const double vals[] = {rep.eps.eps_k,  rep.eps.eps_km1, rep.eps.epsp_k,
                               rep.eps.epsp_km1, min_gap,        rep.diff_down_norm,
                               rep.diff_up_norm, rep.lhs,        rep.rhs,
                               rep.down_cap,     rep.up_cap};
        for (double v : vals) csv += format_double(v) + ",";
        csv += std::string(rep.caps_met ? "1" : "0") + "," +
               (rep.bound_holds ? "1" : "0") + "\n";
        atomic_write(out_table, csv);
    }
    std::cerr << "perturb-check: eps_k=" << rep.eps.eps_k
              << " eps_km1=" << rep.eps.eps_km1 << " lhs=" << rep.lhs
              << " rhs=" << rep.rhs << " caps_met=" << rep.caps_met
              << " bound_holds=" << rep.bound_holds << "\n";
    manifest.write(out + ".manifest.json");
    return 0;
}

int cmd_export_boundary(const std::string& complex_path, const std::string& out_b1,
                        const std::string& out_b2, Manifest& manifest) {
    Complex2 cx = read_complex_json(complex_path);
    manifest.add_input(complex_path);
    auto [b1, b2] = boundary_maps(cx);
    atomic_write(out_b1, matrix_market_integer(b1.sparse_int()));
    atomic_write(out_b2, matrix_market_integer(b2.sparse_int()));
    manifest.write(out_b1 + ".manifest.json");
    return 0;
}

int cmd_export_laplacian(const std::string& complex_path,
                         const std::string& weights_path, const std::string& out,
                         const std::string& out_weights, Manifest& manifest) {
    Complex2 cx = read_complex_json(complex_path);
    manifest.add_input(complex_path);
    Vec w2 = Vec::Ones(cx.n2());
    if (!weights_path.empty()) {
        Mat w = read_csv_matrix(weights_path);
        manifest.add_input(weights_path);
        if (w.cols() != 1 || w.rows() != cx.n2())
            throw InputError("--weights must hold one value per 2-cell");
        w2 = w.col(0);
    }
    auto sys = assemble(cx, w2);
    atomic_write(out, matrix_market_real(sys.L));
    if (!out_weights.empty()) {
        std::string csv = "level,index,value\n";
        const Vec* levels[] = {&sys.w_km1, &sys.w_k, &sys.w_kp1};
        for (int l = 0; l < 3; ++l)
            for (Eigen::Index i = 0; i < levels[l]->size(); ++i)
                csv += std::to_string(l) + "," + std::to_string(i) + "," +
                       format_double((*levels[l])[i]) + "\n";
        atomic_write(out_weights, csv);
    }
    manifest.write(out + ".manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homology embeddings and shortest homologous loops via the "
                 "weighted Hodge Laplacian"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CloudFlags cf;
    ImageFlags imf;
    NullspaceOptions null_opts;
    IcaOptions ica_opts;
    std::string out, out_weights, out_dist, out_vertices, out_meta, out_indices;
    std::string complex_path, weights_path, y_path, z_path, dist_path, out_table;
    std::string variant = "exhaustive";
    std::string manifold = "torus";
    int fps_n = 0;
    int synth_n = 900;
    double synth_noise = 0.0;
    std::uint64_t seed = 0;
    double synth_delta = 1.2;
    bool unit_weights = false;

    const auto add_cloud_flags = [&](CLI::App* c, bool delta_required) {
        c->add_option("--input", cf.input, "point cloud CSV (one row per point)");
        c->add_flag("--header", cf.header, "skip one CSV header line");
        c->add_option("--knn", cf.knn, "CkNN neighborhood size")->default_val(30);
        auto* d = c->add_option("--delta", cf.delta, "CkNN scale parameter");
        (void)delta_required;
        (void)d;
    };
    const auto add_image_flags = [&](CLI::App* c) {
        c->add_option("--image", imf.image, "grayscale PGM image (P2 or P5)");
        c->add_option("--threshold", imf.threshold,
                      "foreground = intensity >= threshold");
        c->add_option("--closing-radius", imf.closing_radius,
                      "morphological closing radius (square element)")
            ->default_val(0);
        c->add_flag("--invert", imf.invert, "foreground = intensity < threshold");
    };
    const auto add_null_flags = [&](CLI::App* c) {
        c->add_option("--zero-tol", null_opts.zero_tol, "null eigenvalue cutoff")
            ->default_val(1e-8);
        c->add_option("--gap-factor", null_opts.gap_factor,
                      "required eigengap ratio")
            ->default_val(100.0);
        c->add_option("--tol", null_opts.solver_tol, "eigensolver residual tol")
            ->default_val(1e-8);
        c->add_option("--max-iter", null_opts.max_iter, "eigensolver iteration cap")
            ->default_val(5000);
        c->add_option("--seed", seed, "deterministic seed")->default_val(0);
    };
    const auto add_ica_flags = [&](CLI::App* c) {
        c->add_option("--lr", ica_opts.lr, "ICA learning rate")->default_val(0.01);
        c->add_option("--ica-max-iter", ica_opts.max_iter, "ICA iteration cap")
            ->default_val(10000);
        c->add_option("--conv-tol", ica_opts.conv_tol, "ICA update norm tolerance")
            ->default_val(1e-7);
    };

    auto* build = app.add_subcommand("build-complex",
                                     "Build a complex from a point cloud or image");
    add_cloud_flags(build, true);
    add_image_flags(build);
    build->add_option("--out", out, "complex JSON output")->required();
    build->add_option("--out-weights", out_weights, "triangle weight CSV output");
    build->add_option("--out-dist", out_dist, "edge distance CSV output");
    build->add_option("--out-vertices", out_vertices, "vertex coordinate CSV output");

    auto* fps = app.add_subcommand("fps", "Furthest-point subsample a point cloud");
    fps->add_option("--input", cf.input, "point cloud CSV")->required();
    fps->add_flag("--header", cf.header, "skip one CSV header line");
    fps->add_option("--n", fps_n, "number of points to keep")->required();
    fps->add_option("--seed", seed, "seed for the initial pick")->default_val(0);
    fps->add_option("--out", out, "subsampled CSV output")->required();
    fps->add_option("--out-indices", out_indices, "selected row indices CSV");

    auto* embed = app.add_subcommand("embed", "Harmonic basis Y of the 1-Laplacian");
    embed->add_option("--complex", complex_path, "complex JSON")->required();
    embed->add_option("--weights", weights_path, "triangle weight CSV");
    embed->add_option("--out-y", out, "Y CSV output (n1 rows, beta columns)")
        ->required();
    embed->add_option("--out-meta", out_meta, "eigenvalue/residual JSON sidecar");
    add_null_flags(embed);

    auto* ica = app.add_subcommand("ica", "Independent basis Z from Y");
    ica->add_option("--y", y_path, "Y CSV")->required();
    ica->add_option("--out-z", out, "Z CSV output")->required();
    ica->add_option("--out-meta", out_meta, "unmixing JSON sidecar");
    add_ica_flags(ica);
    ica->add_option("--seed", seed, "deterministic seed")->default_val(0);

    auto* loops = app.add_subcommand("loops", "Shortest homologous loops from Z");
    loops->add_option("--z", z_path, "Z CSV")->required();
    loops->add_option("--complex", complex_path, "complex JSON")->required();
    loops->add_option("--dist", dist_path, "edge distance CSV")->required();
    loops->add_option("--out", out, "loops JSON output")->required();
    loops->add_option("--variant", variant, "exhaustive | maxedge")
        ->default_val("exhaustive");

    auto* runall = app.add_subcommand("run-all",
                                      "build-complex, embed, ica, loops in one go");
    add_cloud_flags(runall, true);
    add_image_flags(runall);
    runall->add_option("--out", out, "output directory")->required();
    add_null_flags(runall);
    add_ica_flags(runall);
    runall->add_option("--variant", variant, "exhaustive | maxedge")
        ->default_val("exhaustive");

    auto* perturb = app.add_subcommand("perturb-check",
                                       "Connected-sum perturbation quantities and "
                                       "the subspace bound");
    perturb->add_option("--manifold", manifold,
                        "torus | three_torus | genus2 | punctplane | tori_concat")
        ->required();
    perturb->add_option("--n", synth_n, "sample size")->default_val(900);
    perturb->add_option("--noise", synth_noise, "Gaussian noise scale")
        ->default_val(0.0);
    perturb->add_option("--seed", seed, "deterministic seed")->default_val(0);
    perturb->add_option("--knn", cf.knn, "CkNN neighborhood size")->default_val(30);
    perturb->add_option("--delta", synth_delta, "CkNN scale parameter")
        ->default_val(1.2);
    perturb->add_flag("--unit-weights", unit_weights,
                      "constant triangle weights instead of the kernel");
    perturb->add_option("--out", out, "report JSON output")->required();
    perturb->add_option("--out-table", out_table, "epsilon/gap/norm CSV table");

    auto* expb = app.add_subcommand("export-boundary",
                                    "Boundary matrices in Matrix Market form");
    expb->add_option("--complex", complex_path, "complex JSON")->required();
    expb->add_option("--out-b1", out, "B1 output path")->required();
    expb->add_option("--out-b2", out_weights, "B2 output path")->required();

    auto* expl = app.add_subcommand("export-laplacian",
                                    "L1 in Matrix Market form, weights as CSV");
    expl->add_option("--complex", complex_path, "complex JSON")->required();
    expl->add_option("--weights", weights_path, "triangle weight CSV");
    expl->add_option("--out", out, "L1 output path")->required();
    expl->add_option("--out-weights-csv", out_table, "level,index,value CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    Manifest manifest;
    null_opts.seed = seed;
    ica_opts.seed = seed;
    for (const auto* sub : app.get_subcommands()) {
        manifest.command = sub->get_name();
        for (const auto* opt : sub->get_options()) {
            if (!opt->results().empty())
                manifest.flags[opt->get_name()] = opt->results().size() == 1
                                                      ? json(opt->results().front())
                                                      : json(opt->results());
        }
    }
    manifest.seed = seed;

    try {
        if (build->parsed())
            return cmd_build_complex(cf, imf, out, out_weights, out_dist,
                                     out_vertices, manifest);
        if (fps->parsed())
            return cmd_fps(cf.input, cf.header, fps_n, seed, out, out_indices,
                           manifest);
        if (embed->parsed())
            return cmd_embed(complex_path, weights_path, out, out_meta, null_opts,
                             manifest);
        if (ica->parsed())
            return cmd_ica(y_path, out, out_meta, ica_opts, manifest);
        if (loops->parsed())
            return cmd_loops(z_path, complex_path, dist_path, out, variant,
                             manifest);
        if (runall->parsed())
            return cmd_run_all(cf, imf, out, null_opts, ica_opts, variant, manifest);
        if (perturb->parsed())
            return cmd_perturb_check(manifold, synth_n, synth_noise, seed, cf.knn,
                                     synth_delta, unit_weights, out, out_table,
                                     manifest);
        if (expb->parsed())
            return cmd_export_boundary(complex_path, out, out_weights, manifest);
        if (expl->parsed())
            return cmd_export_laplacian(complex_path, weights_path, out, out_table,
                                        manifest);
    } catch (const AmbiguityError& e) {
        std::cerr << "error (topology ambiguity): " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return 2;
    } catch (const NoLoopError& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ClosureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return 2;
    }
    return 1;
}
