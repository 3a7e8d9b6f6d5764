// psb-factor: generate expander-coded instances, factorise measurement
// matrices without the encoder, verify reconstructions, and reproduce the
// experiment grid.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "psbf/config.hpp"
#include "psbf/encoder.hpp"
#include "psbf/factor.hpp"
#include "psbf/harness.hpp"
#include "psbf/io.hpp"
#include "psbf/model.hpp"
#include "psbf/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_trace_csv(const std::string& path, const std::vector<psbf::TraceRow>& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open trace file " + path);
    os << "iteration,p,eta,residual_frobenius,wall_ms\n";
    for (const auto& row : trace)
        os << row.iteration << ',' << row.extracted << ',' << row.eta << ','
           << row.residual_fro << ',' << row.wall_ms << '\n';
}

void save_factors(const std::string& out_dir, const psbf::BinaryColumnMatrix& Ahat,
                  const psbf::SparseCodeMatrix& Xhat) {
    fs::create_directories(out_dir);
    psbf::save_binary_matrix((fs::path(out_dir) / "Ahat.txt").string(), Ahat);
    psbf::save_sparse_code((fs::path(out_dir) / "Xhat.txt").string(), Xhat);
}

int cmd_gen_encoder(std::int32_t m, std::int32_t n, std::int32_t d, std::uint64_t seed,
                    const std::string& out) {
    psbf::save_binary_matrix(out, psbf::generate_encoder({m, n, d, seed}));
    return 0;
}

int cmd_gen_instance(const psbf::PsbParams& params, const std::string& out_dir, bool ordered) {
    psbf::PsbInstance inst = psbf::sample_instance(params);
    if (ordered) {
        auto res = psbf::order_columns(inst.A, &inst.X, psbf::OrderDirection::Descending, true);
        inst.A = std::move(res.A);
        inst.X = std::move(res.X);
        inst.Y = psbf::multiply(inst.A, inst.X);
    }
    fs::create_directories(out_dir);
    psbf::save_binary_matrix((fs::path(out_dir) / "A.txt").string(), inst.A);
    psbf::save_sparse_code((fs::path(out_dir) / "X.txt").string(), inst.X);
    psbf::save_dense((fs::path(out_dir) / "Y.txt").string(), inst.Y);
    return 0;
}

struct RunArgs {
    std::string y_file, out_dir, trace_file, algo = "debf";
    std::int32_t m = 0, n = 0, N = 0, d = 0;
    double epsilon = 1.0 / 6.0, tol = 1e-9;
    bool merge = false, order = false;
    int threads = 0;
};

int cmd_run(const RunArgs& a) {
    psbf::DenseMatrix Y = psbf::load_dense(a.y_file);
    if (a.m > 0 && a.m != Y.rows) throw std::runtime_error("--m disagrees with the Y file header");
    if (a.N > 0 && a.N != Y.cols) throw std::runtime_error("--N disagrees with the Y file header");

    psbf::FactorOptions opt;
    opt.d = a.d;
    opt.epsilon = a.epsilon;
    opt.tol = a.tol;
    opt.merge = a.merge;
    opt.threads = a.threads;

    psbf::FactorResult res = a.algo == "ndebf" ? psbf::ndebf_run(Y, a.n, opt)
                                               : psbf::debf_run(Y, a.n, opt);
    if (a.order) {
        auto ordered = psbf::order_columns(res.Ahat, &res.Xhat);
        res.Ahat = std::move(ordered.A);
        res.Xhat = std::move(ordered.X);
    }
    save_factors(a.out_dir, res.Ahat, res.Xhat);
    if (!a.trace_file.empty()) write_trace_csv(a.trace_file, res.trace);

    const double y_fro = Y.frobenius();
    const double r_fro = res.trace.empty()
                             ? psbf::residual(Y, res.Ahat, res.Xhat).frobenius()
                             : res.trace.back().residual_fro;
    std::cout << "algo=" << a.algo << " iterations=" << res.iterations
              << " eta=" << res.eta_final << " residual_pct="
              << (y_fro > 0 ? 100.0 * r_fro / y_fro : 0.0) << '\n';
    if (res.hit_iteration_cap)
        std::cerr << "warning: iteration safeguard reached before convergence\n";
    return 0;
}

int cmd_verify(const std::string& a_file, const std::string& x_file, const std::string& ahat_file,
               const std::string& xhat_file, double tol) {
    const auto A = psbf::load_binary_matrix(a_file);
    const auto X = psbf::load_sparse_code(x_file);
    const auto Ahat = psbf::load_binary_matrix(ahat_file);
    const auto Xhat = psbf::load_sparse_code(xhat_file);
    json verdict;
    try {
        const psbf::PermutationMatch m = psbf::match_up_to_permutation(Ahat, Xhat, A, X, tol);
        verdict["exact"] = m.exact;
        verdict["containment"] = m.containment;
        verdict["matched_columns"] = m.matched_columns;
    } catch (const psbf::AmbiguousContainment& e) {
        verdict["exact"] = false;
        verdict["containment"] = false;
        verdict["matched_columns"] = 0;
        verdict["error"] = e.what();
    }
    std::cout << verdict.dump() << '\n';
    return verdict["exact"].get<bool>() ? 0 : 2;
}

struct GridArgs {
    std::string config_file, out_file;
    std::optional<std::int32_t> d, m, n, trials;
    std::optional<std::string> k_list, N_list, mode;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon, tol;
    int threads = 0;
    bool no_timing = false;
};

int cmd_grid(const GridArgs& a) {
    std::map<std::string, std::string> file_cfg;
    if (!a.config_file.empty()) file_cfg = psbf::parse_config_file(a.config_file);

    auto text = [&](const char* key, const std::optional<std::string>& flag,
                    const char* fallback) -> std::string {
        if (flag) return *flag;
        auto it = file_cfg.find(key);
        return it != file_cfg.end() ? it->second : fallback;
    };
    auto number = [&](const char* key, auto flag, auto fallback) {
        if (flag) return decltype(fallback)(*flag);
        auto it = file_cfg.find(key);
        return it != file_cfg.end() ? decltype(fallback)(std::stod(it->second)) : fallback;
    };

    psbf::GridSpec spec;
    spec.d = std::int32_t(number("d", a.d, 0.0));
    spec.m = std::int32_t(number("m", a.m, 0.0));
    spec.n = std::int32_t(number("n", a.n, 0.0));
    spec.trials = std::int32_t(number("trials", a.trials, 10.0));
    spec.master_seed = std::uint64_t(number("seed", a.seed, 0.0));
    spec.epsilon = number("epsilon", a.epsilon, 1.0 / 6.0);
    spec.tol = number("tol", a.tol, 1e-9);
    spec.k_values = psbf::parse_int_list(text("k", a.k_list, ""));
    spec.N_values = psbf::parse_int_list(text("N", a.N_list, ""));
    const std::string mode = text("mode", a.mode, "practical");
    spec.mode = mode == "known" ? psbf::EpsilonMode::Known : psbf::EpsilonMode::Practical;
    spec.threads = a.threads;
    spec.include_timing = !a.no_timing;

    if (a.out_file.empty()) {
        psbf::run_grid(spec, std::cout);
    } else {
        std::ofstream os(a.out_file);
        if (!os) throw std::runtime_error("cannot open " + a.out_file);
        psbf::run_grid(spec, os);
    }
    return 0;
}

struct StreamArgs {
    std::string y_file, out_dir;
    std::int32_t d = 0, n = 0, batch = 1;
    double epsilon = 1.0 / 6.0, tol = 1e-9;
    bool merge = false;
};

int cmd_stream(const StreamArgs& a) {
    const psbf::DenseMatrix Y = psbf::load_dense(a.y_file);
    psbf::StreamOptions opt;
    opt.d = a.d;
    opt.epsilon = a.epsilon;
    opt.tol = a.tol;
    opt.expected_n = a.n;
    opt.merge = a.merge;
    psbf::StreamSession session(Y.rows, opt);
    for (std::int32_t c = 0; c < Y.cols; c += a.batch) {
        const std::int32_t width = std::min(a.batch, Y.cols - c);
        psbf::DenseMatrix chunk(Y.rows, width);
        std::copy(Y.col(c), Y.col(c) + std::size_t(Y.rows) * width, chunk.data.begin());
        session.ingest(chunk);
    }
    save_factors(a.out_dir, session.encoder(), session.code());
    std::cout << "columns=" << session.columns_seen() << " passes=" << session.passes()
              << " stabilised=" << (session.stabilised() ? "true" : "false") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blind factorisation of expander-coded measurement matrices"};
    app.require_subcommand(1);

    // gen-encoder
    std::int32_t ge_m = 0, ge_n = 0, ge_d = 0;
    std::uint64_t ge_seed = 0;
    std::string ge_out;
    auto* ge = app.add_subcommand("gen-encoder", "generate a random sparse binary encoder");
    ge->add_option("--m", ge_m, "rows")->required();
    ge->add_option("--n", ge_n, "columns")->required();
    ge->add_option("--d", ge_d, "ones per column")->required();
    ge->add_option("--seed", ge_seed, "RNG seed");
    ge->add_option("--out", ge_out, "output file")->required();

    // gen-instance
    psbf::PsbParams gi;
    std::string gi_out;
    bool gi_ordered = false;
    auto* g = app.add_subcommand("gen-instance", "sample (A, X, Y) from the measurement model");
    g->add_option("--d", gi.d)->required();
    g->add_option("--k", gi.k)->required();
    g->add_option("--m", gi.m)->required();
    g->add_option("--n", gi.n)->required();
    g->add_option("--N", gi.N)->required();
    g->add_option("--seed", gi.seed);
    g->add_option("--coeff-low", gi.coeff_low);
    g->add_option("--coeff-high", gi.coeff_high);
    g->add_flag("--ordered", gi_ordered, "apply the column-ordering protocol before forming Y");
    g->add_option("--out-dir", gi_out)->required();

    // run
    RunArgs ra;
    auto* r = app.add_subcommand("run", "factorise Y without access to A");
    r->add_option("--y", ra.y_file)->required();
    r->add_option("--m", ra.m, "expected rows (validated against the file)");
    r->add_option("--n", ra.n, "encoder columns")->required();
    r->add_option("--N", ra.N, "expected measurement columns (validated)");
    r->add_option("--d", ra.d)->required();
    r->add_option("--algo", ra.algo)->check(CLI::IsMember({"debf", "ndebf"}));
    r->add_option("--epsilon", ra.epsilon);
    r->add_option("--tol", ra.tol);
    r->add_flag("--merge", ra.merge, "merge duplicate reconstruction columns each pass");
    r->add_flag("--order-columns", ra.order, "apply the column-ordering protocol to the output");
    r->add_option("--trace", ra.trace_file, "per-iteration trace CSV");
    r->add_option("--threads", ra.threads);
    r->add_option("--out-dir", ra.out_dir)->required();

    // verify
    std::string v_a, v_x, v_ahat, v_xhat;
    double v_tol = 1e-9, v_eps = 1.0 / 6.0;
    auto* v = app.add_subcommand("verify", "compare factors against ground truth");
    v->add_option("--a", v_a)->required();
    v->add_option("--x", v_x)->required();
    v->add_option("--ahat", v_ahat)->required();
    v->add_option("--xhat", v_xhat)->required();
    v->add_option("--epsilon", v_eps);
    v->add_option("--tol", v_tol);

    // grid
    GridArgs gr;
    auto* gc = app.add_subcommand("grid", "experiment grid, one CSV row per (k, N) cell");
    gc->add_option("--config", gr.config_file, "key=value config file");
    gc->add_option("--d", gr.d);
    gc->add_option("--m", gr.m);
    gc->add_option("--n", gr.n);
    gc->add_option("--k", gr.k_list, "k values: list 30,40 or range lo:hi:step");
    gc->add_option("--N", gr.N_list, "N values: list or range");
    gc->add_option("--trials", gr.trials);
    gc->add_option("--seed", gr.seed);
    gc->add_option("--mode", gr.mode)->check(CLI::IsMember({"known", "practical"}));
    gc->add_option("--epsilon", gr.epsilon);
    gc->add_option("--tol", gr.tol);
    gc->add_option("--threads", gr.threads);
    gc->add_flag("--no-timing", gr.no_timing, "zero the wall-time column (seed-pure output)");
    gc->add_option("--out", gr.out_file, "CSV path (stdout when omitted)");

    // stream
    StreamArgs sa;
    auto* s = app.add_subcommand("stream", "ingest Y column batches online");
    s->add_option("--y", sa.y_file)->required();
    s->add_option("--d", sa.d)->required();
    s->add_option("--n", sa.n, "encoder columns when known (0: grow dynamically)");
    s->add_option("--batch", sa.batch)->check(CLI::PositiveNumber);
    s->add_option("--epsilon", sa.epsilon);
    s->add_option("--tol", sa.tol);
    s->add_flag("--merge", sa.merge);
    s->add_option("--out-dir", sa.out_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ge->parsed()) return cmd_gen_encoder(ge_m, ge_n, ge_d, ge_seed, ge_out);
        if (g->parsed()) return cmd_gen_instance(gi, gi_out, gi_ordered);
        if (r->parsed()) return cmd_run(ra);
        if (v->parsed()) return cmd_verify(v_a, v_x, v_ahat, v_xhat, v_tol);
        if (gc->parsed()) return cmd_grid(gr);
        if (s->parsed()) return cmd_stream(sa);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
