// Command-line front end: build graph/spectrum/field artifacts and run the
// convergence-lab experiments. Every run writes a manifest.json that replays
// the run byte-for-byte via `gasket replay`.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gasket/constants.hpp"
#include "gasket/fields.hpp"
#include "gasket/graph.hpp"
#include "gasket/io.hpp"
#include "gasket/lab.hpp"
#include "gasket/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gasket;

namespace {

struct RunResult {
    bool pass = true;
    json failures = json::array();
    std::vector<std::string> outputs;
};

std::string default_out_dir() {
    if (const char* env = std::getenv("GASKET_OUT_DIR")) return env;
    return "out";
}

void write_file(RunResult& res, const fs::path& dir, const std::string& name,
                const std::string& content) {
    io::atomic_write(dir / name, content);
    res.outputs.push_back(name);
}

void write_manifest(const RunResult& res, const fs::path& dir, const std::string& command,
                    const json& params) {
    json manifest = {{"command", command}, {"params", params}, {"outputs", res.outputs},
                     {"pass", res.pass}};
    if (!res.failures.empty()) manifest["failures"] = res.failures;
    io::atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
}

RunResult run_graph(const json& p, const fs::path& dir) {
    RunResult res;
    const GasketGraph g = build_graph(p.at("m").get<int>(), p.at("cap").get<int>());
    const std::string tag = "m" + std::to_string(g.level);
    write_file(res, dir, "vertices_" + tag + ".csv", io::graph_vertex_csv(g));
    write_file(res, dir, "edges_" + tag + ".csv", io::graph_edge_csv(g));
    std::printf("graph m=%d: %d vertices, %zu edges, %d interior\n", g.level, g.vertex_count(),
                g.edges.size(), g.interior_count());
    return res;
}

RunResult run_spectrum(const json& p, const fs::path& dir) {
    RunResult res;
    const int m = p.at("m").get<int>();
    SpectralCache cache(p.at("cap").get<int>());
    const SpectralDecomposition& spec = cache.spectrum(m);
    const std::string tag = "m" + std::to_string(m);
    write_file(res, dir, "spectrum_" + tag + ".csv", io::spectrum_csv(spec));
    if (p.value("eigenvectors", false))
        write_file(res, dir, "eigenvectors_" + tag + ".csv", io::eigenvector_csv(spec));
    std::printf("spectrum m=%d: N=%d lambda_1=%s\n", m, spec.size(),
                io::format_double(spec.eigenvalues[0]).c_str());
    return res;
}

RunResult run_sample(const json& p, const fs::path& dir) {
    RunResult res;
    const int m = p.at("m").get<int>();
    const double s = p.at("s").get<double>();
    const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
    const int n = p.at("n").get<int>();
    SpectralCache cache(p.at("cap").get<int>());
    const SpectralDecomposition& spec = cache.spectrum(m);
    for (int k = 0; k < n; ++k) {
        const FieldSample f = sample_dfgf(spec, s, seed + static_cast<std::uint64_t>(k));
        char name[64];
        std::snprintf(name, sizeof name, "field_m%d_%03d.csv", m, k);
        write_file(res, dir, name, io::field_csv(f));
    }
    std::printf("sample m=%d s=%s: %d field(s)\n", m, io::format_double(s).c_str(), n);
    return res;
}

std::vector<int> level_range(int lo, int hi) {
    std::vector<int> ls;
    for (int m = lo; m <= hi; ++m) ls.push_back(m);
    return ls;
}

RunResult run_lab(const json& p, const fs::path& dir) {
    RunResult res;
    const std::string exp = p.at("experiment").get<std::string>();
    const int m = p.at("m").get<int>();
    const double s = p.at("s").get<double>();
    const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
    const int n = p.at("n").get<int>();
    SpectralCache cache(p.at("cap").get<int>());

    json report;
    std::vector<double> x, y;
    std::string xname = "x", yname = "y";

    auto from_regime = [&](const RegimeFit& r) {
        report = r.to_json();
        x = r.x;
        y = r.y;
    };
    auto from_convergence = [&](const ConvergenceReport& r) {
        report = r.to_json();
        for (std::size_t i = 0; i < r.levels.size(); ++i) {
            x.push_back(static_cast<double>(r.levels[i]));
            y.push_back(r.observed[i]);
        }
        xname = "level";
        yname = "observed";
    };

    if (exp == "weyl") {
        const WeylReport r = weyl_check(cache, m);
        report = r.to_json();
        x = r.t;
        y = r.ratio;
        xname = "t";
        yname = "weyl_ratio";
    } else if (exp == "riesz-regime") {
        from_regime(riesz_regime_fit(cache, m, s, seed));
    } else if (exp == "semigroup") {
        const TestFunction f = eigen_surrogate(cache, p.at("base").get<int>(), 0, m);
        from_convergence(semigroup_convergence(cache, f, p.at("t").get<double>(),
                                               level_range(2, m)));
    } else if (exp == "quadform") {
        const TestFunction f = eigen_surrogate(cache, p.at("base").get<int>(), 0, m);
        from_convergence(quadratic_form_convergence(cache, f, s, level_range(2, m)));
    } else if (exp == "holder") {
        from_regime(holder_exponent(cache, s, n, m, seed));
    } else if (exp == "logcorr") {
        from_regime(log_correlation_fit(cache, m, n, seed));
    } else if (exp == "sobolev") {
        const double thr = constants().spectral_ratio - 2.0 * s;  // Prop-level threshold
        const SobolevScanReport r = sobolev_membership_scan(
            cache, s, {thr - 0.5, thr, thr + 0.5, 2.0 * constants().spectral_ratio}, m, n, seed);
        report = r.to_json();
        for (const auto& row : r.rows) {
            x.push_back(row.alpha);
            y.push_back(row.mc_total);
        }
        xname = "alpha";
        yname = "norm";
    } else if (exp == "supnorm") {
        from_convergence(eigenfunction_supnorm_check(cache, level_range(3, m)));
    } else if (exp == "lipschitz") {
        from_regime(lipschitz_kernel_check(cache, m, s, n, seed));
    } else if (exp == "eigsweep") {
        const SweepReport r = eigen_level_sweep(cache, 1, m, n);
        report = r.to_json();
        for (std::size_t i = 0; i < r.levels.size(); ++i) {
            x.push_back(static_cast<double>(r.levels[i]));
            y.push_back(r.eigenvalues[i][0]);
        }
        xname = "level";
        yname = "lambda_1";
    } else {
        throw std::invalid_argument("unknown lab experiment: " + exp);
    }

    res.pass = report.at("pass").get<bool>();
    if (!res.pass) res.failures.push_back({{"experiment", exp}, {"report", "report.json"}});
    write_file(res, dir, "report.json", report.dump(2) + "\n");
    write_file(res, dir, "fit_data.csv", io::xy_csv(x, y, xname, yname));
    std::printf("lab %s: %s\n", exp.c_str(), res.pass ? "pass" : "FAIL");
    return res;
}

RunResult dispatch(const std::string& command, const json& params, const fs::path& dir) {
    if (command == "graph") return run_graph(params, dir);
    if (command == "spectrum") return run_spectrum(params, dir);
    if (command == "sample") return run_sample(params, dir);
    if (command == "lab") return run_lab(params, dir);
    throw std::invalid_argument("unknown command in manifest: " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sierpinski gasket spectra and fractional Gaussian fields"};
    app.require_subcommand(1);

    int m = 2;
    double s = 0.5;
    std::uint64_t seed = 1;
    int n = 1;
    int cap = kDefaultSpectralCap;
    int base = 4;
    double t = 0.01;
    bool eigenvectors = false;
    std::string out = default_out_dir();
    std::string config_path;
    std::string experiment;
    std::string manifest_path;

    auto add_common = [&](CLI::App* cmd, bool needs_s) {
        cmd->add_option("--m", m, "approximation level");
        if (needs_s) cmd->add_option("--s", s, "fractional parameter s");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--n", n, "sample / ensemble count");
        cmd->add_option("--out", out, "output directory (default $GASKET_OUT_DIR or ./out)");
        cmd->add_option("--config", config_path, "key = value config file");
        cmd->add_option("--cap", cap, "spectral level cap");
    };

    CLI::App* cmd_graph = app.add_subcommand("graph", "write vertex and edge CSVs");
    add_common(cmd_graph, false);
    CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "write the eigenvalue table");
    add_common(cmd_spectrum, false);
    cmd_spectrum->add_flag("--eigenvectors", eigenvectors, "also write the eigenvector matrix");
    CLI::App* cmd_sample = app.add_subcommand("sample", "sample fractional Gaussian fields");
    add_common(cmd_sample, true);
    CLI::App* cmd_lab = app.add_subcommand("lab", "run a verification experiment");
    add_common(cmd_lab, true);
    cmd_lab->add_option("experiment", experiment,
                        "weyl | riesz-regime | semigroup | quadform | holder | logcorr | "
                        "sobolev | supnorm | lipschitz | eigsweep")
        ->required();
    cmd_lab->add_option("--base", base, "base level of the eigenfunction surrogate");
    cmd_lab->add_option("--t", t, "semigroup time");
    CLI::App* cmd_replay = app.add_subcommand("replay", "re-run a recorded manifest");
    cmd_replay->add_option("manifest", manifest_path, "manifest.json of a previous run")
        ->required();
    cmd_replay->add_option("--out", out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        std::string command;
        json params;

        if (cmd_replay->parsed()) {
            std::ifstream in(manifest_path);
            if (!in) throw std::runtime_error("cannot open manifest " + manifest_path);
            const json manifest = json::parse(in);
            command = manifest.at("command").get<std::string>();
            params = manifest.at("params");
        } else {
            // config file fills defaults; explicit flags override
            if (!config_path.empty()) {
                const auto cfg = io::parse_config(config_path);
                auto cfg_int = [&](const char* key, int& dst, const CLI::Option* opt) {
                    if (cfg.count(key) && opt->count() == 0) dst = std::stoi(cfg.at(key));
                };
                CLI::App* active = app.get_subcommands().front();
                cfg_int("cap", cap, active->get_option("--cap"));
                if (cfg.count("out") && active->get_option("--out")->count() == 0)
                    out = cfg.at("out");
            }
            command = app.get_subcommands().front()->get_name();
            params = {{"m", m}, {"cap", cap}};
            if (command == "sample" || command == "lab") {
                params["s"] = s;
                params["seed"] = seed;
                params["n"] = n;
            }
            if (command == "spectrum") params["eigenvectors"] = eigenvectors;
            if (command == "sample")
                params["log-correlated"] = std::abs(s - constants().critical_s) <= 1e-12;
            if (command == "lab") {
                params["experiment"] = experiment;
                params["base"] = base;
                params["t"] = t;
            }
        }

        const fs::path dir = out;
        const RunResult res = dispatch(command, params, dir);
        write_manifest(res, dir, command, params);
        if (!res.pass) {
            std::fprintf(stderr, "failures: %s\n", res.failures.dump().c_str());
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
