#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fspde/errors.hpp"
#include "fspde/fraccalc.hpp"
#include "fspde/io.hpp"
#include "fspde/kernels.hpp"
#include "fspde/lpnorms.hpp"
#include "fspde/specfun.hpp"
#include "fspde/verify.hpp"

namespace fs = std::filesystem;
using fspde::io::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;
constexpr int kRuntime = 3;

json load_json(const std::string& path) {
    std::string text;
    try {
        text = fspde::io::read_file(path);
    } catch (const fspde::Error& e) {
        throw fspde::ConfigError("", e.what());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw fspde::ConfigError("", std::string("invalid JSON: ") + e.what());
    }
}

void set_at(json& doc, const std::string& pointer, const json& value) { doc[json::json_pointer(pointer)] = value; }

fspde::GridFunction read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fspde::ConfigError("--input", "cannot open " + path);
    std::vector<double> t, v;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        ls.imbue(std::locale::classic());
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) throw fspde::ConfigError("--input", "line " + std::to_string(row) + ": expected t,value");
        char* end = nullptr;
        const double x = std::strtod(a.c_str(), &end);
        if (end == a.c_str()) {
            if (row == 1) continue;  // header
            throw fspde::ConfigError("--input", "line " + std::to_string(row) + ": not a number");
        }
        t.push_back(x);
        v.push_back(std::strtod(b.c_str(), nullptr));
    }
    if (t.size() < 3) throw fspde::ConfigError("--input", "need at least 3 samples");
    const int n = static_cast<int>(t.size()) - 1;
    const fspde::TimeGrid grid{t.back(), n};
    if (std::abs(t.front()) > 1e-12 * grid.tmax) throw fspde::ConfigError("--input", "first time must be 0");
    for (int i = 0; i <= n; ++i)
        if (std::abs(t[i] - grid.node(i)) > 1e-9 * grid.tmax)
            throw fspde::ConfigError("--input", "times must be uniformly spaced (row " + std::to_string(i + 2) + ")");
    return {grid, std::move(v)};
}

void write_manifest(const fs::path& path, const json& config, const std::vector<std::uint64_t>& seeds, json derived,
                    json extra, double wall, std::vector<std::string> outputs) {
    fspde::io::Manifest m;
    m.digest = fspde::io::digest(config);
    m.seeds = seeds;
    m.derived = std::move(derived);
    m.extra = std::move(extra);
    m.wall_seconds = wall;
    m.outputs = std::move(outputs);
    fspde::io::atomic_write(path, fspde::io::to_json(m).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-fractional SPDE toolkit: special functions, kernels, norms, simulation and verification"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: FSPDE_THREADS or hardware)")->check(CLI::NonNegativeNumber);

    auto* ml_cmd = app.add_subcommand("ml", "Mittag-Leffler function E_{a,b}(z), z <= 0");
    double ml_a = 1, ml_b = 1, ml_z = 0;
    std::string ml_method = "auto";
    int ml_digits = 10;
    ml_cmd->add_option("--a", ml_a)->required();
    ml_cmd->add_option("--b", ml_b)->required();
    ml_cmd->add_option("--z", ml_z)->required();
    ml_cmd->add_option("--method", ml_method)->check(CLI::IsMember({"auto", "series", "integral", "asymptotic"}));
    ml_cmd->add_option("--digits", ml_digits, "significant digits printed")->check(CLI::Range(1, 17));

    auto* fc_cmd = app.add_subcommand("fraccalc", "fractional integral or derivative of a sampled function");
    double fc_alpha = 0.5;
    std::string fc_op = "integral", fc_in, fc_out;
    fc_cmd->add_option("--alpha", fc_alpha)->required();
    fc_cmd->add_option("--op", fc_op)->check(CLI::IsMember({"integral", "rl", "caputo"}));
    fc_cmd->add_option("--input", fc_in, "CSV with columns t,value on a uniform grid from 0")->required();
    fc_cmd->add_option("--output", fc_out)->required();

    auto* k_cmd = app.add_subcommand("kernel", "periodized kernel p, q or P on a torus grid");
    std::string k_kind = "p", k_out;
    double k_alpha = 1, k_beta = 1, k_t = 1, k_period = 2 * M_PI, k_gamma = 0, k_alias = 1e-12;
    int k_dim = 1, k_modes = 128, k_sigma = 0;
    k_cmd->add_option("--kind", k_kind)->check(CLI::IsMember({"p", "q", "P"}));
    k_cmd->add_option("--alpha", k_alpha)->required();
    k_cmd->add_option("--beta", k_beta);
    k_cmd->add_option("--t", k_t)->required();
    k_cmd->add_option("--dim", k_dim)->check(CLI::Range(1, 3));
    k_cmd->add_option("--modes", k_modes);
    k_cmd->add_option("--period", k_period);
    k_cmd->add_option("--gamma", k_gamma);
    k_cmd->add_option("--sigma", k_sigma)->check(CLI::Range(0, 1));
    k_cmd->add_option("--alias-tol", k_alias, "largest |symbol| allowed at the Nyquist frequency");
    k_cmd->add_option("--out", k_out)->required();

    auto* n_cmd = app.add_subcommand("lp-norm", "L_p, H^gamma_p or B^s_p norm of a field file");
    std::string n_space = "lp", n_in;
    double n_index = 0, n_p = 2;
    n_cmd->add_option("--space", n_space)->check(CLI::IsMember({"lp", "sobolev", "besov"}));
    n_cmd->add_option("--index", n_index);
    n_cmd->add_option("--p", n_p);
    n_cmd->add_option("--input", n_in)->required();

    auto* s_cmd = app.add_subcommand("simulate", "solve an experiment config for every seed");
    std::string s_config, s_out = ".";
    std::vector<std::uint64_t> s_seeds;
    std::optional<double> s_T;
    std::optional<int> s_steps, s_N;
    s_cmd->add_option("--config", s_config)->required();
    s_cmd->add_option("--out", s_out, "output directory");
    s_cmd->add_option("--seeds", s_seeds, "overrides /seeds");
    s_cmd->add_option("--T", s_T, "overrides /time/T");
    s_cmd->add_option("--steps", s_steps, "overrides /time/steps");
    s_cmd->add_option("--N", s_N, "overrides /grid/N");

    auto* v_cmd = app.add_subcommand("verify", "run a verification study and write its report");
    std::string v_claim, v_config, v_out = "report.json";
    std::optional<int> v_samples;
    v_cmd->add_option("--claim", v_claim)->required()->check(CLI::IsMember(fspde::io::verification_claims()));
    v_cmd->add_option("--config", v_config)->required();
    v_cmd->add_option("--out", v_out);
    v_cmd->add_option("--samples", v_samples, "overrides /verify/samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }

    if (threads > 0) {
        fspde::set_thread_count(threads);
    } else if (const char* env = std::getenv("FSPDE_THREADS")) {
        fspde::set_thread_count(std::atoi(env));
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    try {
        if (*ml_cmd) {
            const fspde::MLValue r = fspde::ml_eval({ml_a, ml_b}, ml_z, fspde::parse_ml_method(ml_method));
            std::cout << std::setprecision(ml_digits) << r.value << " " << fspde::to_string(r.method) << "\n";
            return kPass;
        }
        if (*fc_cmd) {
            const fspde::GridFunction phi = read_series(fc_in);
            fspde::GridFunction out;
            if (fc_op == "integral")
                out = fspde::frac_integral(phi, fc_alpha);
            else if (fc_op == "rl")
                out = fspde::rl_derivative(phi, fc_alpha);
            else
                out = fspde::caputo_derivative(phi, fc_alpha);
            std::vector<std::vector<double>> rows;
            for (int i = 0; i <= out.grid.n; ++i) rows.push_back({out.grid.node(i), out.values[i]});
            fspde::io::atomic_write(fc_out, fspde::io::csv({"t", "value"}, rows));
            return kPass;
        }
        if (*k_cmd) {
            fspde::KernelSymbol sym;
            sym.kind = fspde::parse_kernel_kind(k_kind);
            sym.alpha = k_alpha;
            sym.beta = k_beta;
            sym.t = k_t;
            sym.sigma = k_sigma;
            sym.gamma = k_gamma;
            sym.validate();
            fspde::TorusGrid grid{k_dim, k_modes, k_period};
            grid.validate();
            const fspde::Field f = fspde::kernel_field(sym, grid, k_alias);
            std::vector<std::string> header;
            if (k_dim == 1)
                header.push_back("x");
            else
                for (int r = 0; r < k_dim; ++r) header.push_back("x" + std::to_string(r + 1));
            header.push_back("value");
            std::vector<std::vector<double>> rows(grid.size());
            std::vector<double> x(k_dim);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                grid.position(i, x.data());
                rows[i] = x;
                rows[i].push_back(f.values[i]);
            }
            fspde::io::atomic_write(k_out, fspde::io::csv(header, rows));
            return kPass;
        }
        if (*n_cmd) {
            const fspde::Field f = fspde::io::read_field(n_in);
            fspde::NormSpec spec{fspde::parse_space(n_space), n_p, n_index};
            spec.validate();
            std::cout << fspde::io::format_double(fspde::norm(f, spec)) << "\n";
            return kPass;
        }
        if (*s_cmd) {
            json doc = load_json(s_config);
            if (!s_seeds.empty()) set_at(doc, "/seeds", s_seeds);
            if (s_T) set_at(doc, "/time/T", *s_T);
            if (s_steps) set_at(doc, "/time/steps", *s_steps);
            if (s_N) set_at(doc, "/grid/N", *s_N);
            const fspde::io::Experiment e = fspde::io::parse_experiment(doc);
            fs::create_directories(s_out);
            std::vector<std::string> outputs;
            json runs = json::array();
            for (std::uint64_t seed : e.seeds) {
                const fspde::SolutionField u = fspde::io::run_experiment(e, seed);
                const std::string tag = std::to_string(seed);
                const fs::path field = fs::path(s_out) / ("u_" + tag + ".fspf");
                fspde::io::write_field(field, u.at(u.times.size() - 1));
                std::vector<std::vector<double>> rows;
                for (std::size_t i = 0; i < u.times.size(); ++i)
                    rows.push_back({u.times[i], fspde::lp_norm(u.at(i), e.params.p)});
                const fs::path table = fs::path(s_out) / ("norms_" + tag + ".csv");
                fspde::io::atomic_write(table, fspde::io::csv({"t", "lp_norm"}, rows));
                outputs.push_back(field.string());
                outputs.push_back(table.string());
                json run = {{"seed", seed},
                            {"kind", u.kind},
                            {"iterations", u.iterations},
                            {"converged", u.converged},
                            {"increments", u.increments},
                            {"nodes", u.times.size()}};
                if (u.gate)
                    run["gate"] = {{"d", u.gate->d},
                                   {"d0", u.gate->d0},
                                   {"kappa0", u.gate->kappa0},
                                   {"accepted", u.gate->accepted}};
                runs.push_back(run);
            }
            write_manifest(fs::path(s_out) / "manifest.json", doc, e.seeds,
                           fspde::to_json(fspde::derived_exponents(e.params)), {{"runs", runs}}, elapsed(), outputs);
            bool ok = true;
            for (const auto& r : runs) ok = ok && r["converged"].get<bool>();
            return ok ? kPass : kFail;
        }
        if (*v_cmd) {
            json doc = load_json(v_config);
            if (v_samples) set_at(doc, "/verify/samples", *v_samples);
            const json report = fspde::io::run_verification(v_claim, doc);
            fspde::io::atomic_write(v_out, report.dump(2) + "\n");
            json derived = json::object();
            if (doc.contains("params"))
                derived = fspde::to_json(
                    fspde::derived_exponents(fspde::io::parse_experiment(json{{"params", doc["params"]}}).params));
            std::vector<std::uint64_t> seeds;
            if (doc.contains("seeds")) seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
            fs::path manifest = v_out;
            manifest.replace_extension(".manifest.json");
            write_manifest(manifest, doc, seeds, derived, {{"claim", v_claim}, {"verdict", report["verdict"]}},
                           elapsed(), {v_out});
            const bool pass = report["verdict"] == "pass";
            std::cout << v_claim << ": " << (pass ? "pass" : "fail") << "\n";
            return pass ? kPass : kFail;
        }
    } catch (const fspde::ConfigError& e) {
        std::cerr << "config error at " << e.what() << "\n";
        return kConfig;
    } catch (const fspde::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kConfig;
    } catch (const fspde::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kConfig;
    } catch (const fspde::ResolutionError& e) {
        std::cerr << "resolution error: " << e.what() << " (needs " << e.required_modes() << " modes)\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kPass;
}
