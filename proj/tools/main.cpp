// Command-line front end for the ball-projection library: identity
// verification sweeps, convergence-rate experiments, basis build/export,
// Markov-constant sweeps, and moment dumps.  Experiment parameters come
// from one JSON config file; results land as CSV and JSON in the output
// directory.  Exit status: 0 when every check passes / every rate run is
// compliant, 1 when one fails, 2 on usage or configuration errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ballproj/experiments.hpp"
#include "ballproj/moments.hpp"
#include "ballproj/multi_index.hpp"
#include "ballproj/ortho_basis.hpp"
#include "ballproj/quadrature.hpp"
#include "ballproj/scalar.hpp"
#include "ballproj/test_functions.hpp"
#include "ballproj/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ballproj;

namespace {

// working precision when neither the config nor a flag pins one; generous,
// because quadrature rules and closed-form moments build at ambient bits
constexpr unsigned kDefaultBits = 256;

struct FunctionSpec {
    std::string family;
    double s = 2.5;          // boundary_power exponent
    std::vector<double> a;   // entire_exponential direction
    double c = 1.0;          // cosh/sinh frequency
    int max_order = 3;
};

struct Config {
    int dimension = 1;
    std::vector<double> alpha_list{0.0};
    std::vector<int> n_grid;  // empty: default grid for the dimension
    double tolerance = 1e-9;
    unsigned precision_bits = kDefaultBits;
    std::vector<FunctionSpec> functions;
    int order_r = 1;                 // largest Sobolev order to sweep
    std::optional<int> order_l;      // expected regularity, cross-checked
};

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    const json j = json::parse(in);
    Config cfg;
    if (j.contains("dimension")) cfg.dimension = j.at("dimension").get<int>();
    if (j.contains("alpha_list")) cfg.alpha_list = j.at("alpha_list").get<std::vector<double>>();
    if (j.contains("n_grid")) cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
    if (j.contains("precision_policy")) {
        const json& p = j.at("precision_policy");
        if (p.is_number_unsigned() || p.is_number_integer())
            cfg.precision_bits = p.get<unsigned>();
        else if (!(p.is_string() && p.get<std::string>() == "auto"))
            throw std::invalid_argument("precision_policy must be a bit count or \"auto\"");
    }
    if (j.contains("orders")) {
        const json& o = j.at("orders");
        if (o.contains("r")) cfg.order_r = o.at("r").get<int>();
        if (o.contains("l")) cfg.order_l = o.at("l").get<int>();
    }
    if (j.contains("functions")) {
        for (const json& f : j.at("functions")) {
            FunctionSpec spec;
            spec.family = f.at("family").get<std::string>();
            if (f.contains("s")) spec.s = f.at("s").get<double>();
            if (f.contains("a")) spec.a = f.at("a").get<std::vector<double>>();
            if (f.contains("c")) spec.c = f.at("c").get<double>();
            if (f.contains("max_order")) spec.max_order = f.at("max_order").get<int>();
            cfg.functions.push_back(std::move(spec));
        }
    }
    return cfg;
}

TestFunction make_function(const FunctionSpec& spec, int dim) {
    if (spec.family == "boundary_power") return boundary_power(dim, spec.s, spec.max_order);
    if (spec.family == "entire_exponential") {
        std::vector<double> a = spec.a;
        if (a.empty()) a.assign(static_cast<std::size_t>(dim), 1.0);
        if (static_cast<int>(a.size()) != dim)
            throw std::invalid_argument("entire_exponential: direction length != dimension");
        return entire_exponential(dim, a, spec.max_order);
    }
    if (spec.family == "even_cosh") return even_cosh(dim, spec.c, spec.max_order);
    if (spec.family == "odd_sinh") return odd_sinh(dim, spec.c, spec.max_order);
    throw std::invalid_argument("unknown function family: " + spec.family);
}

// environment overrides, deliberately limited to these two
int env_threads(int fallback) {
    if (const char* v = std::getenv("BALLPROJ_THREADS")) {
        const int t = std::atoi(v);
        if (t >= 1) return t;
    }
    return fallback;
}

std::string env_outdir(std::string fallback) {
    if (const char* v = std::getenv("BALLPROJ_OUTDIR"); v && *v) return v;
    return fallback;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string sanitize(const std::string& id) {
    std::string out;
    for (char c : id)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    return out;
}

int cmd_verify(const Config& cfg, bool have_config, const IdentityGrid& flags,
               const std::string& outdir) {
    IdentityGrid grid = flags;
    if (have_config) {
        grid.dims = {cfg.dimension};
        grid.alphas = cfg.alpha_list;
        grid.tolerance = cfg.tolerance;
    }
    grid.threads = env_threads(grid.threads);

    std::vector<VerifyReport> reports = run_identity_suite(grid);
    // one-dimensional cross-checks against the classical Jacobi identities
    for (double alpha : grid.alphas) {
        for (const VerifyReport& r : jacobi_identity_checks(alpha, 2 * grid.max_degree))
            reports.push_back(r);
        const OrthoBasis basis = OrthoBasis::build(WeightParam{1, alpha}, grid.max_degree);
        reports.push_back(jacobi_basis_crosscheck(basis));
    }

    std::ofstream out = open_output(fs::path(outdir) / "verify.jsonl");
    int failed = 0;
    for (const VerifyReport& r : reports) {
        out << to_json_line(r) << '\n';
        if (!r.pass) {
            ++failed;
            std::cout << "FAIL " << r.check << " d=" << r.dim << " alpha=" << r.alpha
                      << " residual=" << r.residual << " (" << r.note << ")\n";
        }
    }
    std::cout << reports.size() - failed << "/" << reports.size() << " checks passed; report in "
              << (fs::path(outdir) / "verify.jsonl").string() << "\n";
    return failed == 0 ? 0 : 1;
}

int cmd_rates(const Config& cfg, const std::string& outdir, const std::vector<std::string>& modes) {
    std::vector<FunctionSpec> specs = cfg.functions;
    if (specs.empty()) {
        specs.push_back({"boundary_power", 2.5, {}, 1.0, std::max(2, cfg.order_r)});
        specs.push_back({"entire_exponential", 2.5, {}, 1.0, std::max(2, cfg.order_r)});
    }
    std::vector<int> grid = cfg.n_grid.empty() ? default_degree_grid(cfg.dimension) : cfg.n_grid;
    const auto wants = [&modes](const std::string& m) {
        return modes.empty() || std::find(modes.begin(), modes.end(), m) != modes.end();
    };

    json summary;
    summary["reports"] = json::array();
    summary["skipped"] = json::array();
    bool all_compliant = true;
    const int top = grid.back();

    for (double alpha : cfg.alpha_list) {
        const WeightParam w{cfg.dimension, alpha};
        // degree top+1 so one basis also serves the commutator run, which
        // reads one block past the largest truncation degree
        const bool over_cap = top + 1 > default_degree_cap(cfg.dimension);
        const OrthoBasis base = OrthoBasis::build(w, top + 1, 1e-20, over_cap);
        const BallRule rule = build_rule(w, 2 * (top + 1) + 20);
        std::optional<OrthoBasis> raised;
        if (wants("commutator"))
            raised = OrthoBasis::build(WeightParam{cfg.dimension, alpha + 1.0}, top + 1, 1e-20,
                                       over_cap);

        for (const FunctionSpec& spec : specs) {
            const TestFunction f = make_function(spec, cfg.dimension);
            const int l = std::min(f.regularity(alpha), 8);
            if (cfg.order_l && *cfg.order_l != l)
                std::cout << "note: " << f.name << " has regularity " << l << " at alpha="
                          << alpha << ", config expects l=" << *cfg.order_l << "\n";

            std::vector<RateReport> runs;
            if (wants("l2")) runs.push_back(run_l2_rate(base, rule, f, grid));
            if (wants("sobolev")) {
                for (int r = 1; r <= cfg.order_r; ++r) {
                    if (r > l || r > f.f.max_order) {
                        summary["skipped"].push_back(
                            {{"function", f.name},
                             {"alpha", alpha},
                             {"r", r},
                             {"reason", r > l ? "norm order exceeds regularity"
                                              : "derivative oracle too shallow"}});
                        continue;
                    }
                    runs.push_back(run_sobolev_rate(base, rule, f, r, grid));
                }
            }
            if (wants("commutator") && f.f.max_order >= 1)
                runs.push_back(run_commutator_rate(base, *raised, rule, f, grid));

            for (const RateReport& rep : runs) {
                std::ofstream csv = open_output(fs::path(outdir) / (sanitize(rep.id) + ".csv"));
                write_csv(rep, csv);
                summary["reports"].push_back(json::parse(rate_report_json(rep)));
                all_compliant = all_compliant && rep.compliant;
                std::cout << (rep.compliant ? "ok   " : "FAIL ") << rep.id;
                if (rep.fit_valid) std::cout << "  slope=" << rep.fit.slope;
                std::cout << "\n";
            }
        }
    }
    summary["all_compliant"] = all_compliant;
    std::ofstream out = open_output(fs::path(outdir) / "rates_summary.json");
    out << summary.dump(2) << '\n';
    std::cout << (all_compliant ? "all rate runs compliant" : "non-compliant rate runs present")
              << "; summary in " << (fs::path(outdir) / "rates_summary.json").string() << "\n";
    return all_compliant ? 0 : 1;
}

int cmd_basis(int dim, double alpha, int degree, double tol, unsigned bits, bool over_cap,
              const std::string& outdir, const std::string& check_path) {
    if (!check_path.empty()) {
        std::ifstream in(check_path);
        if (!in) throw std::invalid_argument("cannot open basis file: " + check_path);
        const OrthoBasis basis = OrthoBasis::import_text(in);
        std::cout << "basis ok: d=" << basis.weight().dim << " alpha=" << basis.weight().alpha
                  << " N=" << basis.max_degree() << " bits=" << basis.precision_bits()
                  << " certificate=" << to_decimal_string(basis.certificate()) << "\n";
        return 0;
    }
    const WeightParam w{dim, alpha};
    const OrthoBasis basis = bits > 0 ? OrthoBasis::build_at_bits(w, degree, bits, over_cap)
                                      : OrthoBasis::build(w, degree, tol, over_cap);
    std::ostringstream name;
    name << "basis_d" << dim << "_a" << alpha << "_N" << degree << ".txt";
    const fs::path path = fs::path(outdir) / sanitize(name.str());
    std::ofstream out = open_output(path);
    basis.export_text(out);
    std::cout << "built basis d=" << dim << " alpha=" << alpha << " N=" << degree
              << " bits=" << basis.precision_bits()
              << " certificate=" << to_decimal_string(basis.certificate()) << " -> "
              << path.string() << "\n";
    return 0;
}

int cmd_markov(int dim, double alpha, int max_degree, const std::string& outdir) {
    const OrthoBasis basis = OrthoBasis::build(WeightParam{dim, alpha}, max_degree);
    std::ofstream csv = open_output(fs::path(outdir) / "markov.csv");
    csv << "n,constant\n";
    std::vector<double> xs, ys;
    for (int n = 0; n <= max_degree; ++n) {
        const double c = to_double(markov_constant(basis, n));
        csv << n << ',' << c << '\n';
        if (n >= 2 && c > 0) {
            xs.push_back(std::log10(static_cast<double>(n)));
            ys.push_back(std::log10(c));
        }
    }
    if (xs.size() >= 2) {
        const LineFit fit = fit_line(xs, ys);
        std::cout << "markov constant growth: slope=" << fit.slope
                  << " (degree-squared law predicts 2), rms=" << fit.rms_residual << "\n";
    }
    std::cout << "sweep in " << (fs::path(outdir) / "markov.csv").string() << "\n";
    return 0;
}

int cmd_moments(int dim, double alpha, int max_order, const std::string& out_path) {
    const WeightParam w{dim, alpha};
    const MomentTable table(w);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file = open_output(out_path);
        os = &file;
    }
    *os << "gamma,moment\n";
    for (int k = 0; k <= max_order; ++k)
        for (const MultiIndex& gamma : indices_of_order(dim, k))
            *os << '"' << gamma.str() << "\"," << to_decimal_string(table.monomial_moment(gamma))
                << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted orthogonal projections on the unit ball"};
    app.require_subcommand(1);

    std::string config_path, outdir = ".";
    unsigned bits_flag = 0;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out-dir", outdir, "output directory (BALLPROJ_OUTDIR overrides)");
    app.add_option("--precision-bits", bits_flag, "working precision override");

    // verify
    CLI::App* verify = app.add_subcommand("verify", "run the identity verification suite");
    IdentityGrid grid;
    verify->add_option("--dims", grid.dims, "dimensions to sweep");
    verify->add_option("--alphas", grid.alphas, "weight exponents to sweep");
    verify->add_option("--max-degree", grid.max_degree, "degree bound for d <= 2");
    verify->add_option("--max-degree-d3", grid.max_degree_d3, "degree bound for d = 3");
    verify->add_option("--samples", grid.samples, "random draws per grid point");
    verify->add_option("--seed", grid.seed, "random seed");
    verify->add_option("--tolerance", grid.tolerance, "relative tolerance for equalities");
    verify->add_option("--threads", grid.threads, "worker threads (BALLPROJ_THREADS overrides)");

    // rates
    CLI::App* rates = app.add_subcommand("rates", "run the convergence-rate experiments");
    std::vector<std::string> modes;
    rates->add_option("--modes", modes, "subset of {l2, sobolev, commutator}; default all")
        ->check(CLI::IsMember({"l2", "sobolev", "commutator"}));

    // basis
    CLI::App* basis = app.add_subcommand("basis", "build and export an orthonormal basis");
    int b_dim = 1, b_degree = 10;
    double b_alpha = 0.0, b_tol = 1e-20;
    unsigned b_bits = 0;
    bool b_over_cap = false;
    std::string b_check;
    basis->add_option("--dimension", b_dim, "ambient dimension");
    basis->add_option("--alpha", b_alpha, "weight exponent");
    basis->add_option("--degree", b_degree, "largest block degree");
    basis->add_option("--tol", b_tol, "orthonormality certificate tolerance");
    basis->add_option("--bits", b_bits, "fixed precision (0: escalate automatically)");
    basis->add_flag("--allow-over-cap", b_over_cap, "permit degrees beyond the conditioning cap");
    basis->add_option("--check", b_check, "import a basis file and report its certificate");

    // markov
    CLI::App* markov = app.add_subcommand("markov", "sweep the gradient extremal constant");
    int m_dim = 1, m_degree = 12;
    double m_alpha = 0.0;
    markov->add_option("--dimension", m_dim, "ambient dimension");
    markov->add_option("--alpha", m_alpha, "weight exponent");
    markov->add_option("--max-degree", m_degree, "largest degree in the sweep");

    // moments
    CLI::App* moments = app.add_subcommand("moments", "dump closed-form monomial moments");
    int mo_dim = 1, mo_order = 8;
    double mo_alpha = 0.0;
    std::string mo_out = "-";
    moments->add_option("--dimension", mo_dim, "ambient dimension");
    moments->add_option("--alpha", mo_alpha, "weight exponent");
    moments->add_option("--max-order", mo_order, "largest monomial order");
    moments->add_option("--out", mo_out, "output file (- for stdout)");

    // global options (--config, --out-dir, --precision-bits) may also appear
    // after the subcommand name
    for (CLI::App* sub : {verify, rates, basis, markov, moments}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg;
        const bool have_config = !config_path.empty();
        if (have_config) cfg = load_config(config_path);
        if (bits_flag > 0) cfg.precision_bits = bits_flag;
        outdir = env_outdir(outdir);
        PrecisionScope scope(cfg.precision_bits);

        if (*verify) return cmd_verify(cfg, have_config, grid, outdir);
        if (*rates) return cmd_rates(cfg, outdir, modes);
        if (*basis) return cmd_basis(b_dim, b_alpha, b_degree, b_tol, b_bits, b_over_cap, outdir,
                                     b_check);
        if (*markov) return cmd_markov(m_dim, m_alpha, m_degree, outdir);
        if (*moments) return cmd_moments(mo_dim, mo_alpha, mo_order, mo_out);
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
