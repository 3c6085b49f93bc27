#include "tristab/cli.hpp"

#include "tristab/experiment.hpp"
#include "tristab/plot.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <tuple>

namespace tristab {

namespace {

struct CliOptions {
    std::string algebra;
    int dim = 0;
    double r = 3.0;
    double theta0 = 0.0;
    std::string s = "0.5,0";
    std::string variant = "A";
    std::uint64_t seed = 42;
    std::size_t samples = 1000;
    std::size_t estimate_samples = 0;
    std::string out;
    bool plot = false;
    bool no_csv = false;
    std::string map;
    std::string perturbation = "radial";
    std::optional<double> theta;
    double theta_factor = 1.0;
    int n_max = kMaxIterations;
    unsigned workers = 1;
    std::uint64_t direction_seed = 7;
    Tolerances tol;
    std::vector<double> r_list{0.5, 3.0, 4.0};
    std::vector<double> theta0_list{0.0, 0.01, 0.1};
    std::string sweep_suite = "stability";
};

cplx parse_complex(const std::string& text)
{
    std::istringstream in(text);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re))
        throw std::invalid_argument("--s expects RE,IM (got '" + text + "')");
    if (in >> comma) {
        if (comma != ',' || !(in >> im))
            throw std::invalid_argument("--s expects RE,IM (got '" + text + "')");
    }
    if (in >> comma)
        throw std::invalid_argument("--s expects RE,IM (got '" + text + "')");
    return {re, im};
}

Suite suite_from_string(const std::string& name)
{
    for (auto s : {Suite::Inequality, Suite::Stability, Suite::Derivation, Suite::Homomorphism, Suite::Unitary})
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown suite '" + name +
                                "' (expected inequality, stability, derivation, homomorphism or unitary)");
}

PerturbationKind perturbation_from_string(const std::string& name)
{
    if (name == "radial")
        return PerturbationKind::Radial;
    if (name == "seeded-noise")
        return PerturbationKind::SeededNoise;
    throw std::invalid_argument("unknown perturbation '" + name + "' (expected radial or seeded-noise)");
}

ExperimentConfig make_config(const CliOptions& o, Suite suite)
{
    ExperimentConfig cfg;
    cfg.suite = suite;
    AlgebraKind kind = AlgebraKind::TruncatedPoly;
    int dim = 3;
    if (suite == Suite::Unitary) {
        kind = AlgebraKind::MatrixCStar;
        dim = 2;
    } else if (suite == Suite::Homomorphism) {
        kind = AlgebraKind::PointwiseCn;
    }
    if (!o.algebra.empty())
        kind = algebra_kind_from_string(o.algebra);
    if (o.dim != 0)
        dim = o.dim;
    if (dim < 1)
        throw std::invalid_argument("--dim must be >= 1");
    cfg.algebra = {kind, dim};
    cfg.recipe = o.map.empty() ? default_recipe(suite, kind) : map_recipe_from_string(o.map);
    cfg.perturbation = perturbation_from_string(o.perturbation);
    cfg.theta0 = o.theta0;
    cfg.direction_seed = o.direction_seed;
    cfg.params.s = parse_complex(o.s);
    cfg.params.r = o.r;
    cfg.theta_override = o.theta;
    cfg.theta_factor = o.theta_factor;
    cfg.variant = variant_from_string(o.variant);
    cfg.seed = o.seed;
    cfg.sample_count = o.samples;
    cfg.estimate_count = o.estimate_samples;
    cfg.n_max = o.n_max;
    cfg.workers = o.workers;
    cfg.tol = o.tol;
    cfg.validate();
    return cfg;
}

void print_report(const VerificationReport& rep, std::ostream& out)
{
    for (const auto& [name, v] : rep.estimates)
        out << "  estimate " << name << " = " << format_double(v) << '\n';
    for (const auto& c : rep.checks) {
        out << "  " << c.verdict() << ' ' << c.name << ' ' << format_double(c.value)
            << (c.comparison == Comparison::AtMost ? " <= " : " >= ") << format_double(c.threshold);
        if (!c.gating)
            out << " (non-gating)";
        for (const auto& f : c.flags)
            out << " [" << f << ']';
        out << '\n';
    }
    out << "verdict: " << (rep.all_gating_passed() ? "PASS" : "FAIL") << '\n';
}

void persist(const VerificationReport& rep, const std::filesystem::path& path, const CliOptions& o, std::ostream& out)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    emit_report(rep, path, !o.no_csv);
    out << "report: " << path.string() << '\n';
    if (o.plot)
        for (const auto& p : write_plots(rep, path))
            out << "plot: " << p.string() << '\n';
}

int run_one(const CliOptions& o, Suite suite, std::ostream& out)
{
    const ExperimentConfig cfg = make_config(o, suite);
    const VerificationReport rep = run_suite(cfg);
    out << to_string(suite) << " on " << describe(cfg.algebra) << " with " << to_string(cfg.recipe) << '\n';
    print_report(rep, out);
    if (!o.out.empty())
        persist(rep, o.out, o, out);
    return rep.all_gating_passed() ? 0 : 1;
}

int run_sweep(const CliOptions& o, std::ostream& out)
{
    const Suite suite = suite_from_string(o.sweep_suite);
    // validate every cell before running any
    std::vector<ExperimentConfig> cells;
    for (double r : o.r_list)
        for (double t : o.theta0_list) {
            CliOptions cell = o;
            cell.r = r;
            cell.theta0 = t;
            cells.push_back(make_config(cell, suite));
        }
    bool all = true;
    for (const auto& cfg : cells) {
        const VerificationReport rep = run_suite(cfg);
        const std::string tag =
            "r" + format_double(cfg.params.r) + "_theta0-" + format_double(cfg.theta0);
        out << "cell " << tag << ": " << (rep.all_gating_passed() ? "PASS" : "FAIL") << '\n';
        print_report(rep, out);
        all = all && rep.all_gating_passed();
        if (!o.out.empty())
            persist(rep, std::filesystem::path(o.out) / (to_string(suite) + "_" + tag + ".json"), o, out);
    }
    return all ? 0 : 1;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Numerical verification of tri-additive functional inequalities and their stability"};
    app.require_subcommand(1);
    CliOptions o;

    app.add_option("--algebra", o.algebra, "pointwise, poly or matrix")
        ->check(CLI::IsMember({"pointwise", "poly", "matrix"}));
    app.add_option("--dim", o.dim, "algebra dimension parameter");
    app.add_option("--r", o.r, "exponent of the control function");
    app.add_option("--theta0", o.theta0, "perturbation amplitude");
    app.add_option("--s", o.s, "complex s as RE,IM");
    app.add_option("--variant", o.variant, "A, B, scalarA or scalarB")
        ->check(CLI::IsMember({"A", "B", "scalarA", "scalarB"}));
    app.add_option("--seed", o.seed, "experiment seed")->envname("TRISTAB_SEED");
    app.add_option("--samples", o.samples, "samples per check");
    app.add_option("--estimate-samples", o.estimate_samples, "estimator samples (default 10x samples)");
    app.add_option("--out", o.out, "report path (sweep: output directory)");
    app.add_flag("--plot", o.plot, "write SVG images next to the report");
    app.add_flag("--no-csv", o.no_csv, "skip the per-curve CSV files");
    app.add_option("--map", o.map, "exact, poly-derivation, poly-hom, pointwise-hom or inner-derivation");
    app.add_option("--perturbation", o.perturbation, "radial or seeded-noise");
    app.add_option("--theta", o.theta, "use this theta instead of the estimate");
    app.add_option("--theta-factor", o.theta_factor, "theta = factor * estimate");
    app.add_option("--n-max", o.n_max, "iteration cap (<= 48)");
    app.add_option("--workers", o.workers, "worker threads");
    app.add_option("--direction-seed", o.direction_seed, "seed of the perturbation direction");
    app.add_option("--tol-cancellation", o.tol.cancellation);
    app.add_option("--tol-slack", o.tol.slack);
    app.add_option("--tol-bound-ratio", o.tol.bound_ratio);
    app.add_option("--tol-limit", o.tol.limit);
    app.add_option("--tol-exact-match", o.tol.exact_match);
    app.add_option("--tol-roundtrip", o.tol.roundtrip);
    app.add_option("--tol-oracle", o.tol.oracle);
    app.add_option("--tol-fixed-scaling", o.tol.fixed_scaling);

    const std::vector<std::tuple<std::string, Suite, std::string>> singles{
        {"check-inequality", Suite::Inequality, "cancellation identities and inequality slack on sampled tuples"},
        {"stability", Suite::Stability, "Hyers limit, stability bound and limit structure"},
        {"derivation-suite", Suite::Derivation, "hyperstability of a perturbed triderivation"},
        {"hom-suite", Suite::Homomorphism, "hyperstability of a perturbed trihomomorphism"},
        {"unitary-suite", Suite::Unitary, "unitary-element checks on matrix algebras"}};
    for (const auto& [name, suite, help] : singles)
        app.add_subcommand(name, help)->fallthrough();
    auto* sweep = app.add_subcommand("sweep", "Cartesian product over r and theta0")->fallthrough();
    sweep->add_option("--r-list", o.r_list)->delimiter(',');
    sweep->add_option("--theta0-list", o.theta0_list)->delimiter(',');
    sweep->add_option("--suite", o.sweep_suite);

    std::vector<const char*> argv{"tristab"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (sweep->parsed())
            return run_sweep(o, out);
        for (const auto& [name, suite, help] : singles)
            if (app.get_subcommand(name)->parsed())
                return run_one(o, suite, out);
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

int cli_main(int argc, const char* const* argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

} // namespace tristab
