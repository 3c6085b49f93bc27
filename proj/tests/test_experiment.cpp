#include "tristab/cli.hpp"
#include "tristab/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace tristab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "tristab-tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentConfig stability_config()
{
    ExperimentConfig cfg;
    cfg.algebra = {AlgebraKind::TruncatedPoly, 3};
    cfg.recipe = MapRecipe::PolyTriderivation;
    cfg.theta0 = 0.1;
    cfg.params.r = 3.0;
    cfg.suite = Suite::Stability;
    cfg.sample_count = 100;
    return cfg;
}

struct CliRun {
    int code;
    std::string out, err;
};

CliRun cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json without_clock(nlohmann::json doc)
{
    doc.erase("wall_clock_seconds");
    return doc;
}

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("inequality suite on an exact map")
{
    for (auto kind : {AlgebraKind::PointwiseCn, AlgebraKind::TruncatedPoly, AlgebraKind::MatrixCStar}) {
        ExperimentConfig cfg;
        cfg.algebra = {kind, 2};
        cfg.recipe = MapRecipe::ExactTrilinear;
        cfg.suite = Suite::Inequality;
        cfg.variant = Variant::ScalarB;
        cfg.sample_count = 200;
        const VerificationReport rep = run_suite(cfg);
        CHECK(rep.all_gating_passed());
        for (const char* name : {"cancellation_A", "cancellation_B", "cancellation_scaled"}) {
            REQUIRE(rep.find(name));
            CHECK(rep.find(name)->value <= 1e-12);
        }
        CHECK(rep.estimates.at("theta_hat") == 0.0);
    }
}

TEST_CASE("unperturbed stability run is a vacuous pass")
{
    ExperimentConfig cfg = stability_config();
    cfg.theta0 = 0.0;
    const VerificationReport rep = run_suite(cfg);
    CHECK(rep.estimates.at("theta_hat") == 0.0);
    REQUIRE(rep.find("stability_bound"));
    CHECK(rep.find("stability_bound")->value == 0.0);
    CHECK(rep.all_gating_passed());
}

TEST_CASE("derivation pipeline")
{
    ExperimentConfig cfg = stability_config();
    cfg.suite = Suite::Derivation;
    cfg.sample_count = 300;
    const VerificationReport rep = run_suite(cfg);
    CHECK(rep.all_gating_passed());
    for (const char* name : {"stability_bound", "triadditivity", "trilinearity", "uniqueness", "derivation_identity",
                             "permuting_identity", "limit_matches_exact_part"}) {
        const CheckRecord* c = rep.find(name);
        REQUIRE(c);
        CHECK(c->gating);
        CHECK(c->passed());
    }
    CHECK(rep.find("derivation_identity")->value <= 1e-8);

    // every check appears exactly once
    std::set<std::string> names;
    for (const auto& c : rep.checks)
        CHECK(names.insert(c.name).second);
}

TEST_CASE("exploratory regime is flagged and not gating")
{
    ExperimentConfig cfg = stability_config();
    cfg.suite = Suite::Derivation;
    cfg.params.r = 1.5;
    const VerificationReport rep = run_suite(cfg);
    const CheckRecord* c = rep.find("derivation_identity");
    REQUIRE(c);
    CHECK_FALSE(c->gating);
    CHECK(std::find(c->flags.begin(), c->flags.end(), "exploratory:out-of-theorem-scope") != c->flags.end());
}

TEST_CASE("homomorphism and unitary suites")
{
    ExperimentConfig h;
    h.algebra = {AlgebraKind::PointwiseCn, 3};
    h.recipe = MapRecipe::PointwiseTrihom;
    h.suite = Suite::Homomorphism;
    h.theta0 = 0.1;
    h.sample_count = 200;
    const VerificationReport hr = run_suite(h);
    CHECK(hr.all_gating_passed());
    CHECK(hr.find("hom_identity")->value <= 1e-8);

    ExperimentConfig u;
    u.algebra = {AlgebraKind::MatrixCStar, 2};
    u.recipe = MapRecipe::InnerDerivation;
    u.suite = Suite::Unitary;
    u.theta0 = 0.01;
    u.sample_count = 100;
    const VerificationReport ur = run_suite(u);
    CHECK(ur.all_gating_passed());
    CHECK(ur.find("unitary_decompose_roundtrip")->value <= 1e-10);
    CHECK(ur.find("six_unitary_hom_evaluation")->value == 0.0);
}

TEST_CASE("config validation")
{
    ExperimentConfig cfg = stability_config();
    cfg.params.r = 1.0;
    CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("r = 1"));
    cfg = stability_config();
    cfg.params.s = 1.5;
    CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("|s| < 1"));
    cfg = stability_config();
    cfg.sample_count = 0;
    CHECK_THROWS(cfg.validate());
    cfg = stability_config();
    cfg.algebra = {AlgebraKind::MatrixCStar, 2};
    CHECK_THROWS(cfg.validate());
    cfg = stability_config();
    cfg.suite = Suite::Unitary;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("report round trip and CSV rows")
{
    const VerificationReport rep = run_suite(stability_config());
    const fs::path path = scratch("roundtrip.json");
    const auto csvs = emit_report(rep, path);
    REQUIRE(csvs.size() == rep.curves.size());
    const VerificationReport back = load_report(path);
    CHECK(to_json(back) == to_json(rep));
    for (std::size_t k = 0; k < csvs.size(); ++k) {
        std::ifstream in(csvs[k]);
        std::string line;
        std::getline(in, line);
        CHECK(line == "n,last_step,tail_bound");
        std::size_t rows = 0;
        while (std::getline(in, line))
            ++rows;
        CHECK(rows == rep.curves[k].points.size());
    }
}

TEST_CASE("strict report parsing")
{
    const nlohmann::json doc = to_json(run_suite(stability_config()));
    CHECK_NOTHROW(report_from_json(doc));

    nlohmann::json extra = doc;
    extra["surprise"] = 1;
    CHECK_THROWS(report_from_json(extra));

    nlohmann::json missing = doc;
    missing.erase("checks");
    CHECK_THROWS(report_from_json(missing));

    nlohmann::json schema = doc;
    schema["schema_version"] = "tristab.report/0";
    CHECK_THROWS(report_from_json(schema));

    nlohmann::json liar = doc;
    // hypothesis_premise is an at-least check recorded as PASS
    liar["checks"][0]["value"] = -1e9;
    CHECK_THROWS(report_from_json(liar));

    nlohmann::json nested = doc;
    nested["checks"][0]["bonus"] = true;
    CHECK_THROWS(report_from_json(nested));
}

TEST_CASE("determinism across runs and worker counts")
{
    ExperimentConfig cfg = stability_config();
    const fs::path a = scratch("det-a.json"), b = scratch("det-b.json");
    VerificationReport ra = run_suite(cfg);
    cfg.workers = 4;
    VerificationReport rb = run_suite(cfg);
    ra.wall_clock_seconds = 0.0;
    rb.wall_clock_seconds = 0.0;
    emit_report(ra, a, false);
    emit_report(rb, b, false);
    CHECK(slurp(a) == slurp(b));
    CHECK(without_clock(to_json(run_suite(stability_config()))) == without_clock(to_json(ra)));
}

TEST_CASE("number formatting")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-12) == "1e-12");
    CHECK(std::stod(format_double(2.0 / 3.0)) == 2.0 / 3.0);
}

TEST_CASE("cli exit codes")
{
    const CliRun ok = cli({"stability", "--algebra", "poly", "--dim", "3", "--r", "3", "--theta0", "0.1", "--s", "0.5,0",
                           "--seed", "42", "--samples", "200"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verdict: PASS") != std::string::npos);

    const CliRun s = cli({"stability", "--s", "1.5,0"});
    CHECK(s.code == 2);
    CHECK(s.err.find("|s| < 1") != std::string::npos);

    const CliRun r = cli({"stability", "--r", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("r = 1 is excluded") != std::string::npos);

    CHECK(cli({"stability", "--no-such-flag"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"stability", "--variant", "C"}).code == 2);
    CHECK(cli({"unitary-suite", "--algebra", "poly"}).code == 2);

    const CliRun neg = cli({"stability", "--theta0", "0.1", "--theta-factor", "0.5", "--samples", "100"});
    CHECK(neg.code == 1);
    CHECK(neg.out.find("FAIL hypothesis_premise") != std::string::npos);

    for (const char* sub : {"check-inequality", "derivation-suite", "hom-suite", "unitary-suite"})
        CHECK(cli({sub, "--theta0", "0.01", "--samples", "60"}).code == 0);
}

TEST_CASE("cli writes reports, CSV and plots")
{
    const fs::path out = scratch("cli-report.json");
    const CliRun run = cli({"stability", "--theta0", "0.1", "--samples", "50", "--out", out.string(), "--plot"});
    CHECK(run.code == 0);
    const VerificationReport rep = load_report(out);
    CHECK(rep.config.at("seed") == 42);
    fs::path svg = out;
    svg.replace_extension();
    svg += ".convergence.svg";
    CHECK(fs::exists(svg));
    fs::path csv = out;
    csv.replace_extension();
    csv += ".curve0.csv";
    CHECK(fs::exists(csv));
}

TEST_CASE("seed falls back to the environment")
{
    const fs::path out = scratch("env-seed.json");
    ::setenv("TRISTAB_SEED", "1234", 1);
    CHECK(cli({"check-inequality", "--samples", "20", "--out", out.string()}).code == 0);
    CHECK(load_report(out).config.at("seed") == 1234);
    CHECK(cli({"check-inequality", "--samples", "20", "--seed", "5", "--out", out.string()}).code == 0);
    CHECK(load_report(out).config.at("seed") == 5);
    ::unsetenv("TRISTAB_SEED");
}

TEST_CASE("sweep emits one report per cell")
{
    const fs::path dir = scratch("sweep");
    fs::remove_all(dir);
    const CliRun run = cli({"sweep", "--samples", "40", "--out", dir.string(), "--no-csv"});
    CHECK(run.code == 0);
    std::size_t reports = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json")
            ++reports;
    CHECK(reports == 9);
    CHECK(cli({"sweep", "--r-list", "3,1", "--samples", "10"}).code == 2);
}

}
