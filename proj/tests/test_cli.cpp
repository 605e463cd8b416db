#include "test_support.hpp"

#include "bivsurv/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace bivsurv;
using namespace bivsurv::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("bivsurv_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string queries_csv() {
    return "s,t\n0,0\n0.11,0\n0.24,0\n0.51,0\n0.68,0\n0,0.02\n0,0.24\n0,0.62\n0,0.68\n0.11,0.02\n";
}

}  // namespace

TEST_CASE("estimate subcommand writes the joint mass and round-trips") {
    TempDir tmp;
    write(tmp.file("d.csv"), example4_csv());
    int rc = cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "noninformative",
                       "--output", tmp.file("m.json")});
    REQUIRE(rc == 0);

    Json j = Json::parse(slurp(tmp.file("m.json")));
    BivariateMass reloaded = decode_mass(j);
    BivariateMass direct = noninformative_estimate(compute_counts(example4_dataset()));
    CHECK(atoms_equal(reloaded, direct));
    // re-queried surface values match the in-process ones exactly
    for (const char* s : {"0", "0.11", "0.51"})
        for (const char* t : {"0", "0.02", "0.62"})
            CHECK(reloaded.survival(parse_decimal(s), parse_decimal(t)) ==
                  direct.survival(parse_decimal(s), parse_decimal(t)));
}

TEST_CASE("estimate outputs are byte-identical across runs") {
    TempDir tmp;
    write(tmp.file("d.csv"), example4_csv());
    REQUIRE(cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "noninformative",
                      "--output", tmp.file("a.json")}) == 0);
    REQUIRE(cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "noninformative",
                      "--output", tmp.file("b.json")}) == 0);
    CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("b.json")));
}

TEST_CASE("estimate with a prior guess file") {
    TempDir tmp;
    write(tmp.file("d.csv"), example4_csv());
    Dataset ds = example4_dataset();
    PriorGuess guess = empirical_prior_guess(ds, Rat(1, 2));
    write(tmp.file("p.json"), encode(guess).dump(2));

    int rc = cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "bayes", "--prior",
                       tmp.file("p.json"), "--output", tmp.file("m.json")});
    REQUIRE(rc == 0);
    BivariateMass reloaded = decode_mass(Json::parse(slurp(tmp.file("m.json"))));
    BivariateMass direct =
        posterior_mean_mass(update(prior_from_guess(guess), compute_counts(ds)));
    CHECK(atoms_equal(reloaded, direct));
}

TEST_CASE("estimate dabrowska and km-marginal variants") {
    TempDir tmp;
    write(tmp.file("d.csv"), example4_csv());
    REQUIRE(cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "dabrowska",
                      "--output", tmp.file("s.json")}) == 0);
    SurvivalSurface surf = decode_surface(Json::parse(slurp(tmp.file("s.json"))));
    CHECK(surf.value(dec("0.51"), Rat(0)) == Rat(3, 8));

    REQUIRE(cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "km-marginal",
                      "--output", tmp.file("km.json")}) == 0);
    Json km_json = Json::parse(slurp(tmp.file("km.json")));
    CHECK(km_json.contains("coord1"));
    CHECK(km_json.contains("coord2"));
}

TEST_CASE("missing input file exits 1 with a clear message") {
    TempDir tmp;
    int rc = cli::run({"estimate", "--input", tmp.file("absent.csv"), "--estimator",
                       "noninformative", "--output", tmp.file("m.json")});
    CHECK(rc == 1);
}

TEST_CASE("usage errors exit 2") {
    TempDir tmp;
    write(tmp.file("d.csv"), example4_csv());
    CHECK(cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "bogus"}) == 2);
    CHECK(cli::run({"estimate"}) == 2);
    CHECK(cli::run({"bogus-subcommand"}) == 2);
    // bayes without a prior file is a usage error
    CHECK(cli::run({"estimate", "--input", tmp.file("d.csv"), "--estimator", "bayes"}) == 2);
}

TEST_CASE("table subcommand reproduces the comparison values") {
    TempDir tmp;
    write(tmp.file("d.csv"), example4_csv());
    write(tmp.file("q.csv"), queries_csv());
    REQUIRE(cli::run({"table", "--input", tmp.file("d.csv"), "--queries", tmp.file("q.csv"),
                      "--output", tmp.file("t.csv")}) == 0);
    std::string expected =
        "s,t,dabrowska,noninformative\n"
        "0,0,1,1\n"
        "0.11,0,0.75,0.75\n"
        "0.24,0,0.75,0.75\n"
        "0.51,0,0.375,0.5\n"
        "0.68,0,0,0\n"
        "0,0.02,0.75,0.75\n"
        "0,0.24,0.75,0.75\n"
        "0,0.62,0.75,0.5\n"
        "0,0.68,0,0\n"
        "0.11,0.02,0.5,0.5\n";
    CHECK(slurp(tmp.file("t.csv")) == expected);
}

TEST_CASE("audit subcommand reports negatives for the product-limit surface only") {
    TempDir tmp;
    write(tmp.file("d.csv"), example4_csv());
    REQUIRE(cli::run({"audit", "--input", tmp.file("d.csv"), "--output", tmp.file("a.json")}) == 0);
    Json j = Json::parse(slurp(tmp.file("a.json")));
    CHECK(j.at("dabrowska").at("negative_count").get<int>() >= 1);
    CHECK(j.at("noninformative").at("negative_count").get<int>() == 0);
}

TEST_CASE("pruitt subcommand emits its report") {
    TempDir tmp;
    REQUIRE(cli::run({"pruitt", "--n", "2000", "--M", "1", "--seed", "7", "--output",
                      tmp.file("p.json")}) == 0);
    Json j = Json::parse(slurp(tmp.file("p.json")));
    CHECK(j.at("n") == 2000);
    CHECK(j.at("M") == 1.0);
    CHECK(std::abs(j.at("limit").get<double>() - 1.0 / 6.0) < 1e-12);
    CHECK(j.at("estimate").get<double>() > 0.05);
    // a missing seed is a usage error: randomized commands never default it
    CHECK(cli::run({"pruitt", "--n", "2000", "--M", "1"}) == 2);
}

TEST_CASE("study subcommand writes CSV or JSON by extension") {
    TempDir tmp;
    TimeGrid grid({Rat(1), Rat(2), Rat(3)});
    ScenarioConfig cfg;
    cfg.grid = grid;
    cfg.p0 = mass_from_atoms(grid, {{Rat(1), Rat(1), Rat(1, 2)}, {Rat(2), Rat(2), Rat(1, 2)}});
    cfg.g = mass_from_atoms(grid, {{Rat(3), Rat(3), Rat(1)}});
    cfg.sample_sizes = {40, 80};
    cfg.replications = 2;
    cfg.seed = 5;
    write(tmp.file("c.json"), encode(cfg).dump(2));

    REQUIRE(cli::run({"study", "--config", tmp.file("c.json"), "--output", tmp.file("r.csv")}) == 0);
    std::string csv = slurp(tmp.file("r.csv"));
    CHECK(csv.rfind("n,replication,estimator,sup_error,negative_cells\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4);

    REQUIRE(cli::run({"study", "--config", tmp.file("c.json"), "--output", tmp.file("r.json")}) == 0);
    Json j = Json::parse(slurp(tmp.file("r.json")));
    CHECK(j.at("runs").size() == 4);

    // identical invocations produce identical bytes
    REQUIRE(cli::run({"study", "--config", tmp.file("c.json"), "--output", tmp.file("r2.csv")}) == 0);
    CHECK(slurp(tmp.file("r.csv")) == slurp(tmp.file("r2.csv")));
}
