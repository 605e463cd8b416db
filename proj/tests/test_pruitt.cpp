#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace bivsurv;
namespace pr = bivsurv::pruitt;

namespace {

bool in_square(double z1, double z2, double lo) {
    return z1 >= lo && z1 <= lo + 1 && z2 >= lo && z2 <= lo + 1;
}

}  // namespace

TEST_CASE("generator invariants at ten thousand draws") {
    pr::PruittConfig cfg{10000, 1.0, 4242};
    pr::PruittSample sample = pr::generate(cfg);
    REQUIRE(sample.observations.size() == 10000);

    long c44 = 0, half_cens_upper = 0;
    for (const auto& o : sample.observations) {
        double z1 = to_double(o.z1), z2 = to_double(o.z2);
        REQUIRE(!(o.d1 == 0 && o.d2 == 0));
        if (o.d1 == 1 && o.d2 == 1) {
            REQUIRE((in_square(z1, z2, 1.0) || in_square(z1, z2, 2.0)));
            ++c44;  // uncensored pairs arise only under the (4,4) draw
        }
        if (o.d1 == 0 && o.d2 == 1 && z2 >= 2 && z2 <= 3) ++half_cens_upper;
    }
    // the (4,4) censoring atom has probability 1/3 and never censors
    CHECK(std::abs(c44 / 10000.0 - 1.0 / 3.0) < 0.015);
    // the first-coordinate-censored, upper-square event has probability 1/6
    CHECK(std::abs(half_cens_upper / 10000.0 - 1.0 / 6.0) < 0.012);
}

TEST_CASE("closed-form estimate on single observations") {
    SECTION("half-censored observation in the upper strip") {
        pr::PruittSample s;
        s.observations.push_back({Rat(1), 0, Rat(5, 2), 1});
        CHECK(pr::dp_estimate_B(s, 1.0) == Catch::Approx(0.375).epsilon(1e-12));
    }
    SECTION("uncensored pair off the block contributes nothing") {
        pr::PruittSample s;
        s.observations.push_back({Rat(3, 2), 1, Rat(3, 2), 1});
        CHECK(pr::dp_estimate_B(s, 1.0) == Catch::Approx(0.125).epsilon(1e-12));
    }
    SECTION("vanishing concentration with no contributions gives zero") {
        pr::PruittSample s;
        s.observations.push_back({Rat(3, 2), 1, Rat(3, 2), 1});
        CHECK(pr::dp_estimate_B(s, 1e-12) < 1e-11);
    }
    SECTION("doubly censored observations are rejected") {
        pr::PruittSample s;
        s.observations.push_back({Rat(1), 0, Rat(1), 0});
        CHECK_THROWS_AS(pr::dp_estimate_B(s, 1.0), consistency_error);
    }
}

TEST_CASE("the limit is exactly one sixth, not the true value zero") {
    CHECK(pr::asymptotic_limit() == Rat(1, 6));
    // recomputed from the two generating event probabilities, each
    // (1/3) * (1/2): censoring atom times square choice
    Rat p1 = Rat(1, 3) * Rat(1, 2);
    Rat p2 = Rat(1, 3) * Rat(1, 2);
    CHECK(pr::asymptotic_limit() == Rat(1, 2) * (p1 + p2));
    CHECK(pr::asymptotic_limit() != Rat(0));
}

TEST_CASE("per-observation contributions average to the limit") {
    // analytic mean of the contribution under the generator:
    //   C=(1,3): always half-censored on the first coordinate, counts 1/2
    //            iff the pair sits in the upper square (prob 1/2)
    //   C=(3,1): symmetric on the lower square
    //   C=(4,4): uncensored, never inside the off-diagonal block
    Rat expected = Rat(1, 3) * (Rat(1, 2) * Rat(1, 2)) + Rat(1, 3) * (Rat(1, 2) * Rat(1, 2));
    REQUIRE(expected == Rat(1, 6));

    pr::PruittConfig cfg{100000, 1.0, 99};
    pr::PruittSample sample = pr::generate(cfg);
    double est = pr::dp_estimate_B(sample, 1.0);
    CHECK(std::abs(est - 1.0 / 6.0) < 0.01);
}

TEST_CASE("the estimate stays far from the true probability") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        for (long n : {1000L, 20000L}) {
            pr::PruittConfig cfg{n, 1.0, seed};
            double est = pr::dp_estimate_B(pr::generate(cfg), 1.0);
            REQUIRE(std::abs(est - 0.0) >= 0.1);
        }
    }
}

TEST_CASE("generation is deterministic per seed and splits by replication index") {
    pr::PruittConfig cfg{500, 1.0, 7};
    double a = pr::dp_estimate_B(pr::generate(cfg), 1.0);
    double b = pr::dp_estimate_B(pr::generate(cfg), 1.0);
    CHECK(a == b);

    SeededRng s0 = SeededRng::stream(7, 0);
    SeededRng s1 = SeededRng::stream(7, 1);
    pr::PruittSample r0 = pr::generate(cfg, s0);
    pr::PruittSample r1 = pr::generate(cfg, s1);
    CHECK(r0.observations[0].z1 != r1.observations[0].z1);
}

TEST_CASE("report fields") {
    pr::PruittConfig cfg{2000, 1.0, 11};
    pr::PruittReport rep = pr::run(cfg);
    CHECK(rep.n == 2000);
    CHECK(rep.estimate == Catch::Approx(rep.gap_to_truth));
    CHECK(rep.limit == Catch::Approx(1.0 / 6.0));
    Json j = encode(rep);
    CHECK(j.at("M") == 1.0);
    CHECK(j.at("n") == 2000);
}
