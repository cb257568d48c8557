#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spt/errors.hpp"
#include "spt/master_equation.hpp"

using namespace spt;

TEST_CASE("two-state chain: P(1) = a / (a + b)") {
    const double a = 0.7, b = 2.1;
    std::vector<std::vector<double>> q{{0, a}, {b, 0}};
    auto pi = stationary_distribution(q);
    CHECK(pi[1] == doctest::Approx(a / (a + b)).epsilon(1e-12));
    CHECK(pi[0] + pi[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric rates give the uniform distribution") {
    std::vector<std::vector<double>> q{{0, 1.3}, {1.3, 0}};
    auto pi = stationary_distribution(q);
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("birth-death chain follows the detailed-balance product") {
    // 0 <-> 1 <-> 2 with up rate a, down rate b: pi_n ~ (a/b)^n.
    const double a = 2.0, b = 1.0;
    std::vector<std::vector<double>> q{{0, a, 0}, {b, 0, a}, {0, b, 0}};
    auto pi = stationary_distribution(q);
    const double z = 1.0 + 2.0 + 4.0;
    CHECK(pi[0] == doctest::Approx(1.0 / z).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(2.0 / z).epsilon(1e-12));
    CHECK(pi[2] == doctest::Approx(4.0 / z).epsilon(1e-12));
}

TEST_CASE("non-reversible three-state cycle") {
    // Rotation 0->1->2->0 at rate r plus back edges; solve vs hand algebra.
    std::vector<std::vector<double>> q{{0, 2.0, 0.5}, {0.5, 0, 2.0}, {2.0, 0.5, 0}};
    auto pi = stationary_distribution(q);
    // Symmetric under cyclic relabeling, so the distribution is uniform.
    for (int i = 0; i < 3; ++i) CHECK(pi[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("disconnected chain reports one distribution per closed class") {
    std::vector<std::vector<double>> q{
        {0, 1, 0, 0}, {2, 0, 0, 0}, {0, 0, 0, 3}, {0, 0, 1, 0}};
    StationaryResult r = master_equation_steady_state(q);
    CHECK(r.disconnected);
    REQUIRE(r.recurrent_classes.size() == 2);
    CHECK(r.class_distributions[0][1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.class_distributions[1][3] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK_THROWS_AS(stationary_distribution(q), ConfigError);
}

TEST_CASE("transient states drain into the closed class") {
    // 0 -> 1 -> 2, 2 <-> 1: class {1, 2} is closed, 0 is transient.
    std::vector<std::vector<double>> q{{0, 1, 0}, {0, 0, 1}, {0, 1, 0}};
    StationaryResult r = master_equation_steady_state(q);
    CHECK(!r.disconnected);
    REQUIRE(r.recurrent_classes.size() == 1);
    auto pi = r.class_distributions[0];
    CHECK(pi[0] == 0.0);
    CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(master_equation_steady_state({{0, -1}, {1, 0}}), ConfigError);
    CHECK_THROWS_AS(master_equation_steady_state({{0, 1}}), ConfigError);  // not square
}
