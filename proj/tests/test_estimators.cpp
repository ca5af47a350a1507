#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fbm/estimators.hpp"
#include "fbm/rng.hpp"
#include "fbm/samplers.hpp"
#include "fbm/types.hpp"
#include "oracles.hpp"
#include "stub_sources.hpp"

using doctest::Approx;
using fbm::HurstParam;
using fbm::MCEstimate;
using fbm::RngSpec;

TEST_CASE("degenerate horizon 0 is the pinned point") {
    const MCEstimate hit = fbm::estimate_exit_prob(HurstParam(0.5), 0.0, 1.0, 64, 100, {1, 0});
    CHECK(hit.value == 1.0);
    CHECK(hit.std_err == 0.0);
    CHECK(hit.grid_points == 1);
    CHECK(hit.n_samples == 100);
    const MCEstimate miss =
        fbm::estimate_exit_prob(HurstParam(0.5), 0.0, -1.0, 64, 100, {1, 0});
    CHECK(miss.value == 0.0);
}

TEST_CASE("zero paths give the estimators' closed-form values") {
    stubs::ZeroSource unit(64);
    const RngSpec rng{2, 0};

    // sup = 0: the exit indicator is identically 1 below any positive barrier.
    const MCEstimate tail = fbm::estimate_lower_tail(HurstParam(0.4), 50.0, 64, 50, rng, &unit);
    CHECK(tail.value == 1.0);
    CHECK(tail.std_err == 0.0);

    // I(T) = (T * integral of e^0)^{-1} = 1/T.
    const MCEstimate molchan =
        fbm::estimate_molchan_I(HurstParam(0.4), 2.0, 64, 50, rng, &unit);
    CHECK(molchan.value == Approx(0.5).epsilon(1e-14));
    CHECK(molchan.std_err == 0.0);

    // g(T) = e^{-T^H * 0} = 1.
    const MCEstimate laplace =
        fbm::estimate_laplace_g(HurstParam(0.5), 16.0, 64, 50, rng, &unit);
    CHECK(laplace.value == 1.0);
    CHECK(laplace.std_err == 0.0);

    // A zero path never exceeds a negative barrier.
    stubs::ZeroSource native(64, 4.0);
    const MCEstimate above =
        fbm::estimate_exit_prob(HurstParam(0.5), 4.0, -1.0, 64, 50, rng, &native);
    CHECK(above.value == 0.0);
}

TEST_CASE("lower tail is the unit-horizon exit probability, bit for bit") {
    const HurstParam h(0.6);
    const RngSpec rng{31, 0};
    const MCEstimate exit = fbm::estimate_exit_prob(h, 1.0, 0.37, 64, 200, rng);
    const MCEstimate tail = fbm::estimate_lower_tail(h, 0.37, 64, 200, rng);
    CHECK(exit.value == tail.value);
    CHECK(exit.std_err == tail.std_err);
    CHECK(exit.grid_points == tail.grid_points);
}

TEST_CASE("self-similarity: native-horizon run matches the unit reduction") {
    // P(sup_[0,4] X <= 1) = P(X*_1 <= 4^{-H}); estimated with independent
    // seeds, the two runs agree within joint Monte Carlo error (the laws are
    // identical, including the grid mapping).
    const HurstParam h(0.5);
    const MCEstimate native = fbm::estimate_exit_prob(h, 4.0, 1.0, 512, 4000, {5, 0});
    const MCEstimate reduced = fbm::estimate_lower_tail(h, 0.5, 512, 4000, {6, 0});
    CHECK(std::abs(native.value - reduced.value) <=
          4.0 * oracles::joint_se(native.std_err, reduced.std_err));
}

TEST_CASE("Brownian closed forms: exit and Laplace oracles at moderate scale") {
    const HurstParam h(0.5);
    const MCEstimate exit = fbm::estimate_lower_tail(h, 1.0, 4096, 10000, {7, 0});
    // Grid-sup bias is upward and well under the Monte Carlo band here.
    CHECK(std::abs(exit.value - oracles::brownian_exit(1.0)) <=
          4.0 * exit.std_err + 0.003);

    const MCEstimate g1 = fbm::estimate_laplace_g(h, 1.0, 4096, 10000, {8, 0});
    CHECK(std::abs(g1.value - oracles::half_normal_laplace(1.0)) <=
          4.0 * g1.std_err + 0.003);
}

TEST_CASE("shared-sample monotonicity and the Tauberian bridge") {
    const HurstParam h(0.35);
    const fbm::CirculantSampler src(h, 256, 1.0);
    const RngSpec rng{11, 0};
    const std::size_t m = 2000;

    // Lower tail decreasing in eps on shared paths: per-sample indicators are
    // ordered, so the means are ordered exactly.
    const double p12 = fbm::estimate_lower_tail(h, 1.2, 256, m, rng, &src).value;
    const double p05 = fbm::estimate_lower_tail(h, 0.5, 256, m, rng, &src).value;
    const double p02 = fbm::estimate_lower_tail(h, 0.2, 256, m, rng, &src).value;
    CHECK(p12 >= p05);
    CHECK(p05 >= p02);

    // g decreasing in T on shared paths (sup >= 0 since X(0) = 0).
    const double g2 = fbm::estimate_laplace_g(h, 2.0, 256, m, rng, &src).value;
    const double g8 = fbm::estimate_laplace_g(h, 8.0, 256, m, rng, &src).value;
    CHECK(g2 >= g8 - 1e-15);

    // Tauberian direction on shared paths: sup <= eps implies
    // e^{-T^H sup} >= e^{-T^H eps}, so g(T) >= e^{-b} P(X*_1 <= b T^{-H}).
    const double horizon = 4.0, b = 0.7;
    const double a = std::pow(horizon, h.value);
    const double ghat = fbm::estimate_laplace_g(h, horizon, 256, m, rng, &src).value;
    const double phat = fbm::estimate_lower_tail(h, b / a, 256, m, rng, &src).value;
    CHECK(ghat >= std::exp(-b) * phat - 1e-12);
}

TEST_CASE("molchan aggregate decreases along increasing horizons") {
    const HurstParam h(0.5);
    const std::vector<MCEstimate> table =
        fbm::estimate_molchan_multi(h, {2.0, 4.0, 16.0}, 512, 2000, {13, 0});
    REQUIRE(table.size() == 3);
    for (std::size_t k = 1; k < table.size(); ++k) {
        const double slack =
            4.0 * oracles::joint_se(table[k - 1].std_err, table[k].std_err);
        CHECK(table[k].value <= table[k - 1].value + slack);
    }
}

TEST_CASE("molchan_multi with one horizon reproduces the single estimator") {
    const HurstParam h(0.3);
    const auto multi = fbm::estimate_molchan_multi(h, {3.0}, 128, 300, {21, 0});
    const auto single = fbm::estimate_molchan_I(h, 3.0, 128, 300, {21, 0});
    REQUIRE(multi.size() == 1);
    CHECK(multi[0].value == single.value);  // identical arithmetic, bit for bit
    CHECK(multi[0].std_err == single.std_err);
}

TEST_CASE("coupled_sup_tables: levels, exact monotone refinement, weights") {
    const auto tables = fbm::coupled_sup_tables(HurstParam(0.5), {1.0, 4.0}, 1.0,
                                                /*finest=*/256, /*n_levels=*/3,
                                                /*m=*/400, {23, 0}, /*with_laplace=*/true);
    CHECK(tables.grid_steps == std::vector<std::size_t>{64, 128, 256});
    REQUIRE(tables.exit.size() == 2);
    REQUIRE(tables.laplace.size() == 2);

    for (const auto& group : {tables.exit, tables.laplace}) {
        for (const auto& t : group) {
            REQUIRE(t.levels.size() == 3);
            for (std::size_t l = 0; l < 3; ++l)
                CHECK(t.levels[l].grid_points == tables.grid_steps[l]);
            // Coarse-grid sups are subgrid sups, so both statistics are
            // pointwise dominated: level means decrease, exactly up to
            // reduction rounding.
            CHECK(t.levels[1].value <= t.levels[0].value + 1e-12);
            CHECK(t.levels[2].value <= t.levels[1].value + 1e-12);

            double wsum = 0.0, recombined = 0.0;
            REQUIRE(t.fit.weights.size() == 3);
            for (std::size_t l = 0; l < 3; ++l) {
                wsum += t.fit.weights[l];
                recombined += t.fit.weights[l] * t.levels[l].value;
            }
            CHECK(wsum == Approx(1.0).epsilon(1e-9));
            CHECK(t.combined.value == Approx(recombined).epsilon(1e-9));
            CHECK(t.combined.value == Approx(t.fit.value).epsilon(1e-9));
            CHECK(t.combined.n_samples == 400);
            CHECK(t.combined.std_err > 0.0);
        }
    }
}

TEST_CASE("estimator argument guards") {
    const HurstParam h(0.5);
    stubs::ZeroSource native(16, 2.0);
    // Molchan, Laplace, and the lower tail all require unit-horizon sources.
    CHECK_THROWS_AS(fbm::estimate_molchan_I(h, 2.0, 16, 5, {1, 0}, &native),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::estimate_laplace_g(h, 2.0, 16, 5, {1, 0}, &native),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::estimate_lower_tail(h, 0.5, 16, 5, {1, 0}, &native),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::estimate_exit_prob(h, 1.0, 1.0, 16, 0, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::estimate_exit_prob(h, -1.0, 1.0, 16, 5, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::estimate_molchan_I(h, 0.0, 16, 5, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::estimate_lower_tail(h, 0.0, 16, 5, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        fbm::coupled_sup_tables(h, {}, 1.0, 64, 2, 5, {1, 0}, false),
        std::invalid_argument);
    CHECK_THROWS_AS(
        fbm::coupled_sup_tables(h, {1.0}, 1.0, 8, 5, 5, {1, 0}, false),
        std::invalid_argument);
}

TEST_SUITE("slow") {
    TEST_CASE("molchan estimate is stable under grid refinement") {
        // Two very different (grid, sample) allocations must agree within
        // joint Monte Carlo error for the same functional.
        const HurstParam h(0.5);
        const MCEstimate coarse =
            fbm::estimate_molchan_I(h, 1.0, std::size_t{1} << 14, 100000, {303, 0});
        const MCEstimate fine =
            fbm::estimate_molchan_I(h, 1.0, std::size_t{1} << 16, 10000, {404, 0});
        CHECK(std::abs(coarse.value - fine.value) <=
              4.0 * oracles::joint_se(coarse.std_err, fine.std_err));
    }
}
