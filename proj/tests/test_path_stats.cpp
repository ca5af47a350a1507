#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fbm/path_stats.hpp"
#include "fbm/samplers.hpp"
#include "fbm/types.hpp"
#include "oracles.hpp"
#include "stub_sources.hpp"

using doctest::Approx;
using fbm::SamplePath;
using fbm::TimeGrid;

namespace {

// Reference O(n^2) Hölder modulus, written independently of the library's
// lag-scan fast path.
double brute_force_holder(const SamplePath& p, double gamma) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i)
        for (std::size_t j = i + 1; j < p.values.size(); ++j) {
            const double gap = p.grid.points[j] - p.grid.points[i];
            best = std::max(best,
                            std::abs(p.values[j] - p.values[i]) / std::pow(gap, gamma));
        }
    return best;
}

}  // namespace

TEST_CASE("sup_and_argmax values and earliest-tie convention") {
    const SamplePath rising(TimeGrid({0.0, 0.5, 1.0}), {0.0, 1.0, 2.5});
    CHECK(fbm::sup_and_argmax(rising) == std::pair<double, double>{2.5, 1.0});

    const SamplePath tied(TimeGrid({0.0, 0.5, 1.0}), {0.0, 3.0, 3.0});
    CHECK(fbm::sup_and_argmax(tied) == std::pair<double, double>{3.0, 0.5});

    const SamplePath negative(TimeGrid({0.0, 1.0, 2.0}), {0.0, -1.0, -2.0});
    CHECK(fbm::sup_and_argmax(negative) == std::pair<double, double>{0.0, 0.0});

    CHECK(fbm::argmax_index({0.0, 3.0, 3.0}) == 1);
    CHECK(fbm::argmax_index({5.0, 3.0, 5.0}) == 0);
}

TEST_CASE("holder_modulus on closed-form paths") {
    // Linear path X = 2t on [0,1]: the widest pair maximizes gap^{1-gamma},
    // so S = 2 for every gamma in (0,1].
    stubs::LinearSource lin(2.0, 64);
    const SamplePath path = lin.sample({0, 0});
    CHECK(fbm::holder_modulus(path, 1.0) == Approx(2.0));
    CHECK(fbm::holder_modulus(path, 0.5) == Approx(2.0));
    CHECK(fbm::holder_modulus(path, 0.25) == Approx(2.0));

    const SamplePath zero = stubs::ZeroSource(32).sample({0, 0});
    CHECK(fbm::holder_modulus(zero, 0.4) == 0.0);

    const SamplePath hop(TimeGrid({0.0, 1.0}), {0.0, 0.8});
    CHECK(fbm::holder_modulus(hop, 0.5) == Approx(0.8));
}

TEST_CASE("holder_modulus domain guards") {
    const SamplePath unit(TimeGrid({0.0, 1.0}), {0.0, 1.0});
    CHECK_THROWS_AS(fbm::holder_modulus(unit, 0.0), std::domain_error);
    CHECK_THROWS_AS(fbm::holder_modulus(unit, 1.2), std::domain_error);
    const SamplePath long_path(TimeGrid({0.0, 2.0}), {0.0, 1.0});
    CHECK_THROWS_AS(fbm::holder_modulus(long_path, 0.5), std::domain_error);
}

TEST_CASE("holder_modulus bounds every increment and matches brute force") {
    const SamplePath path = fbm::sample_circulant(fbm::HurstParam(0.5), 256, 1.0, {11, 3});
    for (double gamma : {0.2, 0.45, 0.9}) {
        const double s = fbm::holder_modulus(path, gamma);
        CHECK(s == Approx(brute_force_holder(path, gamma)).epsilon(1e-12));
        for (std::size_t i = 0; i < path.values.size(); i += 7)
            for (std::size_t j = i + 1; j < path.values.size(); j += 5) {
                const double gap = path.grid.points[j] - path.grid.points[i];
                CHECK(std::abs(path.values[j] - path.values[i]) <=
                      s * std::pow(gap, gamma) * (1.0 + 1e-12));
            }
    }
}

TEST_CASE("holder_modulus non-uniform fallback agrees with brute force") {
    const TimeGrid grid({0.0, 0.1, 0.35, 0.7, 1.0});
    const SamplePath path = fbm::sample_cholesky(fbm::HurstParam(0.6), grid, {5, 9});
    for (double gamma : {0.3, 0.59})
        CHECK(fbm::holder_modulus(path, gamma) ==
              Approx(brute_force_holder(path, gamma)).epsilon(1e-12));
}

TEST_CASE("trapezoid_weights reproduce the trapezoid rule") {
    const auto w = fbm::trapezoid_weights(TimeGrid::uniform(1.0, 4));
    REQUIRE(w.size() == 5);
    CHECK(w[0] == Approx(0.125));
    CHECK(w[1] == Approx(0.25));
    CHECK(w[2] == Approx(0.25));
    CHECK(w[3] == Approx(0.25));
    CHECK(w[4] == Approx(0.125));

    const auto v = fbm::trapezoid_weights(TimeGrid({0.0, 0.25, 1.0}));
    CHECK(v[0] == Approx(0.125));
    CHECK(v[1] == Approx(0.5));
    CHECK(v[2] == Approx(0.375));

    // Weights sum to the horizon, and integrate linear functions exactly.
    const TimeGrid grid({0.0, 0.2, 0.3, 0.9, 2.0});
    const auto u = fbm::trapezoid_weights(grid);
    double total = 0.0, linear = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        total += u[i];
        linear += u[i] * (3.0 * grid.points[i] + 1.0);
    }
    CHECK(total == Approx(2.0).epsilon(1e-14));
    CHECK(linear == Approx(3.0 * 2.0 * 2.0 / 2.0 + 2.0).epsilon(1e-14));
}
