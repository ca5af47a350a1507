#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "fbm/chain.hpp"
#include "fbm/drift.hpp"
#include "fbm/types.hpp"
#include "oracles.hpp"
#include "stub_sources.hpp"

using doctest::Approx;
using fbm::HurstParam;
using fbm::RngSpec;

TEST_CASE("crucial chain on the zero path: every margin is exact") {
    // S = 0 forces eps = 1; assertion (1) has slack 1 and (2), (3) hold with
    // equality, so the fold lands exactly on zero.
    stubs::ZeroSource unit(64);
    const fbm::ChainReport rep =
        fbm::check_crucial_chain(HurstParam(0.5), 4.0, 0.3, 64, 20, {1, 0}, &unit);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin == Approx(0.0).epsilon(1e-15));
    CHECK(rep.n_samples == 20);
    CHECK(rep.witness_stream.has_value());
    CHECK(rep.note.empty());
}

TEST_CASE("crucial chain on steep linear paths exercises the eps clamp") {
    // slope 3, T = 4, H = 0.5: T^H S = 6 > 1, so eps < 1 and assertion (1)
    // collapses to an identity (margin ~ 0); still zero violations.
    stubs::LinearSource lin(3.0, 512);
    const fbm::ChainReport steep =
        fbm::check_crucial_chain(HurstParam(0.5), 4.0, 0.3, 512, 10, {1, 0}, &lin);
    CHECK(steep.violations == 0);

    // slope 0.1, T = 1: T^H S < 1 keeps eps at the clamp.
    stubs::LinearSource shallow(0.1, 128);
    const fbm::ChainReport clamped =
        fbm::check_crucial_chain(HurstParam(0.5), 1.0, 0.3, 128, 10, {1, 0}, &shallow);
    CHECK(clamped.violations == 0);
}

TEST_CASE("crucial chain holds on sampled paths") {
    const fbm::ChainReport rep =
        fbm::check_crucial_chain(HurstParam(0.6), 16.0, 0.45, 512, 500, {77, 0});
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin >= -1e-9);
    CHECK(rep.n_samples == 500);
    CHECK(rep.hurst == 0.6);
    CHECK(rep.gamma == 0.45);

    const fbm::ChainReport rough =
        fbm::check_crucial_chain(HurstParam(0.3), 4.0, 0.2, 256, 300, {78, 0});
    CHECK(rough.violations == 0);
}

TEST_CASE("gamma must lie strictly inside (H/2, H)") {
    const HurstParam h(0.6);
    CHECK_THROWS_AS(fbm::check_crucial_chain(h, 4.0, 0.6, 64, 5, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::check_crucial_chain(h, 4.0, 0.3, 64, 5, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::check_crucial_chain(h, 4.0, 0.7, 64, 5, {1, 0}),
                    std::invalid_argument);
}

TEST_CASE("barrier_stays_below evaluates at every grid node") {
    const fbm::SamplePath zero = stubs::ZeroSource(64, std::exp(10.0)).sample({0, 0});
    const fbm::DriftSpec spec{2.0, std::exp(10.0), HurstParam(0.5)};
    // phi drops to -kappa log T = -20 beyond the changepoint 400; the zero
    // path sits above that.
    CHECK_FALSE(fbm::barrier_stays_below(zero, [&](double t) { return fbm::phi(t, spec); }));
    CHECK(fbm::barrier_stays_below(zero, [](double) { return 1.0; }));

    const fbm::SamplePath hop(fbm::TimeGrid({0.0, 1.0}), {0.0, 2.0});
    CHECK_FALSE(fbm::barrier_stays_below(hop, [](double) { return 1.0; }));
}

TEST_CASE("drift lower bound on zero paths: closed-form aggregate") {
    // kappa = 1.5, T = 4, H = 0.5: changepoint (1.5 log 4)^2 ~ 4.32 > T, so
    // phi = 1 on the whole window and every zero path stays below it.
    stubs::ZeroSource unit(64);
    const fbm::DriftBoundReport rep =
        fbm::check_drift_lower_bound(HurstParam(0.5), 4.0, 1.5, 64, 50, {3, 0}, &unit);
    CHECK(rep.chain.violations == 0);
    CHECK(rep.p_below == 1.0);
    CHECK(rep.i_hat == Approx(0.25).epsilon(1e-12));
    CHECK(rep.log_phi_integral == Approx(std::log(4.0) + 1.0).epsilon(1e-12));
    CHECK(rep.aggregate_holds);
    CHECK(rep.aggregate_margin > 0.0);
    CHECK(rep.chain.gamma == 1.5);  // the gamma slot carries kappa
    // A > T: the closed-form display still holds, the precondition does not.
    CHECK(rep.analytic.holds);
    CHECK_FALSE(rep.analytic.precondition_ok);
}

TEST_CASE("drift lower bound on sampled paths with a reachable changepoint") {
    // T = e^2, kappa = 1.1, H = 0.7: changepoint ~ 3.08 < T, and the lowered
    // branch is within reach of the paths, so p_below lands in (0, 1).
    const fbm::DriftBoundReport rep = fbm::check_drift_lower_bound(
        HurstParam(0.7), std::exp(2.0), 1.1, 512, 2000, {41, 0});
    CHECK(rep.chain.violations == 0);
    CHECK(rep.p_below > 0.0);
    CHECK(rep.p_below < 1.0);
    CHECK(rep.aggregate_holds);
    CHECK(rep.analytic.precondition_ok);
    CHECK(rep.analytic.holds);
}

TEST_CASE("drift spec guards") {
    CHECK_THROWS_AS(fbm::check_drift_lower_bound(HurstParam(0.5), 4.0, 1.0, 64, 5, {1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::check_drift_lower_bound(HurstParam(0.5), 1.0, 1.5, 64, 5, {1, 0}),
                    std::invalid_argument);
}

TEST_CASE("slepian checker on independent halves is unbiased") {
    // The stub decouples the two sup events exactly, so the factorization
    // difference is zero in law; the estimate must sit inside its own noise
    // band and the one-sided test must pass.
    stubs::IndependentHalvesSource src(256, 0.5);
    const fbm::SlepianReport rep =
        fbm::slepian_factorization_check(HurstParam(0.5), 2.0, 1.0, 4000, {9, 0}, 256, &src);
    CHECK(rep.passed);
    CHECK(std::abs(rep.diff) <= 4.0 * rep.diff_stderr);
    CHECK(rep.first.value > 0.1);
    CHECK(rep.second.value > 0.1);
    // H >= 1/2 runs the increment variant; X(split) = 0 by construction makes
    // its B' event empty, so the product bound degenerates to 0 >= 0.
    CHECK(rep.increment_variant_run);
    CHECK(rep.inc_diff == 0.0);
    CHECK(rep.inc_passed);

    const fbm::SlepianReport low = fbm::slepian_factorization_check(
        HurstParam(0.3), 2.0, 1.0, 200, {9, 0}, 256, &src);
    CHECK_FALSE(low.increment_variant_run);
}

TEST_CASE("slepian factorization holds on sampled fbm") {
    const fbm::SlepianReport rep =
        fbm::slepian_factorization_check(HurstParam(0.7), 4.0, 1.0, 4000, {15, 0}, 256);
    CHECK(rep.passed);
    CHECK(rep.increment_variant_run);
    CHECK(rep.inc_passed);
    CHECK(rep.joint.n_samples == 4000);
}

TEST_CASE("slepian argument guards") {
    const HurstParam h(0.5);
    CHECK_THROWS_AS(fbm::slepian_factorization_check(h, 4.0, 4.0, 10, {1, 0}, 64),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::slepian_factorization_check(h, 4.0, 0.0, 10, {1, 0}, 64),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm::slepian_factorization_check(h, 4.0, 1.0, 1, {1, 0}, 64),
                    std::invalid_argument);
    // 0.7333/4 does not land on a 64-step grid.
    CHECK_THROWS_AS(fbm::slepian_factorization_check(h, 4.0, 0.7333, 10, {1, 0}, 64),
                    std::invalid_argument);
}
