#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "qfn/linear_model.hpp"
#include "qfn/network_params.hpp"

using namespace qfn;

namespace {

NetworkParams fig2_params() {
    NetworkParams p;
    p.coupling_1 = 1e-3;
    p.coupling_2 = 1e-3;
    p.kappa = 1e-3;
    p.mu = 0.0;
    return p;
}

}  // namespace

TEST_CASE("effective_kappa closed forms") {
    CHECK(effective_kappa(1e-3, 0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(effective_kappa(1e-3, 0.6) == doctest::Approx(2.5e-4).epsilon(1e-15));
    CHECK(effective_kappa(7.5e-3, 0.2) == doctest::Approx(5e-3).epsilon(1e-15));
}

TEST_CASE("effective_kappa domain errors") {
    CHECK_THROWS_AS(effective_kappa(0.0, 0.2), std::domain_error);
    CHECK_THROWS_AS(effective_kappa(-1e-3, 0.2), std::domain_error);
    CHECK_THROWS_AS(effective_kappa(1e-3, 1.0), std::domain_error);
    CHECK_THROWS_AS(effective_kappa(1e-3, -0.1), std::domain_error);
}

TEST_CASE("effective_kappa strictly decreasing in mu") {
    double previous = effective_kappa(1e-3, 0.0);
    for (int k = 1; k < 100; ++k) {
        const double value = effective_kappa(1e-3, 0.0099 * k);
        CHECK(value < previous);
        previous = value;
    }
}

TEST_CASE("slh_reduce") {
    NetworkParams p = fig2_params();
    SUBCASE("mu = 0 keeps kappa") {
        CHECK(slh_reduce(p).coupling_rate == doctest::Approx(p.kappa).epsilon(1e-15));
        CHECK(slh_reduce(p).scattering == 1.0);
    }
    SUBCASE("figs 4-7 configuration") {
        p.kappa = 1.5e-3;
        p.mu = 0.2;
        CHECK(slh_reduce(p).coupling_rate == doctest::Approx(1e-3).epsilon(1e-12));
    }
    SUBCASE("mu -> 1 sends the rate to zero monotonically") {
        double previous = slh_reduce(p).coupling_rate;
        for (double mu : {0.9, 0.99, 0.999, 0.9999}) {
            p.mu = mu;
            const double rate = slh_reduce(p).coupling_rate;
            CHECK(rate < previous);
            CHECK(rate > 0.0);
            previous = rate;
        }
    }
    SUBCASE("hamiltonian parameters pass through unchanged") {
        p.delta_omega_1 = 3e-4;
        const SlhTriple triple = slh_reduce(p);
        CHECK(triple.hamiltonian_params.delta_omega_1 == p.delta_omega_1);
        CHECK(triple.hamiltonian_params.coupling_2 == p.coupling_2);
    }
}

TEST_CASE("decoupled empty cavity gives diagonal A") {
    NetworkParams p;
    p.coupling_1 = 0.0;
    p.coupling_2 = 0.0;
    p.kappa = 1e-3;
    p.mu = 0.4;
    const LinearModel m = build_linear_model(p, true);
    const double kt = effective_kappa(p);
    CHECK(m.a(0, 0) == cplx{0.0, 0.0});
    CHECK(m.a(1, 1) == cplx{0.0, 0.0});
    CHECK(m.a(2, 2).real() == doctest::Approx(-kt / 2.0).epsilon(1e-15));
    CHECK(m.a(0, 2) == cplx{0.0, 0.0});
}

TEST_CASE("fig 2 open-loop cavity entry is -kappa/2") {
    const LinearModel m = build_linear_model(fig2_params(), true);
    CHECK(m.a(2, 2).real() == doctest::Approx(-5e-4).epsilon(1e-15));
}

TEST_CASE("model structure for random parameters") {
    oracles::ParamSampler sampler(20260810u);
    for (int trial = 0; trial < 200; ++trial) {
        const NetworkParams p = sampler.draw(trial % 7 == 0);
        const LinearModel m = build_linear_model(p, true);

        // structural zeros and the c = -b^T relation
        CHECK(m.a(0, 1) == cplx{0.0, 0.0});
        CHECK(m.a(1, 0) == cplx{0.0, 0.0});
        CHECK(m.b(0) == cplx{0.0, 0.0});
        CHECK(m.b(1) == cplx{0.0, 0.0});
        for (int k = 0; k < 3; ++k) {
            CHECK(m.c(k) == -m.b(k));
        }

        // eigenvalues of A + A^dag are {0, 0, -kappa_tilde}
        Eigen::SelfAdjointEigenSolver<Mat3> eig(Mat3(m.a + m.a.adjoint()),
                                                Eigen::EigenvaluesOnly);
        const double kt = effective_kappa(p);
        CHECK(eig.eigenvalues()(0) == doctest::Approx(-kt).epsilon(1e-12));
        CHECK(std::abs(eig.eigenvalues()(1)) < 1e-12 * kt);
        CHECK(std::abs(eig.eigenvalues()(2)) < 1e-12 * kt);

        // closed loop == open loop with kappa replaced by kappa_tilde
        NetworkParams substituted = p;
        substituted.kappa = kt;
        substituted.mu = 0.0;
        const LinearModel open_sub = build_linear_model(substituted, false);
        CHECK((m.a - open_sub.a).cwiseAbs().maxCoeff() == 0.0);
        CHECK((m.b - open_sub.b).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("params JSON ingestion is strict") {
    nlohmann::json good = {
        {"delta_omega_1", 1e-3}, {"delta_omega_2", -1e-3}, {"delta_omega_r", 0.0},
        {"gamma_1", 1e-3},       {"gamma_2", 1e-3},        {"kappa", 1e-3},
        {"mu", 0.0}};
    const NetworkParams p = params_from_json(good);
    CHECK(p.coupling_1 == 1e-3);
    CHECK(p.delta_omega_2 == -1e-3);

    SUBCASE("missing key is named") {
        nlohmann::json bad = good;
        bad.erase("kappa");
        CHECK_THROWS_WITH_AS(params_from_json(bad),
                             doctest::Contains("missing key 'kappa'"),
                             std::domain_error);
    }
    SUBCASE("unknown key rejected") {
        nlohmann::json bad = good;
        bad["extra"] = 1.0;
        CHECK_THROWS_AS(params_from_json(bad), std::domain_error);
    }
    SUBCASE("mu = 1 rejected") {
        nlohmann::json bad = good;
        bad["mu"] = 1.0;
        CHECK_THROWS_WITH_AS(params_from_json(bad), doctest::Contains("mu"),
                             std::domain_error);
    }
    SUBCASE("round trip") {
        CHECK(params_to_json(p) == good);
    }
}
