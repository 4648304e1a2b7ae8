#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "qfn/errors.hpp"
#include "qfn/fock_master.hpp"

using namespace qfn;

namespace {

NetworkParams fig7_params() {
    NetworkParams p;
    p.coupling_1 = 1e-3;
    p.coupling_2 = 1e-3;
    p.kappa = 1.5e-3;
    p.mu = 0.2;
    return p;
}

}  // namespace

TEST_CASE("operator construction") {
    SUBCASE("H vanishes at mutual resonance with no couplings") {
        NetworkParams p;
        p.kappa = 1e-3;
        const OperatorSet ops = build_operators(p, 2);
        CHECK(ops.h.cwiseAbs().maxCoeff() == 0.0);
        CHECK(ops.dim == 12);
    }
    SUBCASE("single RWA matrix element") {
        oracles::ParamSampler sampler(64u);
        for (int trial = 0; trial < 10; ++trial) {
            const NetworkParams p = sampler.draw(false);
            const OperatorSet ops = build_operators(p, 2);
            const int e1g20 = basis_index(ops, 1, 0, 0);
            const int g1g21 = basis_index(ops, 0, 0, 1);
            CHECK(std::abs(ops.h(e1g20, g1g21) - cplx{p.coupling_1, 0.0}) < 1e-15);
            const int g1e20 = basis_index(ops, 0, 1, 0);
            CHECK(std::abs(ops.h(g1e20, g1g21) - cplx{p.coupling_2, 0.0}) < 1e-15);
            CHECK((ops.h - ops.h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
    SUBCASE("n_cav = 1 spectrum at mutual resonance") {
        const OperatorSet ops = build_operators(fig7_params(), 1);
        Eigen::SelfAdjointEigenSolver<MatX> eig(ops.h, Eigen::EigenvaluesOnly);
        const double gc = std::sqrt(2.0) * 1e-3;
        std::vector<double> expected = {-gc, -gc, 0.0, 0.0, 0.0, 0.0, gc, gc};
        REQUIRE(eig.eigenvalues().size() == 8);
        for (int k = 0; k < 8; ++k) {
            CHECK(eig.eigenvalues()(k) == doctest::Approx(expected[k]).epsilon(1e-10));
        }
    }
    SUBCASE("truncated ladder commutator") {
        const OperatorSet ops = build_operators(fig7_params(), 2);
        const MatX a = ops.a_annihilate;
        const MatX comm = a * a.adjoint() - a.adjoint() * a;
        // [a, a^dag] = I - (n_cav + 1) |n_cav><n_cav| on each qubit sector
        for (int q = 0; q < 4; ++q) {
            for (int n = 0; n <= 2; ++n) {
                const int idx = q * 3 + n;
                const double expected = n < 2 ? 1.0 : 1.0 - 3.0;
                CHECK(comm(idx, idx).real() == doctest::Approx(expected).epsilon(1e-14));
            }
        }
    }
    SUBCASE("sigma_z convention: ground has +1") {
        const OperatorSet ops = build_operators(fig7_params(), 1);
        const int g = basis_index(ops, 0, 0, 0);
        const int e = basis_index(ops, 1, 0, 0);
        CHECK(ops.sigma_z_1(g, g) == cplx{1.0, 0.0});
        CHECK(ops.sigma_z_1(e, e) == cplx{-1.0, 0.0});
    }
}

TEST_CASE("hierarchy right-hand side") {
    const OperatorSet ops = build_operators(fig7_params(), 1);

    SUBCASE("ground state is stationary under vacuum") {
        const HierarchyState ground = initial_hierarchy_state(ops, InitialState::G1G20);
        const HierarchyState d = hierarchy_rhs(ground, cplx{0.0, 0.0}, ops);
        CHECK(d.rho11.cwiseAbs().maxCoeff() < 1e-18);
        CHECK(d.rho00.cwiseAbs().maxCoeff() < 1e-18);
    }
    SUBCASE("vacuum input decouples the hierarchy") {
        const HierarchyState s = initial_hierarchy_state(ops, InitialState::E1G20);
        const HierarchyState d = hierarchy_rhs(s, cplx{0.0, 0.0}, ops);
        CHECK((d.rho11 - d.rho00).cwiseAbs().maxCoeff() < 1e-18);
        CHECK(d.rho10.cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.rho01.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("every line is traceless") {
        HierarchyState s = initial_hierarchy_state(ops, InitialState::G1G20);
        s.rho10 = 0.1 * ops.sigma_minus_1 + 0.05 * ops.a_annihilate;
        s.rho01 = s.rho10.adjoint();
        const HierarchyState d = hierarchy_rhs(s, cplx{0.3, -0.2}, ops);
        CHECK(std::abs(d.rho11.trace()) < 1e-15);
        CHECK(std::abs(d.rho10.trace()) < 1e-15);
        CHECK(std::abs(d.rho01.trace()) < 1e-15);
        CHECK(std::abs(d.rho00.trace()) < 1e-15);
    }
}

TEST_CASE("partial traces and excitation probability") {
    const OperatorSet ops = build_operators(fig7_params(), 1);

    SUBCASE("pure |e1 g2 0> reduces to |e><e|") {
        const HierarchyState s = initial_hierarchy_state(ops, InitialState::E1G20);
        const Mat2 q1 = reduce_to_qubit1(s.rho11, 1);
        CHECK(std::abs(q1(1, 1) - cplx{1.0, 0.0}) < 1e-15);
        CHECK(std::abs(q1(0, 0)) < 1e-15);
        CHECK(excitation_probability(q1) == doctest::Approx(1.0));
    }
    SUBCASE("maximally mixed reduces to I/2") {
        const MatX mixed = MatX::Identity(8, 8) / 8.0;
        const Mat2 q1 = reduce_to_qubit1(mixed, 1);
        CHECK(std::abs(q1(0, 0) - cplx{0.5, 0.0}) < 1e-15);
        CHECK(std::abs(q1(1, 1) - cplx{0.5, 0.0}) < 1e-15);
        CHECK(std::abs(q1(0, 1)) < 1e-15);
    }
    SUBCASE("clamping") {
        Mat2 rho = Mat2::Zero();
        rho(1, 1) = cplx{1.0 + 1e-12, 0.0};
        CHECK(excitation_probability(rho) == 1.0);
        rho(1, 1) = cplx{-1e-12, 0.0};
        CHECK(excitation_probability(rho) == 0.0);
    }
    SUBCASE("two-qubit reduction keeps the {g1g2, g1e2, e1g2, e1e2} order") {
        const HierarchyState s = initial_hierarchy_state(ops, InitialState::G1E20);
        const Mat4 qq = reduce_to_qubits(s.rho11, 1);
        CHECK(std::abs(qq(1, 1) - cplx{1.0, 0.0}) < 1e-15);
        CHECK(std::abs(qq.trace() - cplx{1.0, 0.0}) < 1e-15);
    }
}

TEST_CASE("vacuum relaxation reaches the fig 7 plateau") {
    IntegrationOptions opts;
    opts.record_stride = 50;
    const HierarchyTrajectory traj = integrate_hierarchy(
        fig7_params(), 1, nullptr, InitialState::E1G20, 0.0, 5e4, 10.0, opts);
    CHECK(std::abs(traj.records.back().p_e1 - 0.25) < 1e-2);
    const HierarchyTrajectory traj2 = integrate_hierarchy(
        fig7_params(), 1, nullptr, InitialState::G1E20, 0.0, 5e4, 10.0, opts);
    CHECK(std::abs(traj2.records.back().p_e1 - 0.25) < 1e-2);
}

TEST_CASE("red+blue detunings drain the excitation") {
    NetworkParams p = fig7_params();
    p.delta_omega_1 = 1e-3;
    p.delta_omega_2 = -1e-3;
    IntegrationOptions opts;
    opts.record_stride = 50;
    const HierarchyTrajectory traj =
        integrate_hierarchy(p, 1, nullptr, InitialState::E1G20, 0.0, 2e5, 10.0, opts);
    CHECK(traj.records.back().p_e1 < 1e-2);
}

TEST_CASE("gaussian drive: weaker second coupling raises the peak (fig 4)") {
    const double kappa = 1.5e-3;
    const PulseSpec spec = GaussianPulse{2.75 * kappa, 3000.0};
    const SampledPulse pulse = sample(spec, default_grid(spec));

    auto peak_p_e1 = [&](double gamma_2) {
        NetworkParams p = fig7_params();
        p.coupling_2 = gamma_2;
        IntegrationOptions opts;
        opts.record_stride = 20;
        const HierarchyTrajectory traj =
            integrate_hierarchy(p, 1, &pulse, InitialState::G1G20,
                                pulse.grid.t_end() + 2e3, 10.0, opts);
        double peak = 0.0;
        for (const auto& rec : traj.records) peak = std::max(peak, rec.p_e1);
        return peak;
    };
    const double with_equal = peak_p_e1(1e-3);
    const double with_weak = peak_p_e1(2e-4);
    CHECK(with_weak > with_equal);
}

TEST_CASE("hierarchy invariants hold along a driven trajectory") {
    const PulseSpec spec = GaussianPulse{2.75 * 1.5e-3, 1500.0};
    const SampledPulse pulse = sample(spec, default_grid(spec));
    IntegrationOptions opts;
    opts.record_stride = 10;
    const HierarchyTrajectory traj =
        integrate_hierarchy(fig7_params(), 2, &pulse, InitialState::G1G20,
                            pulse.grid.t_end(), 5.0, opts);
    for (const auto& rec : traj.records) {
        CHECK(std::abs(rec.tr_rho11 - 1.0) < 1e-6);
        CHECK(std::abs(rec.tr_rho00 - 1.0) < 1e-6);
        CHECK(rec.herm_defect < 1e-10);
        CHECK(rec.cross_defect < 1e-10);
        CHECK(rec.min_eigenvalue > -1e-8);
    }
}

TEST_CASE("truncation exactness for single-excitation scenarios") {
    // a single-photon drive from the ground state never populates two quanta,
    // so n_cav = 1 and n_cav = 2 trajectories agree to roundoff
    const PulseSpec spec = GaussianPulse{2.75 * 1.5e-3, 1500.0};
    const SampledPulse pulse = sample(spec, default_grid(spec));
    IntegrationOptions opts;
    opts.record_stride = 25;
    const HierarchyTrajectory one =
        integrate_hierarchy(fig7_params(), 1, &pulse, InitialState::G1G20,
                            pulse.grid.t_end(), 10.0, opts);
    const HierarchyTrajectory two =
        integrate_hierarchy(fig7_params(), 2, &pulse, InitialState::G1G20,
                            pulse.grid.t_end(), 10.0, opts);
    REQUIRE(one.records.size() == two.records.size());
    for (std::size_t k = 0; k < one.records.size(); ++k) {
        CHECK(std::abs(one.records[k].p_e1 - two.records[k].p_e1) < 1e-10);
        CHECK(std::abs(one.records[k].p_cavity - two.records[k].p_cavity) < 1e-10);
    }

    const HierarchyTrajectory v1 = integrate_hierarchy(
        fig7_params(), 1, nullptr, InitialState::E1G20, 0.0, 2e4, 10.0, opts);
    const HierarchyTrajectory v2 = integrate_hierarchy(
        fig7_params(), 2, nullptr, InitialState::E1G20, 0.0, 2e4, 10.0, opts);
    for (std::size_t k = 0; k < v1.records.size(); ++k) {
        CHECK(std::abs(v1.records[k].p_e1 - v2.records[k].p_e1) < 1e-10);
    }
}

TEST_CASE("oversized steps raise StepTooLarge") {
    CHECK_THROWS_AS((void)integrate_hierarchy(fig7_params(), 1, nullptr,
                                              InitialState::G1G21, 0.0, 4e5, 2000.0),
                    StepTooLarge);
}

TEST_CASE("initial state labels") {
    CHECK(parse_initial_state("g1g20") == InitialState::G1G20);
    CHECK(parse_initial_state("e1g20") == InitialState::E1G20);
    CHECK(parse_initial_state("g1e20") == InitialState::G1E20);
    CHECK(parse_initial_state("g1g21") == InitialState::G1G21);
    CHECK_THROWS_AS((void)parse_initial_state("e1e20"), std::domain_error);
    CHECK(to_string(InitialState::E1G20) == "e1g20");
}
