#include "qfn/fock_master.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "qfn/errors.hpp"

namespace qfn {

namespace {

MatX kron3(const MatX& a, const MatX& b, const MatX& c) {
    return Eigen::kroneckerProduct(Eigen::kroneckerProduct(a, b).eval(), c);
}

}  // namespace

OperatorSet build_operators(const NetworkParams& params, int n_cav) {
    validate(params);
    if (n_cav < 1) {
        throw std::domain_error("build_operators: n_cav must be >= 1");
    }
    const int nc1 = n_cav + 1;

    MatX id2 = MatX::Identity(2, 2);
    MatX idc = MatX::Identity(nc1, nc1);
    MatX sz = MatX::Zero(2, 2);
    sz(0, 0) = 1.0;   // |g><g|
    sz(1, 1) = -1.0;  // -|e><e|
    MatX sm = MatX::Zero(2, 2);
    sm(0, 1) = 1.0;  // |g><e|
    MatX a = MatX::Zero(nc1, nc1);
    for (int n = 1; n < nc1; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }

    OperatorSet ops;
    ops.n_cav = n_cav;
    ops.dim = 4 * nc1;
    ops.kappa_tilde = effective_kappa(params);
    ops.sigma_z_1 = kron3(sz, id2, idc);
    ops.sigma_z_2 = kron3(id2, sz, idc);
    ops.sigma_minus_1 = kron3(sm, id2, idc);
    ops.sigma_minus_2 = kron3(id2, sm, idc);
    ops.a_annihilate = kron3(id2, id2, a);

    const MatX a_dag = ops.a_annihilate.adjoint();
    ops.h = params.delta_omega_r * (a_dag * ops.a_annihilate) +
            0.5 * params.delta_omega_1 * ops.sigma_z_1 +
            0.5 * params.delta_omega_2 * ops.sigma_z_2 +
            params.coupling_1 *
                (ops.sigma_minus_1 * a_dag + ops.sigma_minus_1.adjoint() * ops.a_annihilate) +
            params.coupling_2 *
                (ops.sigma_minus_2 * a_dag + ops.sigma_minus_2.adjoint() * ops.a_annihilate);
    ops.l = std::sqrt(ops.kappa_tilde) * ops.a_annihilate;
    return ops;
}

int basis_index(const OperatorSet& ops, int q1, int q2, int n) {
    return (q1 * 2 + q2) * (ops.n_cav + 1) + n;
}

InitialState parse_initial_state(const std::string& label) {
    if (label == "g1g20") return InitialState::G1G20;
    if (label == "e1g20") return InitialState::E1G20;
    if (label == "g1e20") return InitialState::G1E20;
    if (label == "g1g21") return InitialState::G1G21;
    throw std::domain_error("unknown initial state label '" + label +
                            "' (expected g1g20, e1g20, g1e20, or g1g21)");
}

std::string to_string(InitialState state) {
    switch (state) {
        case InitialState::G1G20: return "g1g20";
        case InitialState::E1G20: return "e1g20";
        case InitialState::G1E20: return "g1e20";
        case InitialState::G1G21: return "g1g21";
    }
    return "?";
}

HierarchyState initial_hierarchy_state(const OperatorSet& ops, InitialState label) {
    int idx = 0;
    switch (label) {
        case InitialState::G1G20: idx = basis_index(ops, 0, 0, 0); break;
        case InitialState::E1G20: idx = basis_index(ops, 1, 0, 0); break;
        case InitialState::G1E20: idx = basis_index(ops, 0, 1, 0); break;
        case InitialState::G1G21: idx = basis_index(ops, 0, 0, 1); break;
    }
    HierarchyState state;
    state.rho11 = MatX::Zero(ops.dim, ops.dim);
    state.rho11(idx, idx) = 1.0;
    state.rho00 = state.rho11;
    state.rho10 = MatX::Zero(ops.dim, ops.dim);
    state.rho01 = MatX::Zero(ops.dim, ops.dim);
    state.t = 0.0;
    return state;
}

namespace {

struct LiouvillianWorkspace {
    const MatX& h;
    const MatX& l;
    MatX l_dag;
    MatX ldl;  // L^dag L

    explicit LiouvillianWorkspace(const OperatorSet& ops)
        : h(ops.h), l(ops.l), l_dag(ops.l.adjoint()), ldl(l_dag * ops.l) {}

    MatX lstar(const MatX& rho) const {
        return -kImag * (h * rho - rho * h) + l * rho * l_dag -
               0.5 * (ldl * rho + rho * ldl);
    }
};

HierarchyState rhs_with(const LiouvillianWorkspace& ws, const HierarchyState& s,
                        cplx xi) {
    HierarchyState d;
    d.t = 1.0;  // dt/dt; unused downstream
    const cplx xi_c = std::conj(xi);
    d.rho00 = ws.lstar(s.rho00);
    d.rho10 = ws.lstar(s.rho10) + xi * (s.rho00 * ws.l_dag - ws.l_dag * s.rho00);
    d.rho01 = ws.lstar(s.rho01) + xi_c * (ws.l * s.rho00 - s.rho00 * ws.l);
    d.rho11 = ws.lstar(s.rho11) + xi * (s.rho01 * ws.l_dag - ws.l_dag * s.rho01) +
              xi_c * (ws.l * s.rho10 - s.rho10 * ws.l);
    return d;
}

HierarchyState axpy(const HierarchyState& s, double a, const HierarchyState& d) {
    HierarchyState out;
    out.rho11 = s.rho11 + a * d.rho11;
    out.rho10 = s.rho10 + a * d.rho10;
    out.rho01 = s.rho01 + a * d.rho01;
    out.rho00 = s.rho00 + a * d.rho00;
    out.t = s.t + a;
    return out;
}

double rhs_max_abs(const HierarchyState& d) {
    return std::max({d.rho11.cwiseAbs().maxCoeff(), d.rho10.cwiseAbs().maxCoeff(),
                     d.rho01.cwiseAbs().maxCoeff(), d.rho00.cwiseAbs().maxCoeff()});
}

HierarchyRecord make_record(const HierarchyState& s, int n_cav) {
    HierarchyRecord rec;
    rec.t = s.t;
    rec.p_e1 = excitation_probability(reduce_to_qubit1(s.rho11, n_cav));
    const Mat4 qubits = reduce_to_qubits(s.rho11, n_cav);
    rec.p_e2 = std::clamp(qubits(1, 1).real() + qubits(3, 3).real(), 0.0, 1.0);
    rec.p_cavity = cavity_occupation(s.rho11, n_cav);
    rec.tr_rho11 = s.rho11.trace().real();
    rec.tr_rho00 = s.rho00.trace().real();
    rec.herm_defect = (s.rho11 - s.rho11.adjoint()).cwiseAbs().maxCoeff();
    rec.cross_defect = (s.rho01 - s.rho10.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<MatX> eig(0.5 * (s.rho11 + s.rho11.adjoint()),
                                            Eigen::EigenvaluesOnly);
    rec.min_eigenvalue = eig.eigenvalues().minCoeff();
    return rec;
}

}  // namespace

HierarchyState hierarchy_rhs(const HierarchyState& state, cplx xi_t,
                             const OperatorSet& ops) {
    return rhs_with(LiouvillianWorkspace(ops), state, xi_t);
}

HierarchyTrajectory integrate_hierarchy(const NetworkParams& params, int n_cav,
                                        const SampledPulse* pulse, InitialState initial,
                                        double t_start, double t_end, double dt,
                                        const IntegrationOptions& options) {
    if (!(dt > 0.0) || !(t_end > t_start)) {
        throw std::domain_error("integrate_hierarchy: need dt > 0 and t_end > t_start");
    }
    const OperatorSet ops = build_operators(params, n_cav);
    const LiouvillianWorkspace ws(ops);

    auto xi_at = [pulse](double t) -> cplx {
        return pulse ? pulse->value_at(t) : cplx{0.0, 0.0};
    };

    HierarchyState state = initial_hierarchy_state(ops, initial);
    state.t = t_start;

    // a quiescent pre-pulse stretch is not a steady state
    const double steady_watch_from = pulse ? pulse->grid.t_end() : t_start;

    const long n_steps = std::lround((t_end - t_start) / dt);
    HierarchyTrajectory traj;
    traj.records.reserve(static_cast<std::size_t>(n_steps / options.record_stride) + 2);

    traj.records.push_back(make_record(state, n_cav));
    if (options.keep_states) traj.states.push_back(state);

    for (long step = 0; step < n_steps; ++step) {
        const double t = t_start + step * dt;
        const HierarchyState k1 = rhs_with(ws, state, xi_at(t));
        const HierarchyState k2 =
            rhs_with(ws, axpy(state, dt / 2.0, k1), xi_at(t + dt / 2.0));
        const HierarchyState k3 =
            rhs_with(ws, axpy(state, dt / 2.0, k2), xi_at(t + dt / 2.0));
        const HierarchyState k4 = rhs_with(ws, axpy(state, dt, k3), xi_at(t + dt));

        state.rho11 += dt / 6.0 * (k1.rho11 + 2.0 * k2.rho11 + 2.0 * k3.rho11 + k4.rho11);
        state.rho10 += dt / 6.0 * (k1.rho10 + 2.0 * k2.rho10 + 2.0 * k3.rho10 + k4.rho10);
        state.rho01 += dt / 6.0 * (k1.rho01 + 2.0 * k2.rho01 + 2.0 * k3.rho01 + k4.rho01);
        state.rho00 += dt / 6.0 * (k1.rho00 + 2.0 * k2.rho00 + 2.0 * k3.rho00 + k4.rho00);
        state.t = t_start + (step + 1) * dt;

        const double drift = std::max(std::abs(state.rho11.trace().real() - 1.0),
                                      std::abs(state.rho00.trace().real() - 1.0));
        if (drift > options.trace_drift_limit) {
            throw StepTooLarge("integrate_hierarchy: trace drift " +
                               std::to_string(drift) + " at t = " +
                               std::to_string(state.t) + "; reduce dt");
        }

        const bool last = (step + 1 == n_steps);
        if ((step + 1) % options.record_stride == 0 || last) {
            traj.records.push_back(make_record(state, n_cav));
            if (options.keep_states) traj.states.push_back(state);
            if (!traj.steady_state_reached && state.t >= steady_watch_from &&
                rhs_max_abs(k1) < 1e-10) {
                traj.steady_state_reached = true;
                traj.steady_time = state.t;
            }
        }
    }
    traj.final_state = std::move(state);
    return traj;
}

HierarchyTrajectory integrate_hierarchy(const NetworkParams& params, int n_cav,
                                        const SampledPulse* pulse, InitialState initial,
                                        double t_end, double dt,
                                        const IntegrationOptions& options) {
    const double t_start = pulse ? pulse->grid.t_start : 0.0;
    return integrate_hierarchy(params, n_cav, pulse, initial, t_start, t_end, dt,
                               options);
}

Mat2 reduce_to_qubit1(const MatX& rho, int n_cav) {
    const int nc1 = n_cav + 1;
    Mat2 out = Mat2::Zero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            cplx acc{0.0, 0.0};
            for (int q2 = 0; q2 < 2; ++q2) {
                for (int n = 0; n < nc1; ++n) {
                    acc += rho((a * 2 + q2) * nc1 + n, (b * 2 + q2) * nc1 + n);
                }
            }
            out(a, b) = acc;
        }
    }
    return out;
}

Mat4 reduce_to_qubits(const MatX& rho, int n_cav) {
    const int nc1 = n_cav + 1;
    Mat4 out = Mat4::Zero();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            cplx acc{0.0, 0.0};
            for (int n = 0; n < nc1; ++n) {
                acc += rho(a * nc1 + n, b * nc1 + n);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

double cavity_occupation(const MatX& rho, int n_cav) {
    const int nc1 = n_cav + 1;
    double acc = 0.0;
    for (int q = 0; q < 4; ++q) {
        for (int n = 1; n < nc1; ++n) {
            acc += n * rho(q * nc1 + n, q * nc1 + n).real();
        }
    }
    return acc;
}

double excitation_probability(const Mat2& rho_qubit) {
    return std::clamp(rho_qubit(1, 1).real(), 0.0, 1.0);
}

}  // namespace qfn
