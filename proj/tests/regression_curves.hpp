// regression_curves.hpp — the downsampled curve families frozen as committed
// baselines. The generator and the regression test share these definitions so
// both sides always compute the same thing.

#pragma once

#include <string>
#include <vector>

#include "qfn/fock_master.hpp"
#include "qfn/linear_response.hpp"

namespace regression {

struct Curve {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline qfn::NetworkParams response_params(double d1, double d2, double mu) {
    qfn::NetworkParams p;
    p.delta_omega_1 = d1;
    p.delta_omega_2 = d2;
    p.coupling_1 = 1e-3;
    p.coupling_2 = 1e-3;
    p.kappa = 1e-3;
    p.mu = mu;
    return p;
}

// 41 evenly spaced samples of the output pulse for a rising-exponential input
inline Curve output_pulse_curve(const std::string& name, double d1, double d2,
                                double mu) {
    using namespace qfn;
    const SampledPulse xi =
        sample(PulseSpec(RisingExponential{1e-3, 0.0}), make_grid(-2e4, 0.0, 4.0));
    OutputPulseOptions opts;
    opts.extension_cap_factor = 300.0;
    const SampledPulse eta =
        output_pulse(build_linear_model(response_params(d1, d2, mu), true), xi, opts);

    Curve curve{name, {"t", "eta_re", "eta_im"}, {}};
    const int n_samples = 41;
    for (int k = 0; k < n_samples; ++k) {
        const int idx =
            static_cast<int>(static_cast<long>(k) * (eta.grid.n_points - 1) /
                             (n_samples - 1));
        curve.rows.push_back(
            {eta.grid.t(idx), eta.values[idx].real(), eta.values[idx].imag()});
    }
    return curve;
}

// 34 samples of the excitation probability under the Gaussian drive
inline Curve excitation_curve(const std::string& name, double d1, double d2,
                              double gamma_2) {
    using namespace qfn;
    NetworkParams p;
    p.delta_omega_1 = d1;
    p.delta_omega_2 = d2;
    p.coupling_1 = 1e-3;
    p.coupling_2 = gamma_2;
    p.kappa = 1.5e-3;
    p.mu = 0.2;
    const PulseSpec spec = GaussianPulse{2.75 * 1.5e-3, 3000.0};
    const SampledPulse pulse = sample(spec, default_grid(spec, 5.0));
    IntegrationOptions opts;
    opts.record_stride = 60;
    const HierarchyTrajectory traj = integrate_hierarchy(
        p, 1, &pulse, InitialState::G1G20, pulse.grid.t_end() + 2e3, 5.0, opts);

    Curve curve{name, {"t", "p_e1"}, {}};
    const int n_samples = 34;
    const int n_records = static_cast<int>(traj.records.size());
    for (int k = 0; k < n_samples; ++k) {
        const int idx =
            static_cast<int>(static_cast<long>(k) * (n_records - 1) / (n_samples - 1));
        curve.rows.push_back({traj.records[idx].t, traj.records[idx].p_e1});
    }
    return curve;
}

inline std::vector<Curve> all_curves() {
    return {
        output_pulse_curve("fig2_resonance", 0.0, 0.0, 0.0),
        output_pulse_curve("fig2_red", 1e-3, 1e-3, 0.0),
        output_pulse_curve("fig2_blue", -1e-3, -1e-3, 0.0),
        output_pulse_curve("fig2_redblue", 1e-3, -1e-3, 0.0),
        output_pulse_curve("fig3_resonance", 0.0, 0.0, 0.6),
        output_pulse_curve("fig3_redblue", 1e-3, -1e-3, 0.6),
        excitation_curve("fig4_gamma2_weak", 0.0, 0.0, 2e-4),
        excitation_curve("fig4_gamma2_equal", 0.0, 0.0, 1e-3),
        excitation_curve("fig5_detuned", 0.0, 2e-3, 1e-3),
        excitation_curve("fig6_red", 1e-3, 1e-3, 1e-3),
        excitation_curve("fig6_redblue", 1e-3, -1e-3, 1e-3),
    };
}

}  // namespace regression
