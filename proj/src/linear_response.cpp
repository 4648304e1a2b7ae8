#include "qfn/linear_response.hpp"

#include <algorithm>
#include <cmath>

#include "qfn/errors.hpp"
#include "qfn/matrix_exponential.hpp"
#include "qfn/stability.hpp"

namespace qfn {

cplx ImpulseResponse::smooth(double t) const {
    if (t < 0.0) return {0.0, 0.0};
    return (model.c * matrix_exponential(model.a, t) * model.b).value();
}

ImpulseResponse impulse_response(const LinearModel& model) {
    return ImpulseResponse{cplx{1.0, 0.0}, model};
}

cplx impulse_smooth_resonant(double kappa_eff, double coupling_sq_sum, double t) {
    if (t < 0.0) return {0.0, 0.0};
    const cplx chi =
        std::sqrt(cplx{kappa_eff * kappa_eff - 16.0 * coupling_sq_sum, 0.0});
    const double kt = kappa_eff;
    if (std::abs(chi) < 1e-14 * kt) {
        // cosh -> 1, (kt/chi) sinh -> kt t / 4
        return -kt * (1.0 - kt * t / 4.0) * std::exp(-kt * t / 4.0);
    }
    return -kt * (std::cosh(chi * t / 4.0) - (kt / chi) * std::sinh(chi * t / 4.0)) *
           std::exp(-kt * t / 4.0);
}

cplx transfer_at(const LinearModel& model, cplx s) {
    const cplx i = kImag;
    const double g1 = model.params.coupling_1;
    const double g2 = model.params.coupling_2;
    const double kt = model.kappa_eff;
    const cplx f1 = s - i * model.params.delta_omega_1;
    const cplx f2 = s - i * model.params.delta_omega_2;
    const cplx dr = 2.0 * i * model.params.delta_omega_r;
    const cplx cavity_num = 2.0 * s - kt + dr;
    const cplx cavity_den = 2.0 * s + kt + dr;

    // A decoupled qubit contributes a common factor (s - i delta_k) to both
    // rows of the rational form, as does the marginal mode at equal
    // detunings; cancel those before evaluating so removable 0/0 points never
    // reach the division. What remains has only true poles.
    cplx num, den;
    double den_scale;
    const bool equal_detunings =
        std::abs(model.params.delta_omega_1 - model.params.delta_omega_2) < kTolFreq;
    if (g1 == 0.0 && g2 == 0.0) {
        num = cavity_num;
        den = cavity_den;
        den_scale = std::abs(cavity_den);
    } else if (g1 == 0.0) {
        num = 2.0 * g2 * g2 + f2 * cavity_num;
        den = 2.0 * g2 * g2 + f2 * cavity_den;
        den_scale = 2.0 * g2 * g2 + std::abs(f2) * std::abs(cavity_den);
    } else if (g2 == 0.0) {
        num = 2.0 * g1 * g1 + f1 * cavity_num;
        den = 2.0 * g1 * g1 + f1 * cavity_den;
        den_scale = 2.0 * g1 * g1 + std::abs(f1) * std::abs(cavity_den);
    } else if (equal_detunings) {
        num = 2.0 * (g1 * g1 + g2 * g2) + f1 * cavity_num;
        den = 2.0 * (g1 * g1 + g2 * g2) + f1 * cavity_den;
        den_scale = 2.0 * (g1 * g1 + g2 * g2) + std::abs(f1) * std::abs(cavity_den);
    } else {
        num = 2.0 * g1 * g1 * f2 + 2.0 * g2 * g2 * f1 + f1 * f2 * cavity_num;
        den = 2.0 * g1 * g1 * f2 + 2.0 * g2 * g2 * f1 + f1 * f2 * cavity_den;
        den_scale = 2.0 * g1 * g1 * std::abs(f2) + 2.0 * g2 * g2 * std::abs(f1) +
                    std::abs(f1) * std::abs(f2) * std::abs(cavity_den);
    }
    if (std::abs(den) < 1e-12 * den_scale) {
        throw PoleProximity("transfer_at: s within tolerance of a transfer-function pole");
    }
    return num / den;
}

cplx transfer_resolvent(const LinearModel& model, cplx s) {
    Mat3 shifted = -model.a;
    shifted += s * Mat3::Identity();
    return model.d + (model.c * shifted.fullPivLu().solve(model.b)).value();
}

FrequencyResponse frequency_response(const LinearModel& model,
                                     const std::vector<double>& omega_grid) {
    FrequencyResponse response;
    response.omega_grid = omega_grid;
    response.values.reserve(omega_grid.size());
    for (double omega : omega_grid) {
        response.values.push_back(transfer_at(model, kImag * omega));
    }
    return response;
}

namespace {

// The marginal mode must be both unobservable (C v1 = 0) and uncontrollable
// (w1 B = 0) for the steady-state output to exist; holds structurally for
// this model family, checked at runtime before convolving.
void check_marginal_mode(const LinearModel& model) {
    if (std::abs(model.params.delta_omega_1 - model.params.delta_omega_2) >= kTolFreq) {
        return;
    }
    const cplx marginal = kImag * model.params.delta_omega_1;
    const Vec3 v_right = eigenvector_for(model.a, marginal);
    const Vec3 v_left = eigenvector_for(Mat3(model.a.adjoint()), std::conj(marginal));
    const double tol = 1e-8;
    const double cv = std::abs((model.c * v_right).value());
    const double wb = std::abs((v_left.adjoint() * model.b).value());
    if (cv > tol * model.c.norm() || wb > tol * model.b.norm()) {
        throw SimulationError(
            "output_pulse: marginal mode is visible in the input-output path");
    }
}

}  // namespace

SampledPulse output_pulse(const LinearModel& model, const SampledPulse& input,
                          const OutputPulseOptions& options) {
    check_marginal_mode(model);

    const TimeGrid& grid = input.grid;
    const double dt = grid.dt;
    const Mat3 step = matrix_exponential(model.a, dt);

    SampledPulse out;
    out.grid.t_start = grid.t_start;
    out.grid.dt = dt;

    std::vector<cplx> values;
    values.reserve(2 * grid.n_points);

    // Trapezoidal running convolution: state holds sum_{j<k} e^{A(t_k-t_j)} B
    // xi_j dt with half weight on j=0; eta_k adds the half-weighted j=k term.
    Vec3 state = 0.5 * dt * model.b * input.values[0];
    values.push_back(input.values[0]);
    double peak = std::abs(values[0]);

    for (int k = 1; k < grid.n_points; ++k) {
        const Vec3 propagated = step * state;
        const cplx xi_k = input.values[k];
        const cplx eta_k =
            xi_k + (model.c * (propagated + 0.5 * dt * model.b * xi_k)).value();
        values.push_back(eta_k);
        peak = std::max(peak, std::abs(eta_k));
        state = propagated + dt * model.b * xi_k;
    }

    // Extend past the input until the state's contribution decays. The bound
    // ||c|| ||state|| covers future samples too, so an oscillatory output
    // passing through zero cannot stop the extension early.
    const long max_extra =
        static_cast<long>(options.extension_cap_factor * grid.span() / dt);
    const double c_norm = model.c.norm();
    bool decayed = false;
    for (long k = 0; k < max_extra; ++k) {
        state = step * state;
        const cplx eta_k = (model.c * state).value();
        values.push_back(eta_k);
        peak = std::max(peak, std::abs(eta_k));
        if (c_norm * state.norm() < options.decay_threshold * peak) {
            decayed = true;
            break;
        }
    }
    if (!decayed && max_extra > 0) {
        throw SupportTruncated(
            "output_pulse: extension cap reached before the state decayed", 0.0);
    }

    out.values = std::move(values);
    out.grid.n_points = static_cast<int>(out.values.size());
    out.captured_norm_sq = pulse_norm_sq(out);
    return out;
}

double decay_time(const SampledPulse& pulse, double fraction) {
    double peak = 0.0;
    int peak_idx = 0;
    for (int k = 0; k < pulse.grid.n_points; ++k) {
        const double mag = std::abs(pulse.values[k]);
        if (mag > peak) {
            peak = mag;
            peak_idx = k;
        }
    }
    const double threshold = fraction * peak;
    int last_above = peak_idx;
    for (int k = peak_idx; k < pulse.grid.n_points; ++k) {
        if (std::abs(pulse.values[k]) >= threshold) last_above = k;
    }
    return (last_above - peak_idx) * pulse.grid.dt;
}

}  // namespace qfn
