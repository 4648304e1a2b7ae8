#include "qfn/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qfn/csv.hpp"
#include "qfn/errors.hpp"
#include "qfn/linear_model.hpp"
#include "qfn/matrix_exponential.hpp"

namespace qfn {

TimeGrid make_grid(double t_start, double t_end, double dt_max) {
    if (!(t_end > t_start)) {
        throw std::domain_error("make_grid: t_end must exceed t_start");
    }
    if (!(dt_max > 0.0)) {
        throw std::domain_error("make_grid: dt must be > 0");
    }
    const int intervals = std::max(1, static_cast<int>(std::ceil((t_end - t_start) / dt_max - 1e-12)));
    TimeGrid grid;
    grid.t_start = t_start;
    grid.dt = (t_end - t_start) / intervals;
    grid.n_points = intervals + 1;
    return grid;
}

cplx SampledPulse::value_at(double t) const {
    if (values.empty()) return {0.0, 0.0};
    const double pos = (t - grid.t_start) / grid.dt;
    if (pos < 0.0 || pos > grid.n_points - 1) return {0.0, 0.0};
    const int k = std::min(static_cast<int>(pos), grid.n_points - 2);
    const double frac = pos - k;
    return values[k] * (1.0 - frac) + values[k + 1] * frac;
}

cplx inverting_component(double kappa_tilde, double coupling, double pooled,
                         double t_terminal, double r) {
    if (!(kappa_tilde > 0.0)) {
        throw std::domain_error("inverting pulse: kappa_tilde must be > 0");
    }
    const double u = t_terminal - r;
    if (u < 0.0 || coupling == 0.0) return {0.0, 0.0};

    const double disc = kappa_tilde * kappa_tilde - 16.0 * pooled * pooled;
    const double sqrt_kt = std::sqrt(kappa_tilde);
    if (std::abs(disc) < 1e-12 * kappa_tilde * kappa_tilde) {
        // confluent limit of (e^{l- u} - e^{l+ u}) / chi as chi -> 0
        return -kImag * coupling * sqrt_kt * u * std::exp(-kappa_tilde * u / 4.0);
    }
    const cplx chi = std::sqrt(cplx{disc, 0.0});
    const cplx lam_minus = (-kappa_tilde - chi) / 4.0;
    const cplx lam_plus = (-kappa_tilde + chi) / 4.0;
    return 2.0 * kImag * coupling * sqrt_kt / chi *
           (std::exp(lam_minus * u) - std::exp(lam_plus * u));
}

cplx inverting_pulse(double kappa_tilde, double coupling, double t_terminal, double r) {
    return inverting_component(kappa_tilde, coupling, coupling, t_terminal, r);
}

namespace {

double pooled_coupling(const SuperpositionPulse& sp) {
    return std::hypot(sp.first.coupling, sp.second.coupling);
}

void check_superposition(const SuperpositionPulse& sp) {
    if (sp.first.kappa_tilde != sp.second.kappa_tilde ||
        sp.first.t_terminal != sp.second.t_terminal) {
        throw std::domain_error(
            "superposition components must share kappa_tilde and t_terminal");
    }
}

}  // namespace

cplx evaluate(const PulseSpec& spec, double t) {
    return std::visit(
        [t](const auto& s) -> cplx {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RisingExponential>) {
                if (t > 0.0) return {0.0, 0.0};
                return std::sqrt(s.gamma) *
                       std::exp((s.gamma / 2.0 + kImag * s.omega_p) * t);
            } else if constexpr (std::is_same_v<T, GaussianPulse>) {
                const double om_sq = s.bandwidth * s.bandwidth;
                const double amp = std::pow(om_sq / (2.0 * std::numbers::pi), 0.25);
                const double dt = t - s.t_peak;
                return amp * std::exp(-om_sq * dt * dt / 4.0);
            } else if constexpr (std::is_same_v<T, InvertingPulse>) {
                return inverting_pulse(s.kappa_tilde, s.coupling, s.t_terminal, t);
            } else if constexpr (std::is_same_v<T, SuperpositionPulse>) {
                check_superposition(s);
                const double pooled = pooled_coupling(s);
                return s.coeff1 * inverting_component(s.first.kappa_tilde,
                                                      s.first.coupling, pooled,
                                                      s.first.t_terminal, t) +
                       s.coeff2 * inverting_component(s.second.kappa_tilde,
                                                      s.second.coupling, pooled,
                                                      s.second.t_terminal, t);
            } else {
                return s.value_at(t);
            }
        },
        spec);
}

Vec3 nu_functions(const NetworkParams& params, double t_terminal, double r) {
    if (r > t_terminal) return Vec3::Zero();
    const LinearModel model = build_linear_model(params, true);
    const Mat3 e = matrix_exponential(Mat3(model.a.adjoint()), t_terminal - r);
    return (model.b.transpose() * e).transpose();
}

namespace {

// Slowest decay rate (in t_terminal - r) of the inverting envelope.
double inverting_slow_rate(double kappa_tilde, double pooled) {
    const double disc = kappa_tilde * kappa_tilde - 16.0 * pooled * pooled;
    if (disc <= 0.0) return kappa_tilde / 4.0;  // oscillatory branch
    return (kappa_tilde - std::sqrt(disc)) / 4.0;
}

TimeGrid inverting_grid(double kappa_tilde, double pooled, double t_terminal,
                        double coupling_scale, std::optional<double> dt_override) {
    const double rate = inverting_slow_rate(kappa_tilde, pooled);
    // 40/kt covers the fast branch; 25/rate bounds the slow tail below 1e-10
    // of the captured norm^2 even for weak coupling.
    const double support = std::max(40.0 / kappa_tilde, 25.0 / rate);
    double dt = (1.0 / 50.0) * std::min(1.0 / kappa_tilde, 1.0 / coupling_scale);
    if (dt_override) dt = *dt_override;
    return make_grid(t_terminal - support, t_terminal, dt);
}

}  // namespace

TimeGrid default_grid(const PulseSpec& spec, std::optional<double> dt_override) {
    return std::visit(
        [&](const auto& s) -> TimeGrid {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RisingExponential>) {
                if (!(s.gamma > 0.0)) throw std::domain_error("gamma must be > 0");
                double dt = (1.0 / 50.0) / s.gamma;
                if (s.omega_p != 0.0) {
                    dt = std::min(dt, (1.0 / 50.0) / std::abs(s.omega_p));
                }
                if (dt_override) dt = *dt_override;
                return make_grid(-20.0 / s.gamma, 0.0, dt);
            } else if constexpr (std::is_same_v<T, GaussianPulse>) {
                if (!(s.bandwidth > 0.0)) {
                    throw std::domain_error("bandwidth must be > 0");
                }
                double dt = (1.0 / 50.0) / s.bandwidth;
                if (dt_override) dt = *dt_override;
                return make_grid(s.t_peak - 12.0 / s.bandwidth,
                                 s.t_peak + 12.0 / s.bandwidth, dt);
            } else if constexpr (std::is_same_v<T, InvertingPulse>) {
                return inverting_grid(s.kappa_tilde, s.coupling, s.t_terminal,
                                      std::max(s.coupling, 1e-30), dt_override);
            } else if constexpr (std::is_same_v<T, SuperpositionPulse>) {
                check_superposition(s);
                const double pooled = pooled_coupling(s);
                return inverting_grid(s.first.kappa_tilde, pooled, s.first.t_terminal,
                                      std::max(pooled, 1e-30), dt_override);
            } else {
                return s.grid;
            }
        },
        spec);
}

double pulse_norm_sq(const SampledPulse& pulse) {
    const auto& v = pulse.values;
    if (v.size() < 2) return 0.0;
    double acc = 0.5 * (std::norm(v.front()) + std::norm(v.back()));
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        acc += std::norm(v[k]);
    }
    return acc * pulse.grid.dt;
}

double pulse_norm(const SampledPulse& pulse) {
    return std::sqrt(pulse_norm_sq(pulse));
}

SampledPulse sample(const PulseSpec& spec, const TimeGrid& grid) {
    if (grid.n_points < 2) {
        throw std::domain_error("sample: grid needs at least 2 points");
    }
    SampledPulse out;
    out.grid = grid;
    out.values.resize(grid.n_points);
    for (int k = 0; k < grid.n_points; ++k) {
        out.values[k] = evaluate(spec, grid.t(k));
    }
    out.captured_norm_sq = pulse_norm_sq(out);
    if (out.captured_norm_sq < 0.9999) {
        throw SupportTruncated(
            "sample: grid captures norm^2 = " + std::to_string(out.captured_norm_sq) +
                " < 0.9999; widen the grid",
            out.captured_norm_sq);
    }
    return out;
}

double superposition_constraint_dev(cplx coeff1, cplx coeff2, double coupling1,
                                    double coupling2) {
    const double target = coupling1 * coupling1 + coupling2 * coupling2;
    if (target == 0.0) {
        throw std::domain_error("superposition: at least one coupling must be nonzero");
    }
    return std::abs(std::norm(coeff1 * coupling1 + coeff2 * coupling2) - target) / target;
}

SampledPulse superpose(cplx coeff1, cplx coeff2, double coupling1, double coupling2,
                       const SampledPulse& p1, const SampledPulse& p2) {
    if (!(p1.grid == p2.grid)) {
        throw std::domain_error("superpose: pulses must share the same grid");
    }
    if (superposition_constraint_dev(coeff1, coeff2, coupling1, coupling2) > 1e-9) {
        throw NormConstraintViolated(
            "superpose: |c1 G1 + c2 G2|^2 != G1^2 + G2^2");
    }
    SampledPulse out;
    out.grid = p1.grid;
    out.values.resize(p1.values.size());
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] = coeff1 * p1.values[k] + coeff2 * p2.values[k];
    }
    out.captured_norm_sq = pulse_norm_sq(out);
    return out;
}

namespace {

cplx json_to_cplx(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) {
        return {v.at(0).get<double>(), v.at(1).get<double>()};
    }
    throw std::domain_error("pulse spec: '" + key + "' must be a number or [re, im]");
}

double resolve_kappa_tilde(const nlohmann::json& j,
                           std::optional<double> context) {
    if (j.contains("kappa_tilde")) return j.at("kappa_tilde").get<double>();
    if (context) return *context;
    throw std::domain_error(
        "pulse spec: 'kappa_tilde' missing and no network context available");
}

}  // namespace

PulseSpec parse_pulse_spec(const nlohmann::json& j,
                           std::optional<double> kappa_tilde_context) {
    if (!j.is_object() || !j.contains("type")) {
        throw std::domain_error("pulse spec must be an object with a 'type' tag");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "rising_exponential") {
        RisingExponential s;
        s.gamma = j.at("gamma").get<double>();
        s.omega_p = j.value("omega_p", 0.0);
        if (!(s.gamma > 0.0)) throw std::domain_error("pulse spec: gamma must be > 0");
        return s;
    }
    if (type == "gaussian") {
        GaussianPulse s;
        s.bandwidth = j.at("bandwidth").get<double>();
        s.t_peak = j.at("t_peak").get<double>();
        if (!(s.bandwidth > 0.0)) {
            throw std::domain_error("pulse spec: bandwidth must be > 0");
        }
        return s;
    }
    if (type == "inverting") {
        InvertingPulse s;
        s.kappa_tilde = resolve_kappa_tilde(j, kappa_tilde_context);
        s.coupling = j.at("coupling").get<double>();
        s.t_terminal = j.at("t_terminal").get<double>();
        if (!(s.coupling > 0.0)) {
            throw std::domain_error("pulse spec: coupling must be > 0");
        }
        return s;
    }
    if (type == "superposition") {
        SuperpositionPulse s;
        const double kt = resolve_kappa_tilde(j, kappa_tilde_context);
        const double t_terminal = j.at("t_terminal").get<double>();
        s.coeff1 = json_to_cplx(j, "coeff1");
        s.coeff2 = json_to_cplx(j, "coeff2");
        s.first = InvertingPulse{kt, j.at("coupling_1").get<double>(), t_terminal};
        s.second = InvertingPulse{kt, j.at("coupling_2").get<double>(), t_terminal};
        if (superposition_constraint_dev(s.coeff1, s.coeff2, s.first.coupling,
                                         s.second.coupling) > 1e-9) {
            throw NormConstraintViolated(
                "pulse spec: superposition coefficients violate the norm constraint");
        }
        return s;
    }
    throw std::domain_error("pulse spec: unknown type '" + type + "'");
}

nlohmann::json pulse_spec_to_json(const PulseSpec& spec) {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RisingExponential>) {
                return {{"type", "rising_exponential"},
                        {"gamma", s.gamma},
                        {"omega_p", s.omega_p}};
            } else if constexpr (std::is_same_v<T, GaussianPulse>) {
                return {{"type", "gaussian"},
                        {"bandwidth", s.bandwidth},
                        {"t_peak", s.t_peak}};
            } else if constexpr (std::is_same_v<T, InvertingPulse>) {
                return {{"type", "inverting"},
                        {"kappa_tilde", s.kappa_tilde},
                        {"coupling", s.coupling},
                        {"t_terminal", s.t_terminal}};
            } else if constexpr (std::is_same_v<T, SuperpositionPulse>) {
                return {{"type", "superposition"},
                        {"kappa_tilde", s.first.kappa_tilde},
                        {"coeff1", {s.coeff1.real(), s.coeff1.imag()}},
                        {"coeff2", {s.coeff2.real(), s.coeff2.imag()}},
                        {"coupling_1", s.first.coupling},
                        {"coupling_2", s.second.coupling},
                        {"t_terminal", s.first.t_terminal}};
            } else {
                return {{"type", "sampled"},
                        {"t_start", s.grid.t_start},
                        {"dt", s.grid.dt},
                        {"n_points", s.grid.n_points}};
            }
        },
        spec);
}

void write_pulse_csv(const SampledPulse& pulse, const std::string& path) {
    CsvWriter csv(path, {"t", "re", "im"});
    for (int k = 0; k < pulse.grid.n_points; ++k) {
        csv.row({pulse.grid.t(k), pulse.values[k].real(), pulse.values[k].imag()});
    }
}

}  // namespace qfn
