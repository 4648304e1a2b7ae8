#include "qfn/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "qfn/csv.hpp"
#include "qfn/errors.hpp"
#include "qfn/linear_response.hpp"
#include "qfn/single_excitation.hpp"
#include "qfn/stability.hpp"

namespace qfn {

namespace fs = std::filesystem;

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::PulseResponse: return "pulse_response";
        case ScenarioKind::Stability: return "stability";
        case ScenarioKind::Excitation: return "excitation";
        case ScenarioKind::SteadyStateRun: return "steady_state";
        case ScenarioKind::Invert: return "invert";
    }
    return "?";
}

namespace {

std::optional<ScenarioKind> parse_scenario(const std::string& name) {
    if (name == "pulse_response") return ScenarioKind::PulseResponse;
    if (name == "stability") return ScenarioKind::Stability;
    if (name == "excitation") return ScenarioKind::Excitation;
    if (name == "steady_state") return ScenarioKind::SteadyStateRun;
    if (name == "invert") return ScenarioKind::Invert;
    return {};
}

const std::vector<std::string>& params_keys() {
    static const std::vector<std::string> keys = {
        "delta_omega_1", "delta_omega_2", "delta_omega_r", "gamma_1",
        "gamma_2",       "kappa",         "mu"};
    return keys;
}

bool is_params_key(const std::string& key) {
    const auto& keys = params_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

}  // namespace

ScenarioConfig validate_config(const nlohmann::json& raw) {
    std::vector<std::string> errors;
    ScenarioConfig config;
    config.raw = raw;

    if (!raw.is_object()) {
        throw ConfigError({"config must be a JSON object"});
    }

    if (!raw.contains("scenario") || !raw.at("scenario").is_string()) {
        errors.push_back("scenario: required string field");
    } else {
        const auto kind = parse_scenario(raw.at("scenario").get<std::string>());
        if (!kind) {
            errors.push_back("scenario: unknown value '" +
                             raw.at("scenario").get<std::string>() +
                             "' (expected pulse_response, stability, excitation, "
                             "steady_state, or invert; sweeps go in the 'sweep' block)");
        } else {
            config.scenario = *kind;
        }
    }

    if (!raw.contains("params")) {
        errors.push_back("params: required object with the seven network keys");
    } else {
        try {
            config.params = params_from_json(raw.at("params"));
        } catch (const std::exception& e) {
            errors.push_back(std::string("params: ") + e.what());
        }
    }

    double kappa_tilde_context = 0.0;
    if (errors.empty()) {
        kappa_tilde_context = effective_kappa(config.params);
    }

    if (raw.contains("pulse") && !raw.at("pulse").is_null()) {
        const auto& pj = raw.at("pulse");
        if (pj.is_string()) {
            if (pj.get<std::string>() != "vacuum") {
                errors.push_back("pulse: string form must be \"vacuum\"");
            }
        } else {
            try {
                config.pulse = parse_pulse_spec(
                    pj, kappa_tilde_context > 0.0
                            ? std::optional<double>(kappa_tilde_context)
                            : std::nullopt);
            } catch (const std::exception& e) {
                errors.push_back(std::string("pulse: ") + e.what());
            }
        }
    }

    if (raw.contains("grid")) {
        const auto& gj = raw.at("grid");
        if (!gj.is_object()) {
            errors.push_back("grid: must be an object");
        } else {
            for (const char* key : {"t_start", "t_end", "dt"}) {
                if (gj.contains(key) && !gj.at(key).is_number()) {
                    errors.push_back(std::string("grid.") + key + ": must be a number");
                }
            }
            if (gj.contains("t_start")) config.grid.t_start = gj.at("t_start").get<double>();
            if (gj.contains("t_end")) config.grid.t_end = gj.at("t_end").get<double>();
            if (gj.contains("dt")) {
                config.grid.dt = gj.at("dt").get<double>();
                if (!(*config.grid.dt > 0.0)) errors.push_back("grid.dt: must be > 0");
            }
        }
    }

    if (raw.contains("initial_state")) {
        try {
            config.initial_state =
                parse_initial_state(raw.at("initial_state").get<std::string>());
        } catch (const std::exception& e) {
            errors.push_back(std::string("initial_state: ") + e.what());
        }
    }

    if (raw.contains("t_terminal")) {
        if (!raw.at("t_terminal").is_number()) {
            errors.push_back("t_terminal: must be a number");
        } else {
            config.t_terminal = raw.at("t_terminal").get<double>();
        }
    } else if (config.scenario == ScenarioKind::Invert && errors.empty()) {
        errors.push_back("t_terminal: required for the invert scenario");
    }

    if (raw.contains("post_terminal")) {
        if (!raw.at("post_terminal").is_number() ||
            raw.at("post_terminal").get<double>() < 0.0) {
            errors.push_back("post_terminal: must be a number >= 0");
        } else {
            config.post_terminal = raw.at("post_terminal").get<double>();
        }
    }

    if (raw.contains("n_cav")) {
        if (!raw.at("n_cav").is_number_integer() || raw.at("n_cav").get<int>() < 1) {
            errors.push_back("n_cav: must be an integer >= 1");
        } else {
            config.n_cav = raw.at("n_cav").get<int>();
        }
    }

    if (raw.contains("extension_cap")) {
        if (!raw.at("extension_cap").is_number() ||
            !(raw.at("extension_cap").get<double>() > 0.0)) {
            errors.push_back("extension_cap: must be a number > 0");
        } else {
            config.extension_cap = raw.at("extension_cap").get<double>();
        }
    }

    if (raw.contains("sweep")) {
        const auto& sj = raw.at("sweep");
        SweepSettings sweep;
        if (!sj.is_object() || !sj.contains("key") || !sj.contains("values")) {
            errors.push_back("sweep: must be an object with 'key' and 'values'");
        } else {
            sweep.key = sj.at("key").get<std::string>();
            const bool pulse_key = sweep.key.rfind("pulse.", 0) == 0;
            if (!is_params_key(sweep.key) && !pulse_key && sweep.key != "t_terminal") {
                errors.push_back("sweep.key: must name a params field, a pulse field "
                                 "(pulse.<name>), or t_terminal");
            }
            if (pulse_key && (!raw.contains("pulse") || !raw.at("pulse").is_object())) {
                errors.push_back("sweep.key: '" + sweep.key +
                                 "' needs an object-valued pulse spec to patch");
            }
            if (!sj.at("values").is_array() || sj.at("values").empty()) {
                errors.push_back("sweep.values: must be a non-empty array of numbers");
            } else {
                for (const auto& v : sj.at("values")) {
                    if (!v.is_number()) {
                        errors.push_back("sweep.values: must all be numbers");
                        break;
                    }
                    sweep.values.push_back(v.get<double>());
                }
            }
            config.sweep = sweep;
        }
    }

    if (raw.contains("output_dir")) {
        if (!raw.at("output_dir").is_string()) {
            errors.push_back("output_dir: must be a string");
        } else {
            config.output_dir = raw.at("output_dir").get<std::string>();
        }
    }

    // scenario/pulse coherence
    if (errors.empty()) {
        const bool needs_pulse = config.scenario == ScenarioKind::PulseResponse;
        if (needs_pulse && !config.pulse) {
            errors.push_back("pulse: required for the pulse_response scenario");
        }
        if (config.scenario == ScenarioKind::PulseResponse && config.pulse &&
            std::holds_alternative<SampledPulse>(*config.pulse)) {
            errors.push_back("pulse: sampled pulses are not accepted from JSON configs");
        }
    }

    if (!errors.empty()) {
        throw ConfigError(errors);
    }
    return config;
}

namespace {

double fastest_rate(const NetworkParams& params, const std::optional<PulseSpec>& pulse) {
    double rate = effective_kappa(params);
    rate = std::max({rate, params.coupling_1, params.coupling_2,
                     std::abs(params.delta_omega_1), std::abs(params.delta_omega_2),
                     std::abs(params.delta_omega_r)});
    if (pulse) {
        std::visit(
            [&rate](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, RisingExponential>) {
                    rate = std::max({rate, s.gamma, std::abs(s.omega_p)});
                } else if constexpr (std::is_same_v<T, GaussianPulse>) {
                    rate = std::max(rate, s.bandwidth);
                } else if constexpr (std::is_same_v<T, InvertingPulse>) {
                    rate = std::max({rate, s.kappa_tilde, s.coupling});
                } else if constexpr (std::is_same_v<T, SuperpositionPulse>) {
                    rate = std::max({rate, s.first.kappa_tilde,
                                     std::hypot(s.first.coupling, s.second.coupling)});
                }
            },
            *pulse);
    }
    return rate;
}

double default_dt(const ScenarioConfig& config) {
    if (config.grid.dt) return *config.grid.dt;
    return (1.0 / 50.0) / fastest_rate(config.params, config.pulse);
}

nlohmann::json cplx_json(const cplx& z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << j.dump(2) << '\n';
}

struct ScenarioOutput {
    std::vector<std::string> files;
};

ScenarioOutput run_pulse_response(const ScenarioConfig& config, const fs::path& dir,
                                  const std::string& stem) {
    const LinearModel model = build_linear_model(config.params, true);
    const double dt = default_dt(config);

    TimeGrid grid;
    if (config.grid.t_start && config.grid.t_end) {
        grid = make_grid(*config.grid.t_start, *config.grid.t_end, dt);
    } else {
        grid = default_grid(*config.pulse, dt);
    }
    const SampledPulse input = sample(*config.pulse, grid);

    OutputPulseOptions opts;
    opts.extension_cap_factor = config.extension_cap;
    const SampledPulse eta = output_pulse(model, input, opts);

    const std::string csv_name = stem + ".csv";
    CsvWriter csv((dir / csv_name).string(), {"t", "xi_re", "xi_im", "eta_re", "eta_im"});
    double max_abs_im = 0.0;
    for (int k = 0; k < eta.grid.n_points; ++k) {
        const cplx xi_k = k < input.grid.n_points ? input.values[k] : cplx{0.0, 0.0};
        csv.row({eta.grid.t(k), xi_k.real(), xi_k.imag(), eta.values[k].real(),
                 eta.values[k].imag()});
        max_abs_im = std::max(max_abs_im, std::abs(eta.values[k].imag()));
    }
    csv.close();

    // all-pass deviation over a detuning-covering frequency grid
    const double omega_span = 10.0 * fastest_rate(config.params, config.pulse);
    std::vector<double> omega_grid(1000);
    for (int k = 0; k < 1000; ++k) {
        omega_grid[k] = -omega_span + 2.0 * omega_span * k / 999.0;
    }
    double allpass_dev = 0.0;
    for (const cplx& v : frequency_response(model, omega_grid).values) {
        allpass_dev = std::max(allpass_dev, std::abs(std::abs(v) - 1.0));
    }

    nlohmann::json summary = {
        {"input_norm", pulse_norm(input)},
        {"output_norm", pulse_norm(eta)},
        {"allpass_max_dev", allpass_dev},
        {"decay_time_1pct", decay_time(eta, 0.01)},
        {"max_abs_im_eta", max_abs_im},
    };

    // detuning-conjugation symmetry check for real inputs
    double max_abs_xi = 0.0, max_abs_im_xi = 0.0;
    for (const cplx& v : input.values) {
        max_abs_xi = std::max(max_abs_xi, std::abs(v));
        max_abs_im_xi = std::max(max_abs_im_xi, std::abs(v.imag()));
    }
    if (max_abs_im_xi <= 1e-12 * max_abs_xi) {
        NetworkParams negated = config.params;
        negated.delta_omega_1 = -negated.delta_omega_1;
        negated.delta_omega_2 = -negated.delta_omega_2;
        negated.delta_omega_r = -negated.delta_omega_r;
        const SampledPulse mirror =
            output_pulse(build_linear_model(negated, true), input, opts);
        const int shared = std::min(eta.grid.n_points, mirror.grid.n_points);
        double re_dev = 0.0, im_sum = 0.0;
        for (int k = 0; k < shared; ++k) {
            re_dev = std::max(re_dev,
                              std::abs(eta.values[k].real() - mirror.values[k].real()));
            im_sum = std::max(im_sum,
                              std::abs(eta.values[k].imag() + mirror.values[k].imag()));
        }
        summary["symmetry"] = {{"max_re_dev", re_dev}, {"max_im_sum_dev", im_sum}};
    }

    const std::string summary_name = stem + "_summary.json";
    write_json(dir / summary_name, summary);
    return {{csv_name, summary_name}};
}

ScenarioOutput run_stability(const ScenarioConfig& config, const fs::path& dir,
                             const std::string& stem) {
    const StabilityVerdict verdict = spc_classify(config.params);
    nlohmann::json eigs = nlohmann::json::array();
    for (const auto& lam : verdict.eigenvalues) eigs.push_back(cplx_json(lam));
    nlohmann::json r_values = nlohmann::json::array();
    for (const auto& r : verdict.routh.r) r_values.push_back(cplx_json(r));
    const char* kind = verdict.kind == StabilityKind::Hurwitz   ? "Hurwitz"
                       : verdict.kind == StabilityKind::Marginal ? "Marginal"
                                                                 : "Unstable";
    nlohmann::json out = {
        {"kind", kind},
        {"eigenvalues", eigs},
        {"routh",
         {{"R", r_values},
          {"degenerate", verdict.routh.degenerate || verdict.routh.products_degenerate}}},
    };
    const std::string name = stem + ".json";
    write_json(dir / name, out);
    return {{name}};
}

ScenarioOutput run_excitation(const ScenarioConfig& config, const fs::path& dir,
                              const std::string& stem) {
    const double dt = default_dt(config);
    std::optional<SampledPulse> pulse;
    double t_start = config.grid.t_start.value_or(0.0);
    double t_end;
    if (config.pulse) {
        TimeGrid grid = default_grid(*config.pulse, dt);
        if (config.grid.t_start) {
            grid = make_grid(*config.grid.t_start,
                             config.grid.t_end.value_or(grid.t_end()), dt);
        }
        pulse = sample(*config.pulse, grid);
        t_start = config.grid.t_start.value_or(grid.t_start);
        t_end = config.grid.t_end.value_or(grid.t_end() + steady_horizon(config.params));
    } else {
        t_end = config.grid.t_end.value_or(steady_horizon(config.params));
    }

    IntegrationOptions opts;
    const long n_steps = std::lround((t_end - t_start) / dt);
    opts.record_stride = std::max(1L, n_steps / 4000);

    const HierarchyTrajectory traj =
        integrate_hierarchy(config.params, config.n_cav, pulse ? &*pulse : nullptr,
                            config.initial_state, t_start, t_end, dt, opts);

    const std::string csv_name = stem + ".csv";
    CsvWriter csv((dir / csv_name).string(), {"t", "p_e1", "p_e2", "p_cavity", "tr_rho11"});
    for (const auto& rec : traj.records) {
        csv.row({rec.t, rec.p_e1, rec.p_e2, rec.p_cavity, rec.tr_rho11});
    }
    csv.close();

    const auto& last = traj.records.back();
    nlohmann::json summary = {
        {"final", {{"t", last.t},
                   {"p_e1", last.p_e1},
                   {"p_e2", last.p_e2},
                   {"p_cavity", last.p_cavity},
                   {"tr_rho11", last.tr_rho11}}},
        {"steady_state_reached", traj.steady_state_reached},
        {"stopped_at", traj.steady_state_reached ? "rhs_threshold" : "t_end"},
    };
    if (traj.steady_state_reached) summary["steady_time"] = traj.steady_time;

    const std::string summary_name = stem + "_summary.json";
    write_json(dir / summary_name, summary);
    return {{csv_name, summary_name}};
}

ScenarioOutput run_steady_state(const ScenarioConfig& config, const fs::path& dir,
                                const std::string& stem) {
    const SteadyState ss = steady_state(config.params);
    nlohmann::json out = {
        {"s1_inf", cplx_json(ss.s1_inf)},
        {"s2_inf", cplx_json(ss.s2_inf)},
        {"s3_inf", cplx_json(ss.s3_inf)},
        {"alpha_flag", ss.flag == AlphaFlag::Finite         ? "finite"
                       : ss.flag == AlphaFlag::AlphaZero    ? "alpha_zero"
                                                            : "alpha_infinite"},
    };
    if (ss.flag == AlphaFlag::Finite) {
        out["alpha"] = ss.alpha;
        const DqdDensity density = dqd_steady_density(ss.alpha);
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < 4; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < 4; ++c) row.push_back(cplx_json(density.rho(r, c)));
            rows.push_back(row);
        }
        out["density"] = rows;
        out["purity"] = density.purity;
    }
    const std::string name = stem + ".json";
    write_json(dir / name, out);
    return {{name}};
}

ScenarioOutput run_invert(const ScenarioConfig& config, const fs::path& dir,
                          const std::string& stem) {
    const double dt = default_dt(config);
    InversionReport report;
    if (config.pulse && std::holds_alternative<SuperpositionPulse>(*config.pulse)) {
        const auto& sp = std::get<SuperpositionPulse>(*config.pulse);
        report = superposition_inversion(config.params, sp.coeff1, sp.coeff2,
                                         config.t_terminal, dt, config.n_cav,
                                         config.post_terminal);
    } else {
        report = verify_full_inversion(config.params, config.t_terminal, dt,
                                       config.n_cav, config.post_terminal);
    }

    const std::string csv_name = stem + ".csv";
    CsvWriter csv((dir / csv_name).string(), {"t", "p_e1", "p_e2", "p_cav"});
    for (const auto& rec : report.trajectory.records) {
        csv.row({rec.t, rec.p_e1, rec.p_e2, rec.p_cavity});
    }
    csv.close();

    nlohmann::json summary = {
        {"p_e1_at_terminal", report.p_e1_at_terminal},
        {"pulse_norm_sq", report.pulse_norm_sq},
        {"t_terminal", config.t_terminal},
    };
    const std::string summary_name = stem + "_summary.json";
    write_json(dir / summary_name, summary);
    return {{csv_name, summary_name}};
}

ScenarioOutput run_single(const ScenarioConfig& config, const fs::path& dir,
                          const std::string& stem) {
    switch (config.scenario) {
        case ScenarioKind::PulseResponse: return run_pulse_response(config, dir, stem);
        case ScenarioKind::Stability: return run_stability(config, dir, stem);
        case ScenarioKind::Excitation: return run_excitation(config, dir, stem);
        case ScenarioKind::SteadyStateRun: return run_steady_state(config, dir, stem);
        case ScenarioKind::Invert: return run_invert(config, dir, stem);
    }
    throw std::logic_error("unreachable scenario kind");
}

nlohmann::json apply_sweep_value(nlohmann::json raw, const std::string& key,
                                 double value) {
    raw.erase("sweep");
    if (is_params_key(key)) {
        raw["params"][key] = value;
    } else if (key.rfind("pulse.", 0) == 0) {
        raw["pulse"][key.substr(6)] = value;
    } else {
        raw[key] = value;
    }
    return raw;
}

std::string sanitize_for_filename(std::string text) {
    for (char& c : text) {
        if (c == '.') c = 'p';
        if (c == '+') c = '_';
    }
    return text;
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& file : output_files) {
        outputs.push_back({{"file", file}, {"fnv1a64", checksums.at(file)}});
    }
    return {{"version", version},
            {"config", config_echo},
            {"outputs", outputs},
            {"wall_seconds", wall_seconds},
            {"workers", workers}};
}

RunManifest run(const ScenarioConfig& config, const std::string& output_dir,
                int workers) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir(output_dir);
    fs::create_directories(dir);

    RunManifest manifest;
    manifest.version = kVersion;
    manifest.config_echo = config.raw;
    manifest.workers = std::max(1, workers);

    const std::string base = to_string(config.scenario);

    if (!config.sweep) {
        const ScenarioOutput out = run_single(config, dir, base);
        manifest.output_files = out.files;
    } else {
        const auto& sweep = *config.sweep;
        std::vector<std::vector<std::string>> files_per_point(sweep.values.size());
        std::vector<std::exception_ptr> failures(sweep.values.size());
        std::atomic<std::size_t> next{0};

        auto work = [&]() {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= sweep.values.size()) break;
                try {
                    const nlohmann::json point_raw =
                        apply_sweep_value(config.raw, sweep.key, sweep.values[idx]);
                    const ScenarioConfig point = validate_config(point_raw);
                    const std::string stem =
                        base + "_" + sanitize_for_filename(sweep.key) + "_" +
                        sanitize_for_filename(format_double(sweep.values[idx]));
                    files_per_point[idx] = run_single(point, dir, stem).files;
                } catch (...) {
                    failures[idx] = std::current_exception();
                }
            }
        };

        const int n_workers =
            std::min<std::size_t>(manifest.workers, sweep.values.size());
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();

        for (const auto& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
        for (const auto& files : files_per_point) {
            manifest.output_files.insert(manifest.output_files.end(), files.begin(),
                                         files.end());
        }
    }

    for (const auto& file : manifest.output_files) {
        manifest.checksums[file] = fnv1a_hex((dir / file).string());
    }
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(dir / "manifest.json", manifest.to_json());
    return manifest;
}

}  // namespace qfn
