#include "qfn/network_params.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace qfn {

void validate(const NetworkParams& params) {
    std::string problems;
    auto add = [&problems](const std::string& msg) {
        if (!problems.empty()) problems += "; ";
        problems += msg;
    };
    if (!(params.kappa > 0.0)) add("kappa must be > 0");
    if (!(params.mu >= 0.0 && params.mu < 1.0)) add("mu must be in [0,1)");
    if (!(params.coupling_1 >= 0.0)) add("gamma_1 must be >= 0");
    if (!(params.coupling_2 >= 0.0)) add("gamma_2 must be >= 0");
    if (!problems.empty()) {
        throw std::domain_error("invalid network parameters: " + problems);
    }
}

double effective_kappa(double kappa, double mu) {
    if (!(kappa > 0.0)) {
        throw std::domain_error("effective_kappa: kappa must be > 0");
    }
    if (!(mu >= 0.0 && mu < 1.0)) {
        throw std::domain_error("effective_kappa: mu must be in [0,1)");
    }
    return (1.0 - mu) / (1.0 + mu) * kappa;
}

namespace {
constexpr std::array<const char*, 7> kParamKeys = {
    "delta_omega_1", "delta_omega_2", "delta_omega_r",
    "gamma_1",       "gamma_2",       "kappa",
    "mu"};
}  // namespace

NetworkParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::domain_error("params must be a JSON object");
    }
    std::string problems;
    for (const char* key : kParamKeys) {
        if (!j.contains(key)) {
            if (!problems.empty()) problems += "; ";
            problems += std::string("missing key '") + key + "'";
        } else if (!j.at(key).is_number()) {
            if (!problems.empty()) problems += "; ";
            problems += std::string("key '") + key + "' must be a number";
        }
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : kParamKeys) {
            if (it.key() == key) known = true;
        }
        if (!known) {
            if (!problems.empty()) problems += "; ";
            problems += "unknown key '" + it.key() + "'";
        }
    }
    if (!problems.empty()) {
        throw std::domain_error("invalid params object: " + problems);
    }
    NetworkParams p;
    p.delta_omega_1 = j.at("delta_omega_1").get<double>();
    p.delta_omega_2 = j.at("delta_omega_2").get<double>();
    p.delta_omega_r = j.at("delta_omega_r").get<double>();
    p.coupling_1 = j.at("gamma_1").get<double>();
    p.coupling_2 = j.at("gamma_2").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.mu = j.at("mu").get<double>();
    validate(p);
    return p;
}

nlohmann::json params_to_json(const NetworkParams& params) {
    return nlohmann::json{{"delta_omega_1", params.delta_omega_1},
                          {"delta_omega_2", params.delta_omega_2},
                          {"delta_omega_r", params.delta_omega_r},
                          {"gamma_1", params.coupling_1},
                          {"gamma_2", params.coupling_2},
                          {"kappa", params.kappa},
                          {"mu", params.mu}};
}

}  // namespace qfn
