#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cspadv {

struct SolveReport {
    std::string alg;
    uint64_t seed = 0;
    uint32_t n = 0;
    size_t m = 0;
    uint32_t max_deg = 0;
    double mu = 0;
    long long satisfied = 0;
    double value = 0;
    double advantage = 0;  // value - mu
    int trials = 0;        // z-trials / space size
    int reps = 0;          // AdvRand or trifree repetitions used
    bool success = true;   // false when a trial/rep budget ran out
    double sum_sqrt_deg_over_m = 0;
    double millis = 0;
    std::vector<std::string> notes;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["alg"] = alg;
        j["seed"] = seed;
        j["n"] = n;
        j["m"] = m;
        j["d"] = max_deg;
        j["mu"] = mu;
        j["satisfied"] = satisfied;
        j["value"] = value;
        j["advantage"] = advantage;
        j["trials"] = trials;
        j["reps"] = reps;
        j["success"] = success;
        j["sum_sqrt_deg_over_m"] = sum_sqrt_deg_over_m;
        j["notes"] = notes;
        j["millis"] = millis;
        return j;
    }
};

}  // namespace cspadv
