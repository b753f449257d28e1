#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fidgap/model.hpp"

namespace fidgap {

using Json = nlohmann::ordered_json;

// Mirror of the JSON model file. Complex numbers are [re, im] pairs, matrices
// row-major nested arrays.
struct RateFamilyConfig {
    std::string kind = "fermi";
    double g = 1.0;
};

struct DynamicsConfig {
    std::string kind;  // unitary | lindblad | davies | map
    CMatrix hamiltonian_part;                       // lindblad
    std::vector<std::pair<CMatrix, double>> jumps;  // lindblad
    std::vector<CMatrix> couplings;                 // davies
    RateFamilyConfig rate_family;                   // davies
    std::vector<CMatrix> kraus;                     // map
};

struct PreparationConfig {
    std::string kind;  // single | replacement | filtered | custom
    CMatrix sigma;     // single
    CVector psi;       // replacement
    CMatrix a;         // filtered
    double p = 1.0;    // filtered
    std::vector<CMatrix> kraus;  // custom
};

struct TimeGridConfig {
    double t_max = 0.0;  // <= 0: choose from the decay rate
    int points = 200;
    std::string spacing = "log";
};

struct ModelConfig {
    AlgebraShape shape;
    double beta = 1.0;
    CMatrix hamiltonian;
    DynamicsConfig dynamics;
    PreparationConfig preparation;
    CVector psi;
    TimeGridConfig time_grid;
};

ModelConfig config_from_json(const Json& j);
Json config_to_json(const ModelConfig& cfg);

ModelConfig load_config(const std::string& path);
void save_config(const ModelConfig& cfg, const std::string& path);

// K = beta * hamiltonian; throws on any structural violation.
Model build_model(const ModelConfig& cfg);

// Built-in reproducible demo models: depolarizing | davies-2q | unitary-chain.
ModelConfig demo_config(const std::string& name);
std::vector<std::string> demo_names();

// FNV-1a of the canonical serialization.
std::string config_hash(const ModelConfig& cfg);

}  // namespace fidgap
