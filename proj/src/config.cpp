#include "fidgap/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace fidgap {

// ============================================================================
// JSON <-> config
// ============================================================================

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(where, "expected a [re, im] pair");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json complex_to_json(Complex z) {
    return Json::array({std::real(z), std::imag(z)});
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty nested array");
    const std::size_t rows = j.size();
    if (!j[0].is_array()) fail(where, "expected rows as arrays");
    const std::size_t cols = j[0].size();
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) fail(where, "ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = complex_from_json(j[i][k], where);
        }
    }
    return m;
}

Json matrix_to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

CVector vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array");
    CVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j[i], where);
    return v;
}

Json vector_to_json(const CVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) fail(where, "missing field '" + key + "'");
    return *it;
}

}  // namespace

ModelConfig config_from_json(const Json& j) {
    ModelConfig cfg;
    if (!j.is_object()) fail("config", "top level must be an object");

    const Json& shape = field(j, "shape", "config");
    cfg.shape.dQ = field(shape, "dQ", "shape").get<int>();
    cfg.shape.dB = field(shape, "dB", "shape").get<int>();
    cfg.beta = j.value("beta", 1.0);
    if (cfg.beta <= 0.0) fail("config", "beta must be positive");
    cfg.hamiltonian = matrix_from_json(field(j, "hamiltonian", "config"), "hamiltonian");

    const Json& dyn = field(j, "dynamics", "config");
    cfg.dynamics.kind = field(dyn, "kind", "dynamics").get<std::string>();
    if (cfg.dynamics.kind == "lindblad") {
        if (dyn.contains("hamiltonian_part")) {
            cfg.dynamics.hamiltonian_part =
                matrix_from_json(dyn["hamiltonian_part"], "dynamics.hamiltonian_part");
        }
        for (const Json& jj : field(dyn, "jumps", "dynamics")) {
            cfg.dynamics.jumps.emplace_back(
                matrix_from_json(field(jj, "matrix", "dynamics.jumps"), "dynamics.jumps.matrix"),
                field(jj, "rate", "dynamics.jumps").get<double>());
        }
    } else if (cfg.dynamics.kind == "davies") {
        for (const Json& cj : field(dyn, "couplings", "dynamics")) {
            cfg.dynamics.couplings.push_back(matrix_from_json(cj, "dynamics.couplings"));
        }
        const Json& rf = field(dyn, "rate_family", "dynamics");
        cfg.dynamics.rate_family.kind = field(rf, "kind", "rate_family").get<std::string>();
        cfg.dynamics.rate_family.g = field(rf, "g", "rate_family").get<double>();
        if (cfg.dynamics.rate_family.kind != "fermi") {
            fail("rate_family", "unknown kind '" + cfg.dynamics.rate_family.kind + "'");
        }
    } else if (cfg.dynamics.kind == "map") {
        for (const Json& kj : field(dyn, "kraus", "dynamics")) {
            cfg.dynamics.kraus.push_back(matrix_from_json(kj, "dynamics.kraus"));
        }
    } else if (cfg.dynamics.kind != "unitary") {
        fail("dynamics", "unknown kind '" + cfg.dynamics.kind + "'");
    }

    const Json& prep = field(j, "preparation", "config");
    cfg.preparation.kind = field(prep, "kind", "preparation").get<std::string>();
    if (cfg.preparation.kind == "single") {
        cfg.preparation.sigma = matrix_from_json(field(prep, "sigma", "preparation"), "preparation.sigma");
    } else if (cfg.preparation.kind == "replacement") {
        cfg.preparation.psi = vector_from_json(field(prep, "psi", "preparation"), "preparation.psi");
    } else if (cfg.preparation.kind == "filtered") {
        cfg.preparation.a = matrix_from_json(field(prep, "a", "preparation"), "preparation.a");
        cfg.preparation.p = field(prep, "p", "preparation").get<double>();
    } else if (cfg.preparation.kind == "custom") {
        for (const Json& kj : field(prep, "kraus", "preparation")) {
            cfg.preparation.kraus.push_back(matrix_from_json(kj, "preparation.kraus"));
        }
    } else {
        fail("preparation", "unknown kind '" + cfg.preparation.kind + "'");
    }

    cfg.psi = vector_from_json(field(j, "psi", "config"), "psi");

    if (j.contains("time_grid")) {
        const Json& tg = j["time_grid"];
        cfg.time_grid.t_max = tg.value("t_max", 0.0);
        cfg.time_grid.points = tg.value("points", 200);
        cfg.time_grid.spacing = tg.value("spacing", std::string("log"));
        if (cfg.time_grid.spacing != "log" && cfg.time_grid.spacing != "linear") {
            fail("time_grid", "spacing must be 'log' or 'linear'");
        }
        if (cfg.time_grid.points < 1) fail("time_grid", "points must be positive");
    }
    return cfg;
}

Json config_to_json(const ModelConfig& cfg) {
    Json j;
    j["shape"] = Json{{"dQ", cfg.shape.dQ}, {"dB", cfg.shape.dB}};
    j["beta"] = cfg.beta;
    j["hamiltonian"] = matrix_to_json(cfg.hamiltonian);

    Json dyn;
    dyn["kind"] = cfg.dynamics.kind;
    if (cfg.dynamics.kind == "lindblad") {
        if (cfg.dynamics.hamiltonian_part.size() > 0) {
            dyn["hamiltonian_part"] = matrix_to_json(cfg.dynamics.hamiltonian_part);
        }
        Json jumps = Json::array();
        for (const auto& [m, r] : cfg.dynamics.jumps) {
            jumps.push_back(Json{{"matrix", matrix_to_json(m)}, {"rate", r}});
        }
        dyn["jumps"] = jumps;
    } else if (cfg.dynamics.kind == "davies") {
        Json couplings = Json::array();
        for (const CMatrix& c : cfg.dynamics.couplings) couplings.push_back(matrix_to_json(c));
        dyn["couplings"] = couplings;
        dyn["rate_family"] = Json{{"kind", cfg.dynamics.rate_family.kind},
                                  {"g", cfg.dynamics.rate_family.g}};
    } else if (cfg.dynamics.kind == "map") {
        Json kraus = Json::array();
        for (const CMatrix& k : cfg.dynamics.kraus) kraus.push_back(matrix_to_json(k));
        dyn["kraus"] = kraus;
    }
    j["dynamics"] = dyn;

    Json prep;
    prep["kind"] = cfg.preparation.kind;
    if (cfg.preparation.kind == "single") {
        prep["sigma"] = matrix_to_json(cfg.preparation.sigma);
    } else if (cfg.preparation.kind == "replacement") {
        prep["psi"] = vector_to_json(cfg.preparation.psi);
    } else if (cfg.preparation.kind == "filtered") {
        prep["a"] = matrix_to_json(cfg.preparation.a);
        prep["p"] = cfg.preparation.p;
    } else if (cfg.preparation.kind == "custom") {
        Json kraus = Json::array();
        for (const CMatrix& k : cfg.preparation.kraus) kraus.push_back(matrix_to_json(k));
        prep["kraus"] = kraus;
    }
    j["preparation"] = prep;

    j["psi"] = vector_to_json(cfg.psi);
    j["time_grid"] = Json{{"t_max", cfg.time_grid.t_max},
                          {"points", cfg.time_grid.points},
                          {"spacing", cfg.time_grid.spacing}};
    return j;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return config_from_json(j);
}

void save_config(const ModelConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write config file '" + path + "'");
    out << config_to_json(cfg).dump(2) << "\n";
}

// ============================================================================
// Model assembly
// ============================================================================

Model build_model(const ModelConfig& cfg) {
    cfg.shape.validate();
    const int n = cfg.shape.n();
    if (cfg.hamiltonian.rows() != n || cfg.hamiltonian.cols() != n) {
        throw DimensionMismatch("build_model: hamiltonian does not match dQ*dB");
    }
    if (!is_hermitian(cfg.hamiltonian)) {
        throw NotHermitian("build_model: hamiltonian hermiticity violated");
    }

    Model model;
    model.ref = ReferenceState::build(cfg.shape, cfg.beta * cfg.hamiltonian);

    if (cfg.dynamics.kind == "unitary") {
        model.dyn = DynamicsSpec::unitary();
    } else if (cfg.dynamics.kind == "lindblad") {
        LindbladGenerator gen;
        if (cfg.dynamics.hamiltonian_part.size() > 0) {
            if (!is_hermitian(cfg.dynamics.hamiltonian_part)) {
                throw NotHermitian("build_model: lindblad hamiltonian_part is not Hermitian");
            }
            gen.h_part = cfg.dynamics.hamiltonian_part;
        }
        for (const auto& [m, r] : cfg.dynamics.jumps) {
            if (m.rows() != n || m.cols() != n) {
                throw DimensionMismatch("build_model: jump operator does not match dQ*dB");
            }
            if (r < 0.0) throw InvariantViolation("build_model: negative jump rate");
            gen.jumps.push_back({m, r});
        }
        model.dyn = DynamicsSpec::from_generator(std::move(gen));
    } else if (cfg.dynamics.kind == "davies") {
        KmsRateFamily rates{cfg.dynamics.rate_family.g};
        model.dyn = DynamicsSpec::from_generator(
            davies_generator(model.ref, cfg.dynamics.couplings, rates), /*davies=*/true);
    } else if (cfg.dynamics.kind == "map") {
        CpMap map;
        map.kraus = cfg.dynamics.kraus;
        const CMatrix s = superop_of_kraus(map.kraus);
        map.unital = max_abs(unvec(s * vec(CMatrix::Identity(n, n)), n, n) -
                             CMatrix::Identity(n, n)) <= 1e-10;
        CMatrix transported = CMatrix::Zero(n, n);
        for (const CMatrix& k : map.kraus) transported += k * model.ref.omega() * k.adjoint();
        map.omega_invariant = max_abs(transported - model.ref.omega()) <= 1e-10;
        if (!map.unital) {
            throw InvariantViolation("build_model: map kraus set is not identity preserving");
        }
        model.dyn = DynamicsSpec::from_map(std::move(map));
    }

    if (cfg.psi.size() != cfg.shape.dQ) {
        throw DimensionMismatch("build_model: psi does not match dQ");
    }
    if (std::abs(cfg.psi.norm() - 1.0) > 1e-10) {
        throw InvariantViolation("build_model: psi unit norm violated");
    }
    model.psi = cfg.psi;

    if (cfg.preparation.kind == "single") {
        model.prep = single_perturbation(QubitTarget::from_sigma(cfg.preparation.sigma), model.ref);
    } else if (cfg.preparation.kind == "replacement") {
        model.prep = replacement_operation(QubitTarget::from_psi(cfg.preparation.psi), model.ref);
    } else if (cfg.preparation.kind == "filtered") {
        model.prep = filtered_preparation(cfg.preparation.a, cfg.preparation.p, model.ref);
    } else if (cfg.preparation.kind == "custom") {
        model.prep = custom_preparation(cfg.preparation.kraus, model.ref);
    }

    model.grid.t_max = cfg.time_grid.t_max;
    model.grid.points = cfg.time_grid.points;
    model.grid.spacing = cfg.time_grid.spacing == "linear" ? TimeGrid::Spacing::linear
                                                           : TimeGrid::Spacing::log;
    return model;
}

// ============================================================================
// Demos
// ============================================================================

namespace {

// All sixteen two-qubit Pauli products; index 0 is the identity.
std::vector<CMatrix> two_qubit_paulis() {
    const std::vector<CMatrix> p = {CMatrix::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
    std::vector<CMatrix> out;
    for (const CMatrix& a : p) {
        for (const CMatrix& b : p) out.push_back(kron(a, b));
    }
    return out;
}

ModelConfig demo_depolarizing() {
    ModelConfig cfg;
    cfg.shape = {2, 2};
    cfg.hamiltonian = CMatrix::Zero(4, 4);
    cfg.dynamics.kind = "lindblad";
    const auto paulis = two_qubit_paulis();
    for (std::size_t i = 1; i < paulis.size(); ++i) {
        cfg.dynamics.jumps.emplace_back(paulis[i], 1.0 / 16.0);
    }
    cfg.preparation.kind = "single";
    CMatrix sigma = CMatrix::Zero(2, 2);
    sigma(0, 0) = 1.0;
    cfg.preparation.sigma = sigma;
    cfg.psi = CVector::Zero(2);
    cfg.psi[0] = 1.0;
    cfg.time_grid.t_max = 10.0;
    return cfg;
}

ModelConfig demo_davies_2q() {
    ModelConfig cfg;
    cfg.shape = {2, 2};
    const CMatrix id2 = CMatrix::Identity(2, 2);
    cfg.hamiltonian = kron(pauli_z(), id2) + 0.5 * kron(id2, pauli_z());
    cfg.dynamics.kind = "davies";
    cfg.dynamics.couplings = {kron(pauli_x(), id2), kron(id2, pauli_x())};
    cfg.dynamics.rate_family = {"fermi", 1.0};
    cfg.preparation.kind = "replacement";
    cfg.preparation.psi = CVector::Zero(2);
    cfg.preparation.psi[0] = 1.0;
    cfg.psi = cfg.preparation.psi;
    cfg.time_grid.t_max = 20.0;
    return cfg;
}

// Small spin-chain analogue: one encoded qubit coupled to two carrier qubits
// through Ising terms plus transverse fields on the carriers. Case a) unitary
// dynamics given by the modular flow of the chain Hamiltonian.
ModelConfig demo_unitary_chain() {
    ModelConfig cfg;
    cfg.shape = {2, 4};
    const CMatrix id2 = CMatrix::Identity(2, 2);
    const CMatrix zz1 = kron(pauli_z(), kron(pauli_z(), id2));
    const CMatrix zz2 = kron(id2, kron(pauli_z(), pauli_z()));
    const CMatrix x1 = kron(id2, kron(pauli_x(), id2));
    const CMatrix x2 = kron(id2, kron(id2, pauli_x()));
    cfg.hamiltonian = 0.6 * zz1 + 0.6 * zz2 + 0.35 * x1 + 0.35 * x2;
    cfg.dynamics.kind = "unitary";
    cfg.preparation.kind = "replacement";
    cfg.preparation.psi = CVector::Zero(2);
    cfg.preparation.psi[0] = 1.0;
    cfg.psi = cfg.preparation.psi;
    cfg.time_grid.t_max = 12.0;
    cfg.time_grid.spacing = "linear";
    return cfg;
}

}  // namespace

ModelConfig demo_config(const std::string& name) {
    if (name == "depolarizing") return demo_depolarizing();
    if (name == "davies-2q") return demo_davies_2q();
    if (name == "unitary-chain") return demo_unitary_chain();
    throw UnknownParameter("unknown demo '" + name + "'");
}

std::vector<std::string> demo_names() {
    return {"depolarizing", "davies-2q", "unitary-chain"};
}

std::string config_hash(const ModelConfig& cfg) {
    const std::string text = config_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

}  // namespace fidgap
