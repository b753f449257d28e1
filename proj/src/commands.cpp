#include "fidgap/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "fidgap/rng.hpp"

namespace fidgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void print_rows(const std::vector<CheckRow>& rows, std::ostream& out) {
    std::size_t width = 12;
    for (const CheckRow& r : rows) width = std::max(width, r.name.size());
    for (const CheckRow& r : rows) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(static_cast<int>(width))
            << r.name << "  residual " << std::scientific << std::setprecision(3) << r.residual
            << "  tolerance " << r.tolerance << std::defaultfloat << "\n";
    }
}

bool all_pass(const std::vector<CheckRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

SpectralReport gap_with_fallback(const Model& model, bool* downgraded) {
    if (downgraded) *downgraded = false;
    if (model.dyn.kind != DynKind::semigroup) {
        return spectral_gap(model.dyn, model.ref, GapMode::symmetrized);
    }
    try {
        return spectral_gap(model.dyn, model.ref, GapMode::detailed_balance);
    } catch (const NotDetailedBalance&) {
        if (downgraded) *downgraded = true;
        return spectral_gap(model.dyn, model.ref, GapMode::symmetrized);
    }
}

}  // namespace

// ============================================================================
// Validation
// ============================================================================

std::vector<CheckRow> run_validation(const ModelConfig& cfg, std::uint64_t seed,
                                     double tol_scale) {
    std::vector<CheckRow> rows;
    auto add = [&rows, tol_scale](const std::string& name, double residual, double tol,
                                  bool pass_when_below = true) {
        const double scaled = tol * tol_scale;
        const bool pass = pass_when_below ? residual <= scaled : residual >= scaled;
        rows.push_back({name, residual, scaled, pass});
    };

    // Structural residuals first; anything downstream needs these.
    const double h_scale = std::max(max_abs(cfg.hamiltonian), 1e-300);
    add("hamiltonian hermiticity", max_abs(cfg.hamiltonian - cfg.hamiltonian.adjoint()) / h_scale,
        1e-10);
    add("psi unit norm", std::abs(cfg.psi.norm() - 1.0), 1e-10);
    if (!rows[0].pass || !rows[1].pass) return rows;

    Model model;
    try {
        model = build_model(cfg);
    } catch (const NotFaithful& e) {
        rows.push_back({std::string("omega faithfulness: ") + e.what(), 0.0, 0.0, false});
        return rows;
    } catch (const Error& e) {
        rows.push_back({std::string("model construction: ") + e.what(), 0.0, 0.0, false});
        return rows;
    }
    const ReferenceState& ref = model.ref;
    const int n = ref.n();

    {
        const HermEig eig = herm_eig(ref.omega());
        add("omega faithfulness", eig.values.minCoeff() / eig.values.maxCoeff(),
            ref.faithful_tol(), /*pass_when_below=*/false);
    }

    // Preparation invariants.
    if (model.prep.kind == PrepKind::single) {
        const CMatrix& a = model.prep.kraus.front();
        add("kraus normalization", std::abs(ref.expect(a.adjoint() * a) - 1.0), 1e-12);
    } else {
        CMatrix sum = CMatrix::Zero(n, n);
        for (const CMatrix& a : model.prep.kraus) sum += a.adjoint() * a;
        add("kraus normalization", max_abs(sum - CMatrix::Identity(n, n)), 1e-10);
    }
    const CMatrix perturbed = perturbed_state(model.prep, ref);
    add("perturbed state trace", std::abs(perturbed.trace() - Complex(1.0)), 1e-12);
    if (model.prep.has_target()) {
        add("preparation restriction",
            max_abs(partial_trace_B(perturbed, ref.shape().dQ, ref.shape().dB) -
                    model.prep.target_sigma),
            1e-10);
    }
    add("centering omega(x)", std::abs(ref.expect(build_x(model.prep, ref))), 1e-10);
    add("centering omega(y)", std::abs(ref.expect(build_y(model.psi, ref))), 1e-10);

    // Randomized identities.
    Rng rng(seed);
    double kms_worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const CMatrix a = rng.gaussian(n, n);
        const CMatrix b = rng.gaussian(n, n);
        kms_worst = std::max(kms_worst, kms_check(a, b, ref) / (a.norm() * b.norm()));
    }
    add("kms residual", kms_worst, 1e-10);

    double iso_worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const CMatrix a = rng.gaussian(n, n);
        const CMatrix b = rng.gaussian(n, n);
        const Complex lhs = gns_inner(a, b, ref);
        const Complex rhs = gns_embed(a, ref).dot(gns_embed(b, ref));
        iso_worst = std::max(iso_worst, std::abs(lhs - rhs) / (a.norm() * b.norm()));
    }
    add("gns isometry", iso_worst, 1e-10);

    // Dynamics invariants.
    const CMatrix id = CMatrix::Identity(n, n);
    if (model.dyn.kind == DynKind::semigroup) {
        add("generator unitality L(1)", max_abs(model.dyn.gen.apply(id)), 1e-12);
        CMatrix transported = CMatrix::Zero(n, n);
        // Schroedinger action of the generator on omega must vanish.
        const CMatrix s = superop_of_generator(model.dyn.gen, false);
        transported = unvec(s.adjoint() * vec(ref.omega()), n, n);
        add("omega invariance", max_abs(transported), 1e-10);
        double cp_worst = 0.0;
        for (double t : {0.5, 2.0}) {
            const CMatrix choi = choi_of_superop(expm_dense(t * s), n);
            const HermEig eig = herm_eig(0.5 * (choi + choi.adjoint()), 1e-6);
            cp_worst = std::max(cp_worst, std::max(0.0, -eig.values.minCoeff()));
        }
        add("complete positivity (choi)", cp_worst, 1e-9);
        if (model.dyn.davies_built) {
            const DetailedBalanceReport db = detailed_balance_check(model.dyn.gen, ref);
            const double bar = std::max(db.generator_norm, 1e-300);
            add("davies self-adjointness", db.selfadjoint_residual / bar, 1e-9);
            add("davies modular commutation", db.commutation_residual / bar, 1e-9);
        }
    } else if (model.dyn.kind == DynKind::map) {
        add("map unitality", max_abs(model.dyn.map.apply(id) - id), 1e-10);
        CMatrix transported = CMatrix::Zero(n, n);
        for (const CMatrix& k : model.dyn.map.kraus) transported += k * ref.omega() * k.adjoint();
        add("omega invariance", max_abs(transported - ref.omega()), 1e-10);
        const CMatrix choi = choi_of_superop(superop_of_kraus(model.dyn.map.kraus), n);
        const HermEig eig = herm_eig(0.5 * (choi + choi.adjoint()), 1e-6);
        add("complete positivity (choi)", std::max(0.0, -eig.values.minCoeff()), 1e-9);
    } else {
        const CMatrix evolved = modular_flow(ref.omega(), Complex(-1.0, 0), ref);
        add("omega invariance", max_abs(evolved - ref.omega()), 1e-10);
    }

    return rows;
}

int cmd_validate(const std::string& path, const GlobalOpts& opts, std::ostream& out) {
    const ModelConfig cfg = load_config(path);
    const std::vector<CheckRow> rows = run_validation(cfg, opts.seed, opts.tol_scale);
    print_rows(rows, out);
    if (!all_pass(rows)) {
        out << "validation failed\n";
        return 1;
    }
    out << "all checks passed\n";
    return 0;
}

// ============================================================================
// Gap
// ============================================================================

int cmd_gap(const std::string& path, const std::string& out_path, const GlobalOpts& opts,
            std::ostream& out) {
    const ModelConfig cfg = load_config(path);
    const Model model = build_model(cfg);

    bool downgraded = false;
    const SpectralReport report = gap_with_fallback(model, &downgraded);
    if (downgraded) {
        out << "notice: detailed balance check failed; reporting the symmetrized gap\n";
    }

    Json j = spectral_to_json(report);
    j["config_hash"] = config_hash(cfg);
    j["toolkit_version"] = kToolkitVersion;
    j["seed"] = opts.seed;
    if (out_path.empty()) {
        out << j.dump(2) << "\n";
    } else {
        write_text_file(out_path, j.dump(2) + "\n");
        out << "gap report written to " << out_path << "\n";
    }

    if (report.lambda_available) {
        out << "lambda = " << format_double(report.gap_lambda) << "\n";
    }
    out << "gamma = " << format_double(report.gap_gamma)
        << (report.valid ? "" : " (no decay certificate)") << "\n";
    out << "kernel dimension on the complement = " << report.kernel_dim_on_complement << "\n";
    if (report.kernel_dim_on_complement > 0) {
        out << "warning: undamped directions present; the decay bound is vacuous on them\n";
    }
    return 0;
}

// ============================================================================
// Fidelity
// ============================================================================

int cmd_fidelity(const std::string& path, const std::string& out_base,
                 const std::string& svg_path, const GlobalOpts& opts, std::ostream& out) {
    const ModelConfig cfg = load_config(path);
    const Model model = build_model(cfg);

    bool downgraded = false;
    const SpectralReport report = gap_with_fallback(model, &downgraded);
    if (downgraded) {
        out << "notice: detailed balance check failed; bounds use the symmetrized gap\n";
    }
    const FidelityCurve curve = run_curve(model, &report);

    std::vector<CheckRow> checks = run_validation(cfg, opts.seed, opts.tol_scale);
    for (const CurveCheck& c : verify_curve(curve)) {
        checks.push_back({c.name, c.residual, c.tolerance, c.pass});
    }

    const std::string base = out_base.empty() ? "fidgap_out" : out_base;
    write_text_file(base + ".csv", curve_to_csv(curve));
    write_text_file(base + ".json",
                    make_envelope(cfg, opts.seed, &report, &curve, checks).dump(2) + "\n");
    out << "curve written to " << base << ".csv and " << base << ".json\n";
    if (!svg_path.empty()) {
        write_text_file(svg_path, curve_to_svg(curve));
        out << "plot written to " << svg_path << "\n";
    }

    print_rows(checks, out);
    for (const CheckRow& c : checks) {
        if (!c.pass) {
            out << "first violated invariant: " << c.name << "\n";
            return 1;
        }
    }
    return 0;
}

// ============================================================================
// Sweep
// ============================================================================

namespace {

// Navigate a dotted path with optional numeric tokens for array indices and
// overwrite the addressed scalar.
void set_config_scalar(Json& j, const std::string& dotted, double value) {
    Json* node = &j;
    std::istringstream tokens(dotted);
    std::string token;
    std::vector<std::string> parts;
    while (std::getline(tokens, token, '.')) parts.push_back(token);
    if (parts.empty()) throw UnknownParameter("empty parameter path");
    for (const std::string& part : parts) {
        if (node->is_array()) {
            try {
                const std::size_t idx = std::stoul(part);
                if (idx >= node->size()) throw UnknownParameter("index out of range in '" + dotted + "'");
                node = &(*node)[idx];
            } catch (const std::invalid_argument&) {
                throw UnknownParameter("expected an array index in '" + dotted + "'");
            }
        } else if (node->is_object()) {
            const auto it = node->find(part);
            if (it == node->end()) throw UnknownParameter("no field '" + part + "' in '" + dotted + "'");
            node = &(*it);
        } else {
            throw UnknownParameter("path '" + dotted + "' descends through a scalar");
        }
    }
    if (!node->is_number()) {
        throw UnknownParameter("path '" + dotted + "' does not address a scalar number");
    }
    *node = value;
}

struct SweepRow {
    double value = 0.0;
    double rate = 0.0;
    bool rate_valid = false;
    double half_life = kInf;
    Json envelope;
};

}  // namespace

double fidelity_half_life(const Model& model, double rate_hint) {
    const ReferenceState& ref = model.ref;
    const Propagator prop(model.dyn, ref);
    const CMatrix p_psi = embed_Q(model.psi * model.psi.adjoint(), ref.shape());
    const CMatrix state = perturbed_state(model.prep, ref);
    const double floor = std::real(ref.expect(p_psi));
    const double target = 0.5 * (1.0 + floor);

    auto f = [&](double t) { return std::real((state * prop.heisenberg(t, p_psi)).trace()); };

    if (model.dyn.kind == DynKind::map) {
        for (int k = 0; k <= 10000; ++k) {
            if (f(k) <= target) return k;
        }
        return kInf;
    }

    if (f(0.0) <= target) return 0.0;
    double hi = rate_hint > 0.0 ? 1.0 / rate_hint : 1.0;
    while (f(hi) > target) {
        hi *= 2.0;
        if (hi > 1e6) return kInf;
    }
    double lo = 0.0;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

int cmd_sweep(const std::string& path, const std::string& param,
              const std::vector<double>& values, const std::string& out_path,
              const GlobalOpts& opts, std::ostream& out) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    Json base;
    try {
        in >> base;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
    }

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(values.size());

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            try {
                Json patched = base;
                set_config_scalar(patched, param, values[i]);
                const ModelConfig cfg = config_from_json(patched);
                const Model model = build_model(cfg);
                const SpectralReport report = gap_with_fallback(model, nullptr);
                SweepRow& row = rows[i];
                row.value = values[i];
                row.rate_valid = report.valid;
                row.rate = report.valid ? certified_rate(report) : 0.0;
                row.half_life = fidelity_half_life(model, row.rate);
                const FidelityCurve curve = run_curve(model, &report);
                row.envelope = make_envelope(cfg, opts.seed, &report, &curve,
                                             run_validation(cfg, opts.seed, opts.tol_scale));
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };

    // UnknownParameter must surface before any worker swallows it.
    if (!values.empty()) {
        Json probe = base;
        set_config_scalar(probe, param, values.front());
    }

    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(values.size())));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!errors[i].empty()) throw Error("sweep value " + format_double(values[i]) + ": " + errors[i]);
    }

    out << param << ",rate,half_life\n";
    Json envelopes = Json::array();
    for (const SweepRow& row : rows) {
        out << format_double(row.value) << ','
            << (row.rate_valid ? format_double(row.rate) : "none") << ','
            << (std::isinf(row.half_life) ? "inf" : format_double(row.half_life)) << "\n";
        envelopes.push_back(row.envelope);
    }
    if (!out_path.empty()) {
        write_text_file(out_path, envelopes.dump(2) + "\n");
        out << "envelopes written to " << out_path << "\n";
    }
    return 0;
}

// ============================================================================
// Demo
// ============================================================================

int cmd_demo(const std::string& name, const std::string& out_path, std::ostream& out) {
    const ModelConfig cfg = demo_config(name);
    if (out_path.empty()) {
        out << config_to_json(cfg).dump(2) << "\n";
    } else {
        save_config(cfg, out_path);
        out << "demo config written to " << out_path << "\n";
    }
    return 0;
}

}  // namespace fidgap
