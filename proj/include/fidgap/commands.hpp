#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fidgap/report.hpp"

namespace fidgap {

struct GlobalOpts {
    std::uint64_t seed = 12345;
    double tol_scale = 1.0;
    int jobs = 1;
};

// Structural invariant checks over an assembled model: Hermiticity,
// faithfulness, Kraus normalization, centering, KMS residual, GNS isometry,
// unitality, omega invariance, complete positivity.
std::vector<CheckRow> run_validation(const ModelConfig& cfg, std::uint64_t seed,
                                     double tol_scale);

int cmd_validate(const std::string& path, const GlobalOpts& opts, std::ostream& out);
int cmd_gap(const std::string& path, const std::string& out_path, const GlobalOpts& opts,
            std::ostream& out);
int cmd_fidelity(const std::string& path, const std::string& out_base,
                 const std::string& svg_path, const GlobalOpts& opts, std::ostream& out);
int cmd_sweep(const std::string& path, const std::string& param,
              const std::vector<double>& values, const std::string& out_path,
              const GlobalOpts& opts, std::ostream& out);
int cmd_demo(const std::string& name, const std::string& out_path, std::ostream& out);

// Fidelity half-life: smallest t with f_direct(t) <= (1 + floor)/2, located by
// bisection (integer scan for single-step maps); +inf when never reached.
double fidelity_half_life(const Model& model, double rate_hint);

}  // namespace fidgap
