#pragma once

#include <string>
#include <vector>

#include "fidgap/config.hpp"
#include "fidgap/fidelity.hpp"

namespace fidgap {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// CSV with the fixed column set; unavailable bounds print as nan.
std::string curve_to_csv(const FidelityCurve& curve);

Json curve_to_json(const FidelityCurve& curve);
Json spectral_to_json(const SpectralReport& report);
Json db_to_json(const DetailedBalanceReport& report);

struct CheckRow {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

Json checks_to_json(const std::vector<CheckRow>& rows);

// Full result envelope: config echo and hash, reports, checks, version, seed.
Json make_envelope(const ModelConfig& cfg, std::uint64_t seed,
                   const SpectralReport* spectral, const FidelityCurve* curve,
                   const std::vector<CheckRow>& checks);

// Minimal SVG line chart of the fidelity curve and its bounds.
std::string curve_to_svg(const FidelityCurve& curve);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fidgap
