#include "fidgap/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fidgap {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string curve_to_csv(const FidelityCurve& curve) {
    std::ostringstream out;
    out << "t,f_direct,f_correlation,bound_schwarz,bound_gap,bound_tracial,floor\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        out << format_double(curve.times[i]) << ',' << format_double(curve.f_direct[i]) << ','
            << format_double(curve.f_correlation[i]) << ','
            << format_double(curve.bound_schwarz[i]) << ',' << format_double(curve.bound_gap[i])
            << ',' << format_double(curve.bound_tracial[i]) << ',' << format_double(curve.floor)
            << '\n';
    }
    return out.str();
}

namespace {

Json series_to_json(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) {
        if (std::isnan(x)) {
            out.push_back(nullptr);
        } else {
            out.push_back(x);
        }
    }
    return out;
}

}  // namespace

Json curve_to_json(const FidelityCurve& curve) {
    Json j;
    j["floor"] = curve.floor;
    j["norm_x"] = curve.norm_x;
    j["norm_y"] = curve.norm_y;
    j["gap_available"] = curve.gap_available;
    j["tracial_available"] = curve.tracial_available;
    if (curve.gap_available) {
        j["rate_source"] = curve.rate_source;
        j["rate_used"] = curve.rate_used;
    }
    j["times"] = series_to_json(curve.times);
    j["f_direct"] = series_to_json(curve.f_direct);
    j["f_correlation"] = series_to_json(curve.f_correlation);
    j["bound_schwarz"] = series_to_json(curve.bound_schwarz);
    j["bound_gap"] = series_to_json(curve.bound_gap);
    j["bound_tracial"] = series_to_json(curve.bound_tracial);
    return j;
}

Json spectral_to_json(const SpectralReport& report) {
    Json j;
    j["mode"] = report.mode == GapMode::detailed_balance ? "detailed_balance" : "symmetrized";
    j["gap_gamma"] = report.gap_gamma;
    if (report.lambda_available) j["gap_lambda"] = report.gap_lambda;
    j["valid"] = report.valid;
    j["kernel_dim_on_complement"] = report.kernel_dim_on_complement;
    j["phi_residual"] = report.phi_residual;
    j["contraction_margin"] = report.contraction_margin;
    if (report.db_available) j["detailed_balance"] = db_to_json(report.db);
    return j;
}

Json db_to_json(const DetailedBalanceReport& report) {
    Json j;
    j["commutation_residual"] = report.commutation_residual;
    j["selfadjoint_residual"] = report.selfadjoint_residual;
    j["generator_norm"] = report.generator_norm;
    j["commutation_pass"] = report.commutation_pass;
    j["selfadjoint_pass"] = report.selfadjoint_pass;
    return j;
}

Json checks_to_json(const std::vector<CheckRow>& rows) {
    Json out = Json::array();
    for (const CheckRow& r : rows) {
        out.push_back(Json{{"name", r.name},
                           {"residual", r.residual},
                           {"tolerance", r.tolerance},
                           {"pass", r.pass}});
    }
    return out;
}

Json make_envelope(const ModelConfig& cfg, std::uint64_t seed,
                   const SpectralReport* spectral, const FidelityCurve* curve,
                   const std::vector<CheckRow>& checks) {
    Json j;
    j["toolkit_version"] = kToolkitVersion;
    j["seed"] = seed;
    j["config_hash"] = config_hash(cfg);
    j["config"] = config_to_json(cfg);
    if (spectral != nullptr) j["spectral"] = spectral_to_json(*spectral);
    if (curve != nullptr) j["fidelity"] = curve_to_json(*curve);
    j["checks"] = checks_to_json(checks);
    return j;
}

// ============================================================================
// SVG
// ============================================================================

namespace {

struct SvgSeries {
    const std::vector<double>* values;
    const char* color;
    const char* label;
};

}  // namespace

std::string curve_to_svg(const FidelityCurve& curve) {
    const int width = 860, height = 520;
    const int left = 70, right = 30, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    const double t_lo = curve.times.front();
    const double t_hi = std::max(curve.times.back(), t_lo + 1e-12);

    const std::vector<SvgSeries> series = {
        {&curve.f_direct, "#1f77b4", "f_direct"},
        {&curve.f_correlation, "#17becf", "f_correlation"},
        {&curve.bound_schwarz, "#ff7f0e", "bound_schwarz"},
        {&curve.bound_gap, "#2ca02c", "bound_gap"},
        {&curve.bound_tracial, "#d62728", "bound_tracial"},
    };

    auto sx = [&](double t) { return left + (t - t_lo) / (t_hi - t_lo) * plot_w; };
    auto sy = [&](double f) { return top + (1.05 - f) / 1.05 * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // Axes and gridlines.
    for (int i = 0; i <= 5; ++i) {
        const double f = 1.05 * i / 5.0;
        const double y = sy(f);
        out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - right
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(f) << "</text>\n";
    }
    for (int i = 0; i <= 6; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / 6.0;
        const double x = sx(t);
        out << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\""
            << height - bottom << "\" stroke=\"#eeeeee\"/>\n";
        std::ostringstream tick;
        tick.precision(3);
        tick << t;
        out << "<text x=\"" << x << "\" y=\"" << height - bottom + 18
            << "\" font-size=\"12\" text-anchor=\"middle\">" << tick.str() << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14
        << "\" font-size=\"13\" text-anchor=\"middle\">t</text>\n";

    // Floor marker.
    out << "<line x1=\"" << left << "\" y1=\"" << sy(curve.floor) << "\" x2=\"" << width - right
        << "\" y2=\"" << sy(curve.floor)
        << "\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";

    int legend_y = top + 8;
    for (const SvgSeries& s : series) {
        std::ostringstream pts;
        bool any = false;
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            const double v = (*s.values)[i];
            if (std::isnan(v)) continue;
            pts << sx(curve.times[i]) << ',' << sy(v) << ' ';
            any = true;
        }
        if (!any) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\""
            << pts.str() << "\"/>\n";
        out << "<rect x=\"" << width - right - 170 << "\" y=\"" << legend_y - 9
            << "\" width=\"14\" height=\"4\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << width - right - 150 << "\" y=\"" << legend_y
            << "\" font-size=\"12\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << content;
}

}  // namespace fidgap
