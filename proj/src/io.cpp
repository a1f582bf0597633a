#include "qvepair/io.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qvepair::io {

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::random_device rd;
    const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            fs::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string spectrum_csv(const Spectrum& s) {
    std::string out = "P3,p_par_final,f\n";
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        out += format_number(s.canonical_momentum[i]);
        out += ',';
        out += format_number(s.kinetic_momentum[i]);
        out += ',';
        out += format_number(s.f[i]);
        out += '\n';
    }
    return out;
}

Spectrum parse_spectrum_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "P3,p_par_final,f")
        throw std::invalid_argument("spectrum CSV must start with header P3,p_par_final,f");
    std::vector<double> p, k, f;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b, c;
        char extra;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &a, &b, &c, &extra) != 3)
            throw std::invalid_argument("malformed spectrum CSV row: " + line);
        p.push_back(a);
        k.push_back(b);
        f.push_back(c);
    }
    Spectrum s;
    s.canonical_momentum = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    s.kinetic_momentum = Eigen::Map<Eigen::VectorXd>(k.data(), static_cast<Eigen::Index>(k.size()));
    s.f = Eigen::Map<Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    return s;
}

std::string series_csv(const std::vector<SeriesSample>& series) {
    std::string out = "t,f,g,w,A\n";
    for (const auto& s : series) {
        out += format_number(s.t) + ',' + format_number(s.f) + ',' + format_number(s.g) + ',' + format_number(s.w) +
               ',' + format_number(s.A) + '\n';
    }
    return out;
}

namespace {

// Labels are user text; quote them when they would break the row.
std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string sweep_csv(const SweepResult& result, DensityMode mode) {
    std::string out = "variant,axis_value,density,mode,n_grid\n";
    for (const auto& row : result.rows) {
        out += csv_field(row.variant) + ',' + format_number(row.axis_value) + ',';
        out += row.density ? format_number(row.density->value) : std::string("nan");
        out += ',' + to_string(mode) + ',';
        out += row.density ? std::to_string(row.density->n_par) : std::string("0");
        out += '\n';
    }
    return out;
}

nlohmann::json density_json(const DensityResult& d) {
    nlohmann::json j;
    j["value"] = d.value;
    j["mode"] = to_string(d.mode);
    j["grid"] = {{"n_par", d.n_par}, {"n_perp", d.n_perp}, {"range", {d.range_lo, d.range_hi}}};
    j["refinement_change"] = d.refinement_change;
    return j;
}

}  // namespace qvepair::io
