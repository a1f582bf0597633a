#include "qvepair/config.hpp"

#include <cmath>
#include <set>

namespace qvepair {

using nlohmann::json;

std::string to_string(Command command) {
    switch (command) {
        case Command::Spectrum: return "spectrum";
        case Command::Density: return "density";
        case Command::Sweep: return "sweep";
        case Command::OracleCheck: return "oracle-check";
    }
    return "unknown";
}

std::optional<Command> command_from_string(const std::string& text) {
    for (auto c : {Command::Spectrum, Command::Density, Command::Sweep, Command::OracleCheck})
        if (to_string(c) == text) return c;
    return std::nullopt;
}

namespace {

// Collects every problem in one pass; each reader returns a usable fallback
// so that later sections are still checked.
class Reader {
public:
    explicit Reader(std::vector<ConfigError>& errors) : errors_(errors) {}

    void error(const std::string& pointer, const std::string& message) { errors_.push_back({pointer, message}); }

    bool object(const json& j, const std::string& ptr) {
        if (j.is_object()) return true;
        error(ptr, "expected an object");
        return false;
    }

    void known_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : j.items())
            if (!allowed.count(k)) error(ptr + "/" + k, "unknown key");
    }

    std::optional<double> number(const json& j, const std::string& key, const std::string& ptr, bool required) {
        if (!j.contains(key)) {
            if (required) error(ptr + "/" + key, "required number is missing");
            return std::nullopt;
        }
        const json& v = j.at(key);
        if (!v.is_number()) {
            error(ptr + "/" + key, "expected a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            error(ptr + "/" + key, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<long long> integer(const json& j, const std::string& key, const std::string& ptr) {
        if (!j.contains(key)) return std::nullopt;
        const json& v = j.at(key);
        if (!v.is_number_integer()) {
            error(ptr + "/" + key, "expected an integer");
            return std::nullopt;
        }
        return v.get<long long>();
    }

    std::optional<bool> boolean(const json& j, const std::string& key, const std::string& ptr) {
        if (!j.contains(key)) return std::nullopt;
        if (!j.at(key).is_boolean()) {
            error(ptr + "/" + key, "expected a boolean");
            return std::nullopt;
        }
        return j.at(key).get<bool>();
    }

    std::optional<std::string> string(const json& j, const std::string& key, const std::string& ptr) {
        if (!j.contains(key)) return std::nullopt;
        if (!j.at(key).is_string()) {
            error(ptr + "/" + key, "expected a string");
            return std::nullopt;
        }
        return j.at(key).get<std::string>();
    }

    /// Either an explicit array or {"start", "stop", "count"} expanded inclusively.
    std::optional<std::vector<double>> axis(const json& j, const std::string& ptr) {
        if (j.is_array()) {
            std::vector<double> out;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (!j[i].is_number() || !std::isfinite(j[i].get<double>())) {
                    error(ptr + "/" + std::to_string(i), "expected a finite number");
                    return std::nullopt;
                }
                out.push_back(j[i].get<double>());
            }
            return out;
        }
        if (j.is_object()) {
            known_keys(j, ptr, {"start", "stop", "count"});
            const auto start = number(j, "start", ptr, true);
            const auto stop = number(j, "stop", ptr, true);
            const auto count = integer(j, "count", ptr);
            if (!count) error(ptr + "/count", "required integer is missing");
            if (!start || !stop || !count) return std::nullopt;
            if (*count < 1) {
                error(ptr + "/count", "must be >= 1");
                return std::nullopt;
            }
            if (*count == 1) return std::vector<double>{*start};
            std::vector<double> out(static_cast<std::size_t>(*count));
            for (long long i = 0; i < *count; ++i)
                out[static_cast<std::size_t>(i)] =
                    *start + (*stop - *start) * static_cast<double>(i) / static_cast<double>(*count - 1);
            return out;
        }
        error(ptr, "expected an array of numbers or {start, stop, count}");
        return std::nullopt;
    }

private:
    std::vector<ConfigError>& errors_;
};

std::optional<ChirpProfile> profile_from_string(const std::string& s) {
    if (s == "constant") return ChirpProfile::Constant;
    if (s == "sign_flip") return ChirpProfile::SignFlip;
    return std::nullopt;
}

ChirpedPulse pulse_from_json(Reader& r, const json& j, const std::string& ptr) {
    ChirpedPulse p;
    if (!r.object(j, ptr)) return p;
    r.known_keys(j, ptr, {"amplitude", "carrier_frequency", "width", "chirp", "chirp_profile", "first_half_sign"});
    p.amplitude = r.number(j, "amplitude", ptr, true).value_or(0.0);
    p.carrier_frequency = r.number(j, "carrier_frequency", ptr, true).value_or(0.0);
    p.width = r.number(j, "width", ptr, true).value_or(1.0);
    p.chirp = r.number(j, "chirp", ptr, false).value_or(0.0);
    if (auto s = r.string(j, "chirp_profile", ptr)) {
        if (auto prof = profile_from_string(*s))
            p.profile = *prof;
        else
            r.error(ptr + "/chirp_profile", "expected \"constant\" or \"sign_flip\"");
    }
    if (auto s = r.integer(j, "first_half_sign", ptr)) {
        if (*s != 1 && *s != -1) r.error(ptr + "/first_half_sign", "must be +1 or -1");
        p.first_half_sign = static_cast<int>(*s);
    }
    return p;
}

std::vector<SweepVariant> preset_variants(const std::string& name) {
    if (name == "fig2") return fig2_variants();
    if (name == "fig3") return fig3_variants();
    if (name == "fig5") return fig5_variants();
    if (name == "fig6") return fig6_variants();
    if (name == "fig7") return fig7_variants();
    return {};
}

std::vector<SweepVariant> variants_from_json(Reader& r, const json& j, const std::string& ptr) {
    if (j.is_string()) {
        auto v = preset_variants(j.get<std::string>());
        if (v.empty()) r.error(ptr, "unknown variant preset (expected fig2, fig3, fig5, fig6 or fig7)");
        return v;
    }
    if (!j.is_array()) {
        r.error(ptr, "expected a preset name or an array of variants");
        return {};
    }
    std::vector<SweepVariant> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string vp = ptr + "/" + std::to_string(i);
        const json& v = j[i];
        if (!r.object(v, vp)) continue;
        r.known_keys(v, vp, {"label", "pulses"});
        SweepVariant sv;
        sv.label = r.string(v, "label", vp).value_or("");
        if (sv.label.empty()) r.error(vp + "/label", "variant needs a non-empty label");
        if (v.contains("pulses")) {
            const json& ps = v.at("pulses");
            if (!ps.is_array()) {
                r.error(vp + "/pulses", "expected an array");
            } else {
                for (std::size_t k = 0; k < ps.size(); ++k) {
                    const std::string pp = vp + "/pulses/" + std::to_string(k);
                    PulseVariant pv;
                    if (r.object(ps[k], pp)) {
                        r.known_keys(ps[k], pp, {"sign", "chirp", "chirp_profile", "first_half_sign"});
                        if (auto s = r.integer(ps[k], "sign", pp)) {
                            if (*s != 1 && *s != -1) r.error(pp + "/sign", "must be +1 or -1");
                            pv.sign = static_cast<int>(*s);
                        }
                        pv.chirp = r.number(ps[k], "chirp", pp, false);
                        if (auto s = r.string(ps[k], "chirp_profile", pp)) {
                            pv.profile = profile_from_string(*s);
                            if (!pv.profile) r.error(pp + "/chirp_profile", "expected \"constant\" or \"sign_flip\"");
                        }
                        if (auto s = r.integer(ps[k], "first_half_sign", pp)) {
                            if (*s != 1 && *s != -1) r.error(pp + "/first_half_sign", "must be +1 or -1");
                            pv.first_half_sign = static_cast<int>(*s);
                        }
                    }
                    sv.pulses.push_back(pv);
                }
            }
        }
        out.push_back(std::move(sv));
    }
    return out;
}

json variants_to_json(const std::vector<SweepVariant>& variants) {
    json out = json::array();
    for (const auto& v : variants) {
        json pulses = json::array();
        for (const auto& p : v.pulses) {
            json jp{{"sign", p.sign}};
            if (p.chirp) jp["chirp"] = *p.chirp;
            if (p.profile) jp["chirp_profile"] = to_string(*p.profile);
            if (p.first_half_sign) jp["first_half_sign"] = *p.first_half_sign;
            pulses.push_back(jp);
        }
        out.push_back({{"label", v.label}, {"pulses", pulses}});
    }
    return out;
}

}  // namespace

FieldConfig field_from_json(const json& j, const std::string& ptr, std::vector<ConfigError>& errors) {
    Reader r(errors);
    FieldConfig field;
    if (!r.object(j, ptr)) return field;
    if (!j.contains("pulses") || !j.at("pulses").is_array()) {
        r.error(ptr + "/pulses", "required array is missing");
        return field;
    }
    const json& ps = j.at("pulses");
    for (std::size_t k = 0; k < ps.size(); ++k)
        field.pulses.push_back(pulse_from_json(r, ps[k], ptr + "/pulses/" + std::to_string(k)));
    return field;
}

json to_json(const FieldConfig& field) {
    json pulses = json::array();
    for (const auto& p : field.pulses) {
        json jp{{"amplitude", p.amplitude},
                {"carrier_frequency", p.carrier_frequency},
                {"width", p.width},
                {"chirp", p.chirp},
                {"chirp_profile", to_string(p.profile)}};
        if (p.profile == ChirpProfile::SignFlip) jp["first_half_sign"] = p.first_half_sign;
        pulses.push_back(jp);
    }
    return json{{"pulses", pulses}};
}

ParseResult parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        return {std::nullopt, {{"", std::string("invalid JSON: ") + e.what()}}};
    }
    return parse_config(doc);
}

ParseResult parse_config(const json& doc) {
    ParseResult result;
    auto& errors = result.errors;
    Reader r(errors);
    RunConfig cfg;

    if (!r.object(doc, "")) return result;
    r.known_keys(doc, "", {"schema_version", "command", "field", "grid", "solver", "sweep", "oracle", "output"});

    if (auto v = r.integer(doc, "schema_version", "")) {
        if (*v != 1) r.error("/schema_version", "unsupported schema version (expected 1)");
    } else if (!doc.contains("schema_version")) {
        r.error("/schema_version", "required integer is missing");
    }

    if (auto c = r.string(doc, "command", "")) {
        cfg.command = command_from_string(*c);
        if (!cfg.command) r.error("/command", "unknown command '" + *c + "'");
    }

    // field
    if (!doc.contains("field")) {
        r.error("/field", "required object is missing");
    } else {
        const json& jf = doc.at("field");
        if (r.object(jf, "/field")) {
            r.known_keys(jf, "/field", {"pulses", "enforce_chirp_bound"});
            cfg.field = field_from_json(jf, "/field", errors);
            if (auto b = r.boolean(jf, "enforce_chirp_bound", "/field")) cfg.validation.enforce_chirp_bound = *b;
            for (const auto& v : validate(cfg.field, cfg.validation)) {
                const std::string ptr = v.field == "pulses" ? "/field/pulses"
                                                             : "/field/pulses/" + std::to_string(v.pulse_index) + "/" + v.field;
                r.error(ptr, v.message);
            }
        }
    }

    // grid
    if (doc.contains("grid")) {
        const json& jg = doc.at("grid");
        if (r.object(jg, "/grid")) {
            r.known_keys(jg, "/grid", {"n_par", "range", "p_perp", "n_perp", "p_perp_max", "density_mode"});
            if (auto n = r.integer(jg, "n_par", "/grid")) {
                if (*n < 1) r.error("/grid/n_par", "must be >= 1");
                cfg.grid.n_par = static_cast<Eigen::Index>(*n);
            }
            if (jg.contains("range")) {
                const json& jr = jg.at("range");
                if (jr.is_string() && jr.get<std::string>() == "auto") {
                    cfg.grid.range.reset();
                } else if (jr.is_array() && jr.size() == 2 && jr[0].is_number() && jr[1].is_number()) {
                    const double lo = jr[0].get<double>(), hi = jr[1].get<double>();
                    if (!(lo < hi)) r.error("/grid/range", "range must satisfy lo < hi");
                    cfg.grid.range = std::make_pair(lo, hi);
                } else {
                    r.error("/grid/range", "expected \"auto\" or [lo, hi]");
                }
            }
            if (auto p = r.number(jg, "p_perp", "/grid", false)) {
                if (*p < 0.0) r.error("/grid/p_perp", "must be >= 0");
                cfg.grid.p_perp = *p;
            }
            if (auto m = r.string(jg, "density_mode", "/grid")) {
                try {
                    cfg.grid.mode = density_mode_from_string(*m);
                } catch (const std::invalid_argument& e) {
                    r.error("/grid/density_mode", e.what());
                }
            } else if (jg.contains("n_perp")) {
                cfg.grid.mode = DensityMode::Cylindrical3D;
            }
            if (auto n = r.integer(jg, "n_perp", "/grid")) {
                if (*n < 2) r.error("/grid/n_perp", "must be >= 2");
                cfg.grid.n_perp = static_cast<Eigen::Index>(*n);
            }
            if (auto p = r.number(jg, "p_perp_max", "/grid", false)) {
                if (!(*p > 0.0)) r.error("/grid/p_perp_max", "must be > 0");
                cfg.grid.p_perp_max = *p;
            }
        }
    }

    // solver
    if (doc.contains("solver")) {
        const json& js = doc.at("solver");
        if (r.object(js, "/solver")) {
            r.known_keys(js, "/solver",
                         {"rtol", "atol", "t_start", "t_end", "max_step", "record_series", "series_stride"});
            if (auto v = r.number(js, "rtol", "/solver", false)) cfg.solver.rtol = *v;
            if (auto v = r.number(js, "atol", "/solver", false)) cfg.solver.atol = *v;
            if (auto v = r.number(js, "max_step", "/solver", false)) cfg.solver.max_step = *v;
            cfg.solver.t_start = r.number(js, "t_start", "/solver", false);
            cfg.solver.t_end = r.number(js, "t_end", "/solver", false);
            if (auto v = r.boolean(js, "record_series", "/solver")) cfg.solver.record_series = *v;
            if (auto v = r.integer(js, "series_stride", "/solver")) {
                if (*v < 1) r.error("/solver/series_stride", "must be >= 1");
                else cfg.solver.series_stride = static_cast<std::size_t>(*v);
            }
            if (!(cfg.solver.rtol > 0.0)) r.error("/solver/rtol", "must be > 0");
            if (!(cfg.solver.atol > 0.0)) r.error("/solver/atol", "must be > 0");
            if (!(cfg.solver.max_step > 0.0)) r.error("/solver/max_step", "must be > 0");
        }
    }
    if (!cfg.field.pulses.empty()) {
        const auto [lo, hi] = default_window(cfg.field);
        if (!cfg.solver.t_start) cfg.solver.t_start = lo;
        if (!cfg.solver.t_end) cfg.solver.t_end = hi;
        if (!(*cfg.solver.t_start < *cfg.solver.t_end))
            r.error("/solver/t_start", "t_start must be < t_end");
    }

    // sweep
    if (doc.contains("sweep")) {
        const json& jw = doc.at("sweep");
        if (r.object(jw, "/sweep")) {
            r.known_keys(jw, "/sweep", {"kind", "axis", "variants", "write_spectra"});
            SweepConfig sc;
            if (auto k = r.string(jw, "kind", "/sweep")) {
                try {
                    sc.kind = sweep_kind_from_string(*k);
                } catch (const std::invalid_argument& e) {
                    r.error("/sweep/kind", e.what());
                }
            } else {
                r.error("/sweep/kind", "required string is missing");
            }
            if (jw.contains("axis")) {
                if (auto a = r.axis(jw.at("axis"), "/sweep/axis")) sc.axis = *a;
            } else {
                r.error("/sweep/axis", "required axis is missing");
            }
            if (jw.contains("variants"))
                sc.variants = variants_from_json(r, jw.at("variants"), "/sweep/variants");
            else
                r.error("/sweep/variants", "required variants are missing");
            if (auto w = r.boolean(jw, "write_spectra", "/sweep")) sc.write_spectra = *w;
            cfg.sweep = std::move(sc);
        }
    }

    // oracle
    {
        OracleCheckConfig oc;
        oc.momenta.clear();
        for (int i = 0; i <= 10; ++i) oc.momenta.push_back(-1.0 + 0.2 * i);
        if (doc.contains("oracle")) {
            const json& jo = doc.at("oracle");
            if (r.object(jo, "/oracle")) {
                r.known_keys(jo, "/oracle", {"momenta", "step", "tolerance", "f_floor"});
                if (jo.contains("momenta"))
                    if (auto a = r.axis(jo.at("momenta"), "/oracle/momenta")) oc.momenta = *a;
                oc.step = r.number(jo, "step", "/oracle", false);
                if (oc.step && !(*oc.step > 0.0)) r.error("/oracle/step", "must be > 0");
                if (auto t = r.number(jo, "tolerance", "/oracle", false)) oc.tolerance = *t;
                if (auto t = r.number(jo, "f_floor", "/oracle", false)) oc.f_floor = *t;
                if (oc.momenta.empty()) r.error("/oracle/momenta", "needs at least one momentum");
            }
        }
        cfg.oracle = std::move(oc);
    }

    // output
    if (doc.contains("output")) {
        const json& jo = doc.at("output");
        if (r.object(jo, "/output")) {
            r.known_keys(jo, "/output", {"directory", "overwrite"});
            if (auto d = r.string(jo, "directory", "/output")) {
                if (d->empty()) r.error("/output/directory", "must not be empty");
                cfg.output.directory = *d;
            }
            if (auto o = r.boolean(jo, "overwrite", "/output")) cfg.output.overwrite = *o;
        }
    }

    // payload consistency
    if (cfg.command == Command::Sweep && !cfg.sweep) r.error("/sweep", "command 'sweep' requires a sweep section");
    if (cfg.sweep && errors.empty()) {
        SweepSpec spec;
        spec.kind = cfg.sweep->kind;
        spec.base_field = cfg.field;
        spec.axis = cfg.sweep->axis;
        spec.variants = cfg.sweep->variants;
        spec.solver = cfg.solver;
        spec.grid = cfg.grid;
        spec.validation = cfg.validation;
        for (const auto& msg : validate(spec)) r.error("/sweep", msg);
    }

    if (errors.empty()) result.config = std::move(cfg);
    return result;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    if (cfg.command) j["command"] = to_string(*cfg.command);
    j["field"] = to_json(cfg.field);
    j["field"]["enforce_chirp_bound"] = cfg.validation.enforce_chirp_bound;
    json grid{{"n_par", cfg.grid.n_par}, {"p_perp", cfg.grid.p_perp}, {"density_mode", to_string(cfg.grid.mode)}};
    if (cfg.grid.range)
        grid["range"] = {cfg.grid.range->first, cfg.grid.range->second};
    else
        grid["range"] = "auto";
    if (cfg.grid.mode == DensityMode::Cylindrical3D) {
        grid["n_perp"] = cfg.grid.n_perp;
        grid["p_perp_max"] = cfg.grid.p_perp_max;
    }
    j["grid"] = grid;
    json solver{{"rtol", cfg.solver.rtol},
                {"atol", cfg.solver.atol},
                {"max_step", cfg.solver.max_step},
                {"record_series", cfg.solver.record_series},
                {"series_stride", cfg.solver.series_stride}};
    if (cfg.solver.t_start) solver["t_start"] = *cfg.solver.t_start;
    if (cfg.solver.t_end) solver["t_end"] = *cfg.solver.t_end;
    j["solver"] = solver;
    if (cfg.sweep)
        j["sweep"] = {{"kind", to_string(cfg.sweep->kind)},
                      {"axis", cfg.sweep->axis},
                      {"variants", variants_to_json(cfg.sweep->variants)},
                      {"write_spectra", cfg.sweep->write_spectra}};
    if (cfg.oracle) {
        json o{{"momenta", cfg.oracle->momenta}, {"tolerance", cfg.oracle->tolerance}, {"f_floor", cfg.oracle->f_floor}};
        if (cfg.oracle->step) o["step"] = *cfg.oracle->step;
        j["oracle"] = o;
    }
    j["output"] = {{"directory", cfg.output.directory}, {"overwrite", cfg.output.overwrite}};
    return j;
}

}  // namespace qvepair
