#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qvepair/config.hpp"
#include "qvepair/io.hpp"
#include "qvepair/observables.hpp"
#include "qvepair/oracle.hpp"
#include "qvepair/parallel.hpp"
#include "qvepair/solver.hpp"
#include "qvepair/sweeps.hpp"

namespace fs = std::filesystem;
using namespace qvepair;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;

struct Invocation {
    std::string command;
    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    bool quiet = false;
};

// Thrown for anything the user can fix in the config or on the command line.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Run {
public:
    Run(const Invocation& inv, RunConfig cfg) : inv_(inv), cfg_(std::move(cfg)) {
        dir_ = inv.out_dir.empty() ? fs::path(cfg_.output.directory) : fs::path(inv.out_dir);
        threads_ = resolve_thread_count(inv.threads);
    }

    int execute() {
        switch (*cfg_.command) {
            case Command::Spectrum: return spectrum();
            case Command::Density: return density();
            case Command::Sweep: return sweep();
            case Command::OracleCheck: return oracle_check();
        }
        return kInvalid;
    }

private:
    void progress(const std::string& msg) const {
        if (!inv_.quiet) std::cerr << "qvepair: " << msg << '\n';
    }

    // Fails before any solving when the directory cannot be written or would be clobbered.
    void prepare(const std::vector<fs::path>& files) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw UsageError("cannot create output directory " + dir_.string() + ": " + ec.message());
        const fs::path probe = dir_ / ".qvepair_write_probe";
        {
            std::ofstream out(probe);
            if (!out) throw UsageError("output directory " + dir_.string() + " is not writable");
        }
        fs::remove(probe, ec);
        if (!cfg_.output.overwrite)
            for (const auto& f : files)
                if (fs::exists(dir_ / f))
                    throw UsageError((dir_ / f).string() + " exists; set output.overwrite to replace it");
    }

    void write(const fs::path& rel, const std::string& content) {
        const fs::path path = dir_ / rel;
        if (rel.has_parent_path()) fs::create_directories(path.parent_path());
        io::write_file_atomic(path, content);
        written_.push_back(path);
    }

    void write_config() { write("config.resolved.json", to_json(cfg_).dump(2) + "\n"); }

    int finish(int code) const {
        for (const auto& p : written_) std::cout << p.string() << '\n';
        return code;
    }

    int spectrum() {
        prepare({"spectrum.csv", "config.resolved.json"});
        const GridPolicy& g = cfg_.grid;
        const auto [lo, hi] = g.range ? *g.range : auto_momentum_range(cfg_.field, cfg_.solver, g.p_perp);
        const auto grid = MomentumGrid::uniform(lo, hi, g.n_par, g.p_perp);
        progress("solving " + std::to_string(g.n_par) + " modes on " + std::to_string(threads_) + " thread(s)");

        SolverOptions opts = cfg_.solver;
        opts.record_series = false;
        const SpectrumRun run = solve_spectrum(grid, cfg_.field, opts, threads_);
        write("spectrum.csv", io::spectrum_csv(run.spectrum));

        if (cfg_.solver.record_series) {
            // Series are large; they are recomputed per mode rather than held for the whole grid.
            for (Eigen::Index i = 0; i < grid.canonical_momentum.size(); ++i) {
                const ModeResult r = solve_mode({grid.canonical_momentum[i], g.p_perp}, cfg_.field, cfg_.solver);
                write(fs::path("series") / ("mode_" + std::to_string(i) + ".csv"), io::series_csv(r.series));
            }
        }
        write_config();
        return finish(kOk);
    }

    int density() {
        prepare({"density.json", "config.resolved.json"});
        progress("solving density (" + to_string(cfg_.grid.mode) + ") on " + std::to_string(threads_) + " thread(s)");
        const DensityRun run = compute_density(cfg_.field, cfg_.grid, cfg_.solver, threads_);
        const DensityOptions defaults;
        if (run.density.refinement_change > defaults.refinement_tolerance)
            std::cerr << "qvepair: warning: grid may be too coarse (halving the grid changes the density by "
                      << run.density.refinement_change * 100.0 << "%)\n";
        write("density.json", io::density_json(run.density).dump(2) + "\n");
        write_config();
        return finish(kOk);
    }

    int sweep() {
        if (!cfg_.sweep) throw UsageError("/sweep: command 'sweep' requires a sweep section");
        prepare({"sweep.csv", "config.resolved.json"});
        SweepSpec spec;
        spec.kind = cfg_.sweep->kind;
        spec.base_field = cfg_.field;
        spec.axis = cfg_.sweep->axis;
        spec.variants = cfg_.sweep->variants;
        spec.solver = cfg_.solver;
        spec.solver.record_series = false;
        spec.grid = cfg_.grid;
        spec.validation = cfg_.validation;
        progress("sweeping " + std::to_string(spec.axis.size() * spec.variants.size()) + " rows on " +
                 std::to_string(threads_) + " thread(s)");

        const SweepResult result = run_sweep(spec, threads_, cfg_.sweep->write_spectra);
        write("sweep.csv", io::sweep_csv(result, spec.grid.mode));
        if (cfg_.sweep->write_spectra) {
            for (std::size_t i = 0; i < result.rows.size(); ++i) {
                const auto& row = result.rows[i];
                for (std::size_t k = 0; k < row.spectra.size(); ++k) {
                    std::string name = "row_" + std::to_string(i);
                    if (row.spectra.size() > 1) name += "_sheet_" + std::to_string(k);
                    write(fs::path("spectra") / (name + ".csv"), io::spectrum_csv(row.spectra[k]));
                }
            }
        }
        write_config();
        for (const auto& row : result.rows)
            if (!row.density)
                std::cerr << "qvepair: row " << row.variant << " @ " << io::format_number(row.axis_value)
                          << " failed: " << row.error << '\n';
        return finish(result.failures() ? kNumerical : kOk);
    }

    int oracle_check() {
        prepare({"oracle_check.json", "config.resolved.json"});
        const OracleCheckConfig& oc = *cfg_.oracle;
        const double t0 = *cfg_.solver.t_start, t1 = *cfg_.solver.t_end;
        const double p_perp = cfg_.grid.p_perp;

        nlohmann::json modes = nlohmann::json::array();
        double worst = 0.0;
        for (double p3 : oc.momenta) {
            const ModeParams params{p3, p_perp};
            const double limit = oracle_step_limit(params, cfg_.field, t0, t1);
            OracleOptions oo;
            oo.step = oc.step.value_or(0.5 * limit);
            oo.t_start = t0;
            oo.t_end = t1;
            progress("oracle mode P3 = " + io::format_number(p3));
            OracleResult ref;
            try {
                ref = oracle_solve_mode(params, cfg_.field, oo);
            } catch (const StepTooLarge& e) {
                throw UsageError(std::string("/oracle/step: ") + e.what());
            }
            SolverOptions so = cfg_.solver;
            so.record_series = false;
            const ModeResult ode = solve_mode(params, cfg_.field, so);
            const bool judged = ref.final_f > oc.f_floor;
            const double rel = judged ? std::abs(ode.final_f - ref.final_f) / ref.final_f : 0.0;
            if (judged) worst = std::max(worst, rel);
            modes.push_back({{"P3", p3},
                             {"f_oracle", ref.final_f},
                             {"f_solver", ode.final_f},
                             {"relative_error", rel},
                             {"judged", judged},
                             {"oracle_step", ref.step},
                             {"oracle_steps", ref.steps}});
        }
        const bool pass = worst <= oc.tolerance;
        nlohmann::json report{{"modes", modes},
                              {"max_relative_deviation", worst},
                              {"tolerance", oc.tolerance},
                              {"f_floor", oc.f_floor},
                              {"pass", pass}};
        write("oracle_check.json", report.dump(2) + "\n");
        write_config();
        if (!pass)
            std::cerr << "qvepair: oracle check failed: max relative deviation " << worst << " > " << oc.tolerance
                      << '\n';
        return finish(pass ? kOk : kNumerical);
    }

    const Invocation& inv_;
    RunConfig cfg_;
    fs::path dir_;
    unsigned threads_ = 1;
    std::vector<fs::path> written_;
};

std::optional<RunConfig> load(const Invocation& inv) {
    std::ifstream in(inv.config_path);
    if (!in) {
        std::cerr << "qvepair: cannot read config " << inv.config_path << '\n';
        return std::nullopt;
    }
    std::stringstream text;
    text << in.rdbuf();
    ParseResult parsed = parse_config(text.str());
    for (const auto& e : parsed.errors)
        std::cerr << "qvepair: " << inv.config_path << ": " << (e.pointer.empty() ? "/" : e.pointer) << ": "
                  << e.message << '\n';
    return parsed.config;
}

int dispatch(const Invocation& inv) {
    auto cfg = load(inv);
    if (!cfg) return kInvalid;

    if (inv.command == "validate") return kOk;
    const Command cmd = *command_from_string(inv.command);
    if (cfg->command && *cfg->command != cmd) {
        std::cerr << "qvepair: /command: config is for '" << to_string(*cfg->command) << "', not '" << inv.command
                  << "'\n";
        return kInvalid;
    }
    cfg->command = cmd;

    try {
        Run run(inv, std::move(*cfg));
        return run.execute();
    } catch (const UsageError& e) {
        std::cerr << "qvepair: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qvepair: " << e.what() << '\n';
        return kInvalid;
    } catch (const SolverError& e) {
        std::cerr << "qvepair: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "qvepair: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pair production in chirped Gaussian laser pulses (quantum Vlasov equation)"};
    app.require_subcommand(1);
    Invocation inv;

    for (const char* name : {"spectrum", "density", "sweep", "oracle-check", "validate"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", inv.config_path, "run configuration (JSON)")->required();
        if (std::string(name) != "validate") {
            sub->add_option("--out", inv.out_dir, "output directory (overrides output.directory)");
            sub->add_option("--threads", inv.threads, "worker threads, 0 = auto (QVE_THREADS or hardware)");
            sub->add_flag("--quiet", inv.quiet, "suppress progress messages");
        }
        sub->callback([&inv, name] { inv.command = name; });
    }
    app.get_subcommand("spectrum")->description("momentum spectrum f(P3) on a uniform grid -> spectrum.csv");
    app.get_subcommand("density")->description("number density -> density.json");
    app.get_subcommand("sweep")->description("density over a parameter axis and variants -> sweep.csv");
    app.get_subcommand("oracle-check")->description("compare the ODE solver with the history-quadrature oracle");
    app.get_subcommand("validate")->description("check a configuration without solving");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }
    return dispatch(inv);
}
