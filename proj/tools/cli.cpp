#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "afc/basis.hpp"
#include "afc/config.hpp"
#include "afc/evolution.hpp"
#include "afc/hamiltonian.hpp"
#include "afc/lindblad.hpp"
#include "afc/revivals.hpp"
#include "afc/spectrum.hpp"
#include "afc/sweep.hpp"
#include "afc/trajectories.hpp"
#include "afc/wigner.hpp"

#ifndef AFC_SIM_VERSION
#define AFC_SIM_VERSION "0.0.0"
#endif

namespace afc::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
    RunConfig config;
    std::string hash;
    fs::path out_dir;
};

std::string num(double x) { return fmt::format("{:.12g}", x); }

class CsvFile {
public:
    CsvFile(const Context& ctx, const std::string& name, const std::string& columns)
        : path_(ctx.out_dir / name), stream_(path_, std::ios::binary | std::ios::trunc) {
        if (!stream_) {
            throw ValidationError(fmt::format("run.out: cannot write '{}'", path_.string()));
        }
        stream_ << fmt::format("# afc_sim {} config_hash={} seed={}\n", AFC_SIM_VERSION, ctx.hash, ctx.config.seed);
        stream_ << columns << '\n';
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        std::string line;
        ((line += (line.empty() ? "" : ",") + field_text(fields)), ...);
        stream_ << line << '\n';
    }

    void comment(const std::string& text) { stream_ << "# " << text << '\n'; }

    const fs::path& path() const { return path_; }

private:
    static std::string field_text(double x) { return num(x); }
    static std::string field_text(int x) { return std::to_string(x); }
    static std::string field_text(std::size_t x) { return std::to_string(x); }
    static std::string field_text(const std::string& s) { return s; }
    static std::string field_text(const char* s) { return s; }

    fs::path path_;
    std::ofstream stream_;
};

// Cutoffs used for dynamics: [basis] values, else derived from the initial state.
std::pair<int, int> dynamics_cutoffs(const RunConfig& c) {
    const int photon = c.basis.photon_cutoff >= 0 ? c.basis.photon_cutoff : default_photon_cutoff(c.state.spec);
    const int exc = c.basis.exc_cutoff >= 0 ? c.basis.exc_cutoff : photon;
    return {photon, exc};
}

double sector1_t_rev(const CombSpec& comb) {
    const BasisTable basis(comb, 1, 1);
    return spacing_stats(sector_spectrum(assemble_hamiltonian(comb, basis), basis, 1)).t_rev_ns;
}

struct Dynamics {
    Trajectory trajectory;
    Eigen::VectorXcd cavity0;
};

Dynamics run_dynamics(const RunConfig& c, std::span<const double> grid) {
    const CombSpec comb = c.comb.build();
    const auto [photon, exc] = dynamics_cutoffs(c);
    const BasisTable basis(comb, photon, exc);
    const SparseMatrix h = assemble_hamiltonian(comb, basis, c.basis.frame);
    Dynamics d;
    d.cavity0 = prepare_cavity_state(c.state.spec, photon, c.state.tail_tolerance);
    const Eigen::VectorXcd psi0 = product_with_spin_vacuum(basis, d.cavity0);
    const auto dissipators = make_dissipators(jump_operators(comb, basis), c.losses, c.dephasing);

    switch (c.method.kind) {
    case Method::closed:
        if (!c.losses.lossless()) {
            throw ValidationError("method.kind = closed requires zero loss rates");
        }
        d.trajectory = evolve_closed(h, basis, psi0, grid, {c.time.rtol, 1e-12, true});
        break;
    case Method::dense: {
        const SparseMatrix l = build_liouvillian(h, dissipators, c.method.dense_max_dim);
        d.trajectory = evolve_lindblad_dense(l, basis, psi0 * psi0.adjoint(), grid, {c.time.rtol, 1e-12, true});
        break;
    }
    case Method::trajectories: {
        TrajectoryOptions opt;
        opt.n_traj = c.method.n_traj;
        opt.seed = c.seed;
        opt.threads = c.threads;
        opt.rtol = c.time.rtol;
        d.trajectory = evolve_trajectories(h, basis, dissipators, psi0, grid, opt);
        break;
    }
    }
    return d;
}

void cmd_spectrum(const Context& ctx) {
    const RunConfig& c = ctx.config;
    const CombSpec comb = c.comb.build();
    const int k_max = std::max(2, c.spectrum.max_sector);
    const BasisTable basis(comb, k_max, k_max);
    const SparseMatrix h = assemble_hamiltonian(comb, basis, c.basis.frame);

    CsvFile levels(ctx, "spectrum.csv", "sector,eigenvalue_mhz");
    std::vector<SectorSpectrum> spectra;
    for (int k = 0; k <= c.spectrum.max_sector; ++k) {
        spectra.push_back(sector_spectrum(h, basis, k));
        for (double e : spectra.back().eigenvalues) {
            levels.row(k, rad_per_ns_to_mhz(e));
        }
    }
    const SectorSpectrum s1 = c.spectrum.max_sector >= 1 ? spectra[1] : sector_spectrum(h, basis, 1);
    const SectorSpectrum s2 = c.spectrum.max_sector >= 2 ? spectra[2] : sector_spectrum(h, basis, 2);
    const SpacingStats st1 = spacing_stats(s1);
    const SpacingStats st2 = spacing_stats(s2, c.spectrum.spacing);
    CsvFile stats(ctx, "stats.csv", "lambda_mhz,mean_mhz,std1_mhz,std2_mhz,t_rev_ns");
    stats.row(c.comb.lambda_mhz, st1.mean_mhz, st1.std_mhz, st2.std_mhz, st1.t_rev_ns);
}

void write_cavity_json(const Context& ctx, const Trajectory& traj) {
    nlohmann::ordered_json doc;
    doc["header"] = {{"tool", "afc_sim"},
                     {"version", AFC_SIM_VERSION},
                     {"config_hash", ctx.hash},
                     {"seed", ctx.config.seed}};
    const auto dim = traj.cavity_states.empty() ? 0 : traj.cavity_states.front().rows();
    doc["dim"] = dim;
    doc["layout"] = "row-major [re, im] pairs";
    doc["max_drift"] = traj.max_drift;
    nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < traj.cavity_states.size(); ++i) {
        const CavityMatrix& rho = traj.cavity_states[i];
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < rho.rows(); ++r) {
            for (Eigen::Index col = 0; col < rho.cols(); ++col) {
                entries.push_back({rho(r, col).real(), rho(r, col).imag()});
            }
        }
        snaps.push_back({{"t_ns", traj.times[i]}, {"rho", std::move(entries)}});
    }
    doc["snapshots"] = std::move(snaps);
    const fs::path path = ctx.out_dir / "cavity_states.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ValidationError(fmt::format("run.out: cannot write '{}'", path.string()));
    }
    out << doc.dump(1) << '\n';
}

void cmd_evolve(const Context& ctx) {
    const RunConfig& c = ctx.config;
    const std::vector<double> grid = uniform_grid(c.time.t_end_ns, c.time.n_snapshots);
    const Dynamics d = run_dynamics(c, grid);
    CsvFile csv(ctx, "evolve.csv", "t_ns,photon_number,photon_number_stderr");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double se = d.trajectory.photon_number_stderr.empty() ? 0.0 : d.trajectory.photon_number_stderr[i];
        csv.row(grid[i], d.trajectory.photon_number[i], se);
    }
    if (c.method.write_density) {
        write_cavity_json(ctx, d.trajectory);
    }
}

void cmd_wigner(const Context& ctx) {
    const RunConfig& c = ctx.config;
    std::set<double> times(c.wigner.times_ns.begin(), c.wigner.times_ns.end());
    if (!c.wigner.t_rev_multiples.empty()) {
        const double t_rev = sector1_t_rev(c.comb.build());
        for (double k : c.wigner.t_rev_multiples) {
            times.insert(k * t_rev);
        }
    }
    const std::vector<double> grid(times.begin(), times.end());
    const Dynamics d = run_dynamics(c, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const WignerGrid w = wigner(d.trajectory.cavity_states[i], c.wigner.grid);
        CsvFile csv(ctx, fmt::format("wigner_{:03d}.csv", i), "re_alpha,im_alpha,w");
        csv.comment(fmt::format("t_ns={}", num(grid[i])));
        for (Eigen::Index a = 0; a < w.values.rows(); ++a) {
            for (Eigen::Index b = 0; b < w.values.cols(); ++b) {
                csv.row(w.re(a), w.im(b), w.values(a, b));
            }
        }
    }
}

void cmd_revivals(const Context& ctx) {
    const RunConfig& c = ctx.config;
    const double t_rev = c.revivals.t_rev_ns > 0.0 ? c.revivals.t_rev_ns : sector1_t_rev(c.comb.build());
    const auto n_points =
        static_cast<std::size_t>(std::ceil(1.25 * c.revivals.count * c.revivals.samples_per_revival)) + 1;
    const std::vector<double> grid = uniform_grid(1.25 * c.revivals.count * t_rev, n_points);
    const Dynamics d = run_dynamics(c, grid);
    const auto peaks = detect_revivals(d.trajectory, t_rev, c.revivals.count);
    CsvFile csv(ctx, "revivals.csv", "k,t_peak_ns,photon_number,fidelity,fidelity_kind");
    for (const Revival& r : score_revivals(d.trajectory, peaks, d.cavity0, c.revivals.convention)) {
        csv.row(r.peak.k, r.peak.t_peak_ns, r.peak.photon_number, r.fidelity, to_string(r.kind));
    }
}

void cmd_sweep(const Context& ctx) {
    const RunConfig& c = ctx.config;
    if (c.comb.envelope != Envelope::Kind::gaussian) {
        throw ValidationError("comb.envelope must be gaussian for a lambda sweep");
    }
    const CombTemplate tmpl = c.comb.as_template();
    std::vector<double> lambdas;
    for (std::size_t i = 0; i < c.sweep.n_points; ++i) {
        lambdas.push_back(c.sweep.n_points == 1 ? c.sweep.lambda_min_mhz
                                                 : c.sweep.lambda_min_mhz + (c.sweep.lambda_max_mhz - c.sweep.lambda_min_mhz) *
                                                                                static_cast<double>(i) /
                                                                                static_cast<double>(c.sweep.n_points - 1));
    }
    SweepOptions opt;
    opt.initial = c.state.spec;
    opt.photon_cutoff = c.basis.photon_cutoff;
    opt.exc_cutoff = c.basis.exc_cutoff;
    opt.tail_tolerance = c.state.tail_tolerance;
    opt.n_revivals = c.revivals.count;
    opt.samples_per_revival = c.sweep.samples_per_revival;
    opt.rtol = c.time.rtol;
    opt.spacing = c.sweep.spacing;
    opt.convention = c.revivals.convention;
    opt.allow_losses = c.sweep.allow_losses;
    opt.losses = c.losses;
    opt.dephasing = c.dephasing;
    opt.n_traj = c.method.n_traj;
    opt.seed = c.seed;
    opt.threads = c.threads;
    const auto records = sweep_lambda(tmpl, lambdas, opt);

    std::string columns = "lambda_mhz,mean1_mhz,std1_mhz,std2_mhz,t_rev_ns";
    for (int k = 1; k <= c.revivals.count; ++k) {
        columns += fmt::format(",t_peak{}_ns,fidelity{}", k, k);
    }
    columns += ",error";
    CsvFile csv(ctx, "sweep.csv", columns);
    for (const SweepRecord& r : records) {
        std::string line = fmt::format("{},{},{},{},{}", num(r.lambda_mhz), num(r.mean1_mhz), num(r.std1_mhz),
                                       num(r.std2_mhz), num(r.t_rev_ns));
        for (std::size_t k = 0; k < static_cast<std::size_t>(c.revivals.count); ++k) {
            if (k < r.fidelities.size()) {
                line += fmt::format(",{},{}", num(r.t_peaks_ns[k]), num(r.fidelities[k]));
            } else {
                line += ",,";
            }
        }
        std::string error = r.error;
        std::replace(error.begin(), error.end(), ',', ';');
        csv.row(line + "," + error);
    }

    if (c.sweep.optimize) {
        CsvFile best(ctx, "optimum.csv", "objective,lambda_mhz,value_mhz");
        const std::pair<double, double> bracket{c.sweep.lambda_min_mhz, c.sweep.lambda_max_mhz};
        const int coarse = static_cast<int>(std::max<std::size_t>(c.sweep.n_points, 3));
        for (const auto& [name, objective] : {std::pair{"std1", LambdaObjective::std1},
                                              std::pair{"std2", LambdaObjective::std2},
                                              std::pair{"std1_plus_std2", LambdaObjective::std1_plus_std2}}) {
            const LambdaOptimum o = optimize_lambda(tmpl, bracket, objective, c.sweep.spacing, 1.0, coarse);
            best.row(name, o.lambda_mhz, o.objective_mhz);
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(fmt::format("config: cannot read '{}'", path));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int report(std::ostream& err, int code, const char* kind, const std::string& message) {
    nlohmann::ordered_json line{{"error", kind}, {"exit_code", code}, {"message", message}};
    err << line.dump() << '\n';
    return code;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Atomic frequency comb / cavity simulator", "afc_sim"};
    app.set_version_flag("--version", AFC_SIM_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    const std::vector<std::pair<const char*, const char*>> commands{
        {"spectrum", "sector eigenvalues and spacing statistics"},
        {"evolve", "photon number (and cavity states) versus time"},
        {"wigner", "Wigner function of the cavity state at chosen times"},
        {"revivals", "revival peaks and their fidelities"},
        {"sweep", "Gaussian envelope width sweep"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "INI configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides run.out)");
        sub->add_option("--seed", seed, "random seed (overrides run.seed)");
        sub->add_option("--threads", threads, "worker threads (overrides AFC_SIM_THREADS and run.threads)")
            ->check(CLI::Range(1u, 1024u));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return report(err, 2, "usage", e.what());
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const std::string text = read_file(config_path);
        Context ctx{parse_config(text), config_hash(text), {}};
        if (seed) {
            ctx.config.seed = *seed;
        }
        if (threads) {
            ctx.config.threads = *threads;
        } else if (const char* env = std::getenv("AFC_SIM_THREADS")) {
            unsigned value = 0;
            const std::string s(env);
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
            if (ec != std::errc{} || ptr != s.data() + s.size() || value < 1 || value > 1024) {
                throw ValidationError(fmt::format("AFC_SIM_THREADS must be an integer in [1, 1024], got '{}'", s));
            }
            ctx.config.threads = value;
        }
        ctx.out_dir = out_dir.empty() ? fs::path(ctx.config.out_dir) : fs::path(out_dir);
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec) {
            throw ValidationError(fmt::format("run.out: cannot create '{}': {}", ctx.out_dir.string(), ec.message()));
        }

        if (command == "spectrum") {
            cmd_spectrum(ctx);
        } else if (command == "evolve") {
            cmd_evolve(ctx);
        } else if (command == "wigner") {
            cmd_wigner(ctx);
        } else if (command == "revivals") {
            cmd_revivals(ctx);
        } else {
            cmd_sweep(ctx);
        }
        out << fmt::format("{}: wrote {}\n", command, ctx.out_dir.string());
        return 0;
    } catch (const ValidationError& e) {
        return report(err, 2, "validation", e.what());
    } catch (const NumericalError& e) {
        return report(err, 3, "numerical", e.what());
    } catch (const std::exception& e) {
        return report(err, 3, "internal", e.what());
    }
}

} // namespace afc::cli
