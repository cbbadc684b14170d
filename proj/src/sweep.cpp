#include "afc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "afc/basis.hpp"
#include "afc/evolution.hpp"
#include "afc/hamiltonian.hpp"
#include "afc/revivals.hpp"
#include "afc/trajectories.hpp"

namespace afc {

namespace {

SpacingOptions resolve_spacing(const CombTemplate& comb, SpacingOptions spacing) {
    if (spacing.mode == SpacingMode::bands && spacing.band_gap_mhz <= 0.0) {
        spacing.band_gap_mhz = 0.5 * comb.delta_nu_mhz;
    }
    return spacing;
}

double objective_value(const SpacingProfile& p, LambdaObjective objective) {
    switch (objective) {
    case LambdaObjective::std1:
        return p.sector1.std_mhz;
    case LambdaObjective::std2:
        return p.sector2.std_mhz;
    case LambdaObjective::std1_plus_std2:
        break;
    }
    return p.sector1.std_mhz + p.sector2.std_mhz;
}

} // namespace

SpacingOptions band_spacing(const CombTemplate& comb) { return {SpacingMode::bands, 0.5 * comb.delta_nu_mhz}; }

SpacingProfile spacing_profile(const CombTemplate& comb, double lambda_mhz, const SpacingOptions& spacing) {
    const CombSpec spec = comb.with_lambda(lambda_mhz);
    const BasisTable basis(spec, 2, 2);
    const SparseMatrix h = assemble_hamiltonian(spec, basis);
    const SpacingOptions resolved = resolve_spacing(comb, spacing);
    SpacingProfile out;
    out.lambda_mhz = lambda_mhz;
    out.sector1 = spacing_stats(sector_spectrum(h, basis, 1), SpacingOptions{});
    out.sector2 = spacing_stats(sector_spectrum(h, basis, 2), resolved);
    return out;
}

SweepRecord sweep_point(const CombTemplate& comb, double lambda_mhz, const SweepOptions& options) {
    if (!(comb.omega0_mhz > 0.0)) {
        throw ValidationError("sweep needs comb.omega0 > 0");
    }
    if (options.n_revivals < 1 || options.samples_per_revival < 20) {
        throw ValidationError("sweep needs n_revivals >= 1 and samples_per_revival >= 20");
    }
    options.losses.validate();
    if (!options.losses.lossless() && !options.allow_losses) {
        throw ValidationError("sweep with non-zero loss rates requires allow_losses");
    }

    const SpacingProfile profile = spacing_profile(comb, lambda_mhz, options.spacing);
    SweepRecord record;
    record.lambda_mhz = lambda_mhz;
    record.mean1_mhz = profile.sector1.mean_mhz;
    record.std1_mhz = profile.sector1.std_mhz;
    record.std2_mhz = profile.sector2.std_mhz;
    record.t_rev_ns = profile.sector1.t_rev_ns;

    const int photon_cutoff =
        options.photon_cutoff >= 0 ? options.photon_cutoff : default_photon_cutoff(options.initial);
    const int exc_cutoff = options.exc_cutoff >= 0 ? options.exc_cutoff : photon_cutoff;
    const CombSpec spec = comb.with_lambda(lambda_mhz);
    const BasisTable basis(spec, photon_cutoff, exc_cutoff);
    const SparseMatrix h = assemble_hamiltonian(spec, basis);
    const Eigen::VectorXcd cavity0 = prepare_cavity_state(options.initial, photon_cutoff, options.tail_tolerance);
    const Eigen::VectorXcd psi0 = product_with_spin_vacuum(basis, cavity0);

    const double t_end = 1.25 * options.n_revivals * record.t_rev_ns;
    const auto n_points = static_cast<std::size_t>(std::ceil(1.25 * options.n_revivals * options.samples_per_revival)) + 1;
    const std::vector<double> grid = uniform_grid(t_end, n_points);

    Trajectory traj;
    if (options.losses.lossless()) {
        traj = evolve_closed(h, basis, psi0, grid, EvolutionOptions{options.rtol, 1e-12, true});
    } else {
        const auto dissipators = make_dissipators(jump_operators(spec, basis), options.losses, options.dephasing);
        if (basis.size() <= kDenseLindbladMaxDim) {
            const SparseMatrix l = build_liouvillian(h, dissipators);
            traj = evolve_lindblad_dense(l, basis, psi0 * psi0.adjoint(), grid,
                                         EvolutionOptions{std::max(options.rtol, 1e-8), 1e-12, true});
        } else {
            TrajectoryOptions topt;
            topt.n_traj = options.n_traj;
            topt.seed = options.seed;
            topt.rtol = std::max(options.rtol, 1e-8);
            traj = evolve_trajectories(h, basis, dissipators, psi0, grid, topt);
        }
    }

    try {
        const auto peaks = detect_revivals(traj, record.t_rev_ns, options.n_revivals);
        for (const Revival& r : score_revivals(traj, peaks, cavity0, options.convention)) {
            record.t_peaks_ns.push_back(r.peak.t_peak_ns);
            record.fidelities.push_back(r.fidelity);
        }
    } catch (const NumericalError& e) {
        record.error = e.what();
        record.t_peaks_ns.clear();
        record.fidelities.clear();
    }
    return record;
}

std::vector<SweepRecord> sweep_lambda(const CombTemplate& comb, std::span<const double> lambdas_mhz,
                                      const SweepOptions& options) {
    std::vector<SweepRecord> out(lambdas_mhz.size());
    std::vector<std::exception_ptr> errors(lambdas_mhz.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < lambdas_mhz.size(); i = next++) {
            try {
                out[i] = sweep_point(comb, lambdas_mhz[i], options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(lambdas_mhz.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < n_threads; ++k) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

LambdaOptimum optimize_lambda(const CombTemplate& comb, std::pair<double, double> bracket_mhz,
                              LambdaObjective objective, const SpacingOptions& spacing, double resolution_mhz,
                              int coarse_points) {
    auto [lo, hi] = bracket_mhz;
    if (!(lo > 0.0) || !(hi > lo)) {
        throw ValidationError("lambda bracket must satisfy 0 < lo < hi");
    }
    if (coarse_points < 3 || !(resolution_mhz > 0.0)) {
        throw ValidationError("optimize_lambda needs coarse_points >= 3 and resolution > 0");
    }
    auto f = [&](double lambda) { return objective_value(spacing_profile(comb, lambda, spacing), objective); };

    std::vector<double> xs(static_cast<std::size_t>(coarse_points));
    std::vector<double> fs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / (coarse_points - 1);
        fs[i] = f(xs[i]);
    }
    const auto best = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const auto [fmin, fmax] = std::minmax_element(fs.begin(), fs.end());
    if (best == 0 || best + 1 == xs.size() || *fmax - *fmin < 1e-12) {
        throw NumericalError(fmt::format("no interior minimum of the spacing std in [{:.6g}, {:.6g}] MHz", lo, hi));
    }

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = xs[best - 1];
    double b = xs[best + 1];
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > resolution_mhz) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    LambdaOptimum out{0.5 * (a + b), 0.0};
    out.objective_mhz = f(out.lambda_mhz);
    if (fs[best] < out.objective_mhz) {
        out = {xs[best], fs[best]};
    }
    return out;
}

} // namespace afc
