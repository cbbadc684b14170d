#include "afc/trajectories.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "afc/integrator.hpp"

namespace afc {

namespace {

// Trajectories are summed in blocks of this many, blocks in index order.
constexpr std::size_t kBlock = 16;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Accumulator {
    std::vector<double> n_sum;
    std::vector<double> n_sq_sum;
    std::vector<CavityMatrix> rho_sum;

    Accumulator(std::size_t n_times, bool with_states, int cutoff)
        : n_sum(n_times, 0.0), n_sq_sum(n_times, 0.0) {
        if (with_states) {
            rho_sum.assign(n_times, CavityMatrix::Zero(cutoff + 1, cutoff + 1));
        }
    }

    void add(const Accumulator& other) {
        for (std::size_t i = 0; i < n_sum.size(); ++i) {
            n_sum[i] += other.n_sum[i];
            n_sq_sum[i] += other.n_sq_sum[i];
        }
        for (std::size_t i = 0; i < rho_sum.size(); ++i) {
            rho_sum[i] += other.rho_sum[i];
        }
    }
};

class TrajectoryRunner {
public:
    TrajectoryRunner(const SparseMatrix& hamiltonian, const BasisTable& basis,
                     std::span<const Dissipator> dissipators, std::span<const double> t_grid,
                     const TrajectoryOptions& options)
        : dissipators_(dissipators), t_grid_(t_grid), options_(options), reducer_(basis) {
        effective_ = hamiltonian;
        for (const Dissipator& d : dissipators_) {
            if (d.rate > 0.0) {
                effective_ -= SparseMatrix(Complex(0.0, 0.5 * d.rate) * (d.op.adjoint() * d.op));
                has_jumps_ = true;
            }
        }
        effective_.makeCompressed();
    }

    // Runs trajectory `index` and adds its snapshots to `acc`.
    void run(std::size_t index, const Eigen::VectorXcd& psi0, Accumulator& acc) const {
        std::mt19937_64 rng(options_.seed + index);
        const Complex minus_i(0.0, -1.0);
        DormandPrince45 integrator(
            [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
                dy.noalias() = effective_ * y;
                dy *= minus_i;
            },
            {options_.rtol, options_.atol});
        integrator.reset(0.0, psi0);

        double threshold = 1.0 - uniform01(rng);
        Eigen::VectorXcd snapshot(psi0.size());
        std::size_t next = 0;

        const auto record = [&](std::size_t i, const Eigen::VectorXcd& psi) {
            if (has_jumps_) {
                snapshot = psi / psi.norm();
            } else {
                snapshot = psi;
            }
            const double n = reducer_.photon_number(snapshot);
            acc.n_sum[i] += n;
            acc.n_sq_sum[i] += n * n;
            if (!acc.rho_sum.empty()) {
                acc.rho_sum[i] += reducer_.reduce(snapshot);
            }
        };

        Eigen::VectorXcd probe(psi0.size());
        while (next < t_grid_.size() && t_grid_[next] == 0.0) {
            record(next++, psi0);
        }
        while (next < t_grid_.size()) {
            integrator.step(t_grid_.back());
            double t_end = integrator.t();
            bool jumped = false;
            if (has_jumps_ && integrator.y().squaredNorm() < threshold) {
                t_end = jump_time(integrator, threshold, probe);
                jumped = true;
            }
            while (next < t_grid_.size() && t_grid_[next] <= t_end) {
                if (t_grid_[next] == integrator.t() && !jumped) {
                    record(next, integrator.y());
                } else {
                    integrator.interpolate(t_grid_[next], probe);
                    record(next, probe);
                }
                ++next;
            }
            if (jumped) {
                integrator.interpolate(t_end, probe);
                integrator.reset(t_end, apply_jump(probe, rng));
                threshold = 1.0 - uniform01(rng);
            }
        }
    }

private:
    // Bisection on the dense output for |psi(t)|^2 = threshold inside the last step.
    static double jump_time(const DormandPrince45& integrator, double threshold, Eigen::VectorXcd& probe) {
        double lo = integrator.t_prev();
        double hi = integrator.t();
        for (int iter = 0; iter < 60 && hi - lo > 1e-13 * std::max(1.0, hi); ++iter) {
            const double mid = 0.5 * (lo + hi);
            integrator.interpolate(mid, probe);
            if (probe.squaredNorm() < threshold) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return hi;
    }

    Eigen::VectorXcd apply_jump(const Eigen::VectorXcd& psi, std::mt19937_64& rng) const {
        std::vector<Eigen::VectorXcd> candidates;
        std::vector<double> weights;
        double total = 0.0;
        for (const Dissipator& d : dissipators_) {
            if (d.rate <= 0.0) {
                continue;
            }
            candidates.emplace_back(d.op * psi);
            weights.push_back(d.rate * candidates.back().squaredNorm());
            total += weights.back();
        }
        if (!(total > 0.0)) {
            throw NumericalError("quantum jump requested but every channel has zero weight");
        }
        const double pick = uniform01(rng) * total;
        double running = 0.0;
        std::size_t chosen = candidates.size() - 1;
        for (std::size_t j = 0; j < weights.size(); ++j) {
            running += weights[j];
            if (pick < running) {
                chosen = j;
                break;
            }
        }
        return candidates[chosen] / candidates[chosen].norm();
    }

    SparseMatrix effective_;
    bool has_jumps_{false};
    std::span<const Dissipator> dissipators_;
    std::span<const double> t_grid_;
    TrajectoryOptions options_;
    CavityReducer reducer_;
};

} // namespace

Trajectory evolve_trajectories(const SparseMatrix& hamiltonian, const BasisTable& basis,
                               std::span<const Dissipator> dissipators, const Eigen::VectorXcd& psi0,
                               std::span<const double> t_grid, const TrajectoryOptions& options) {
    validate_time_grid(t_grid);
    if (options.n_traj == 0) {
        throw ValidationError("method.n_traj must be positive");
    }
    if (static_cast<std::size_t>(psi0.size()) != basis.size() ||
        hamiltonian.rows() != static_cast<Eigen::Index>(basis.size())) {
        throw ValidationError("initial state, hamiltonian and basis dimensions differ");
    }
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
        throw ValidationError("initial state is not normalized");
    }

    const TrajectoryRunner runner(hamiltonian, basis, dissipators, t_grid, options);
    const std::size_t n_blocks = (options.n_traj + kBlock - 1) / kBlock;
    std::vector<Accumulator> blocks;
    blocks.reserve(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        blocks.emplace_back(t_grid.size(), options.record_cavity_states, basis.photon_cutoff());
    }

    std::atomic<std::size_t> next_block{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        try {
            for (std::size_t b = next_block++; b < n_blocks; b = next_block++) {
                const std::size_t end = std::min(options.n_traj, (b + 1) * kBlock);
                for (std::size_t i = b * kBlock; i < end; ++i) {
                    runner.run(i, psi0, blocks[b]);
                }
            }
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next_block = n_blocks;
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_blocks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    Accumulator total(t_grid.size(), options.record_cavity_states, basis.photon_cutoff());
    for (const Accumulator& block : blocks) {
        total.add(block);
    }

    const double n = static_cast<double>(options.n_traj);
    Trajectory out;
    out.n_traj = options.n_traj;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.photon_number.resize(t_grid.size());
    out.photon_number_stderr.resize(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double mean = total.n_sum[i] / n;
        const double var = options.n_traj > 1 ? std::max(0.0, (total.n_sq_sum[i] - n * mean * mean) / (n - 1.0)) : 0.0;
        out.photon_number[i] = mean;
        out.photon_number_stderr[i] = std::sqrt(var / n);
    }
    for (CavityMatrix& rho : total.rho_sum) {
        rho /= n;
        out.max_drift = std::max(out.max_drift, std::abs(rho.trace() - Complex(1.0)));
        out.cavity_states.push_back(std::move(rho));
    }
    return out;
}

} // namespace afc
