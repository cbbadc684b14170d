#include "afc/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace afc {

CavityReducer::CavityReducer(const BasisTable& basis)
    : cutoff_(basis.photon_cutoff()), basis_size_(basis.size()) {
    std::vector<std::size_t> order(basis.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Sort by spin configuration, photons last, so equal-q states are adjacent.
    const auto spin_key = [&](std::size_t i) {
        const auto s = basis.state(i);
        return s.subspan(1);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto qa = spin_key(a);
        const auto qb = spin_key(b);
        return std::lexicographical_compare(qa.begin(), qa.end(), qb.begin(), qb.end());
    });

    members_.reserve(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t i = order[pos];
        if (pos == 0 || !std::ranges::equal(spin_key(order[pos - 1]), spin_key(i))) {
            group_offsets_.push_back(members_.size());
        }
        members_.push_back({basis.photons(i), static_cast<Eigen::Index>(i)});
    }
    group_offsets_.push_back(members_.size());
}

CavityMatrix CavityReducer::reduce(const Eigen::VectorXcd& psi) const {
    if (static_cast<std::size_t>(psi.size()) != basis_size_) {
        throw ValidationError(fmt::format("state has dimension {}, basis has {}", psi.size(), basis_size_));
    }
    CavityMatrix rho = CavityMatrix::Zero(cutoff_ + 1, cutoff_ + 1);
    for (std::size_t g = 0; g + 1 < group_offsets_.size(); ++g) {
        for (std::size_t a = group_offsets_[g]; a < group_offsets_[g + 1]; ++a) {
            const Complex amp = psi[members_[a].index];
            for (std::size_t b = group_offsets_[g]; b < group_offsets_[g + 1]; ++b) {
                rho(members_[a].photons, members_[b].photons) += amp * std::conj(psi[members_[b].index]);
            }
        }
    }
    return rho;
}

CavityMatrix CavityReducer::reduce(const Eigen::MatrixXcd& rho_full) const {
    if (static_cast<std::size_t>(rho_full.rows()) != basis_size_ || rho_full.rows() != rho_full.cols()) {
        throw ValidationError(fmt::format("density matrix is {}x{}, basis has {} states", rho_full.rows(),
                                          rho_full.cols(), basis_size_));
    }
    CavityMatrix rho = CavityMatrix::Zero(cutoff_ + 1, cutoff_ + 1);
    for (std::size_t g = 0; g + 1 < group_offsets_.size(); ++g) {
        for (std::size_t a = group_offsets_[g]; a < group_offsets_[g + 1]; ++a) {
            for (std::size_t b = group_offsets_[g]; b < group_offsets_[g + 1]; ++b) {
                rho(members_[a].photons, members_[b].photons) += rho_full(members_[a].index, members_[b].index);
            }
        }
    }
    return rho;
}

double CavityReducer::photon_number(const Eigen::VectorXcd& psi) const {
    double n = 0.0;
    for (const Member& m : members_) {
        n += m.photons * std::norm(psi[m.index]);
    }
    return n;
}

double photon_number(const CavityMatrix& rho) {
    double n = 0.0;
    for (Eigen::Index i = 1; i < rho.rows(); ++i) {
        n += static_cast<double>(i) * rho(i, i).real();
    }
    return n;
}

CavityMatrix parity_transform(const CavityMatrix& rho) {
    CavityMatrix out = rho;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            if ((i + j) % 2 != 0) {
                out(i, j) = -rho(i, j);
            }
        }
    }
    return out;
}

Eigen::VectorXcd parity_transform(const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd out = psi;
    for (Eigen::Index n = 1; n < psi.size(); n += 2) {
        out[n] = -psi[n];
    }
    return out;
}

double fidelity(const CavityMatrix& rho, const Eigen::VectorXcd& target, FidelityConvention convention) {
    if (std::abs(target.squaredNorm() - 1.0) > 1e-8) {
        throw ValidationError(fmt::format("fidelity target is not normalized (|psi|^2 = {:.12g})",
                                          target.squaredNorm()));
    }
    // Zero padding of the smaller operand is the same as truncating to the common block.
    const Eigen::Index dim = std::min<Eigen::Index>(rho.rows(), target.size());
    const Complex overlap =
        target.head(dim).adjoint() * rho.topLeftCorner(dim, dim) * target.head(dim);
    const double f = std::clamp(overlap.real(), 0.0, 1.0);
    return convention == FidelityConvention::root ? std::sqrt(f) : f;
}

DensityDiagnostics diagnose(const Eigen::MatrixXcd& rho) {
    DensityDiagnostics d{};
    d.trace_error = std::abs(rho.trace() - Complex(1.0));
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

} // namespace afc
