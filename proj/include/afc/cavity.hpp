// cavity.hpp: reduced cavity state, photon number, parity and fidelity

#pragma once

#include <cstddef>
#include <vector>

#include "afc/basis.hpp"
#include "afc/common.hpp"

namespace afc {

/// Reduced cavity density matrix on Fock levels 0..cutoff.
using CavityMatrix = Eigen::MatrixXcd;

/// Partial trace over the spin labels of a BasisTable.
///
/// Basis states sharing a spin configuration q are grouped once, so
/// (rho_cav)_{n n'} = sum_q <n q| rho |n' q> only visits pairs inside a group.
class CavityReducer {
public:
    explicit CavityReducer(const BasisTable& basis);

    int cutoff() const { return cutoff_; }
    std::size_t basis_size() const { return basis_size_; }

    CavityMatrix reduce(const Eigen::VectorXcd& psi) const;
    CavityMatrix reduce(const Eigen::MatrixXcd& rho) const;

    /// <n_c> directly from the full state, without forming rho_cav.
    double photon_number(const Eigen::VectorXcd& psi) const;

private:
    struct Member {
        int photons;
        Eigen::Index index;
    };

    int cutoff_;
    std::size_t basis_size_;
    std::vector<std::size_t> group_offsets_;
    std::vector<Member> members_;
};

inline CavityMatrix reduce_cavity(const BasisTable& basis, const Eigen::VectorXcd& psi) {
    return CavityReducer(basis).reduce(psi);
}
inline CavityMatrix reduce_cavity(const BasisTable& basis, const Eigen::MatrixXcd& rho) {
    return CavityReducer(basis).reduce(rho);
}

/// Tr(rho n).
double photon_number(const CavityMatrix& rho);

/// Pi rho Pi with Pi = diag((-1)^n).
CavityMatrix parity_transform(const CavityMatrix& rho);
Eigen::VectorXcd parity_transform(const Eigen::VectorXcd& psi);

enum class FidelityConvention {
    root,            // sqrt(<psi|rho|psi>), Uhlmann fidelity for a pure target
    squared_overlap, // <psi|rho|psi>
};

/// Fidelity of rho with a pure target; the smaller dimension is zero-padded.
double fidelity(const CavityMatrix& rho, const Eigen::VectorXcd& target,
                FidelityConvention convention = FidelityConvention::root);

struct DensityDiagnostics {
    double trace_error;       // |Tr rho - 1|
    double hermiticity_error; // max |rho - rho^dag|
    double min_eigenvalue;
};

DensityDiagnostics diagnose(const Eigen::MatrixXcd& rho);

} // namespace afc
