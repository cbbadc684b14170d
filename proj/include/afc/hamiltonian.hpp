// hamiltonian.hpp: Tavis-Cummings Hamiltonian and jump operators over a BasisTable

#pragma once

#include <iosfwd>
#include <vector>

#include "afc/basis.hpp"
#include "afc/comb.hpp"
#include "afc/common.hpp"

namespace afc {

enum class Frame {
    rotating, // cavity frequency removed: Delta_c = 0, Delta_mu = 2 pi mu delta_nu
    lab,      // adds 2 pi nu_c per excitation
};

/// H = D_c n_c + sum_mu D_mu q_mu + sum_mu (Omega_mu / sqrt(N')) (J+_mu a + J-_mu a^dag)
/// in rad/ns. The constant -(N'/2) omega_Sigma offset is dropped.
SparseMatrix assemble_hamiltonian(const CombSpec& comb, const BasisTable& basis,
                                  Frame frame = Frame::rotating);

/// Total excitation number n_c + sum_mu q_mu as a diagonal operator.
SparseMatrix excitation_number(const BasisTable& basis);

/// Cavity photon number n_c as a diagonal operator.
SparseMatrix photon_number_operator(const BasisTable& basis);

enum class JumpKind {
    cavity_decay,   // a
    spin_decay,     // J-_mu / sqrt(N')
    spin_dephasing, // J^z_mu
};

struct JumpOperator {
    SparseMatrix op;
    JumpKind kind;
    int tooth; // -1 for the cavity
};

/// Cavity lowering followed by one collective lowering and one collective
/// dephasing carrier per tooth. Rates are attached separately (see lindblad.hpp).
std::vector<JumpOperator> jump_operators(const CombSpec& comb, const BasisTable& basis);

/// max |A - A^dag| / max |A| (0 for the zero matrix).
double hermiticity_defect(const SparseMatrix& a);

/// Coordinate list, one "row col re im" line per stored entry, row-major order.
void write_coordinate_list(std::ostream& os, const SparseMatrix& a);

} // namespace afc
