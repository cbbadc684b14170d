// wigner.hpp: Wigner function of a truncated cavity density matrix

#pragma once

#include "afc/cavity.hpp"

namespace afc {

struct WignerGridSpec {
    double re_min{-4.0};
    double re_max{4.0};
    double im_min{-4.0};
    double im_max{4.0};
    int resolution{81}; // points per axis
};

struct WignerGrid {
    WignerGridSpec spec;
    Eigen::MatrixXd values; // values(i, j) = W(re_i + i im_j)

    double re(Eigen::Index i) const;
    double im(Eigen::Index j) const;
    double cell_area() const;
    /// Riemann sum of W over the grid.
    double integral() const;
};

/// W(alpha) = (2/pi) Tr[rho D(alpha) Pi D(alpha)^dag], normalized so that the
/// integral over the complex plane is one (vacuum: W(0) = 2/pi).
double wigner_at(const CavityMatrix& rho, Complex alpha);

WignerGrid wigner(const CavityMatrix& rho, const WignerGridSpec& spec = {});

/// W(-alpha) on the same grid; requires a grid symmetric about the origin.
WignerGrid point_reflect(const WignerGrid& grid);

} // namespace afc
