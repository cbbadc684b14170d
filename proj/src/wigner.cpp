#include "afc/wigner.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace afc {

double WignerGrid::re(Eigen::Index i) const {
    return spec.re_min + (spec.re_max - spec.re_min) * static_cast<double>(i) / (spec.resolution - 1);
}

double WignerGrid::im(Eigen::Index j) const {
    return spec.im_min + (spec.im_max - spec.im_min) * static_cast<double>(j) / (spec.resolution - 1);
}

double WignerGrid::cell_area() const {
    const double dre = (spec.re_max - spec.re_min) / (spec.resolution - 1);
    const double dim = (spec.im_max - spec.im_min) / (spec.resolution - 1);
    return dre * dim;
}

double WignerGrid::integral() const { return values.sum() * cell_area(); }

double wigner_at(const CavityMatrix& rho, Complex alpha) {
    // Entries of D(alpha) Pi D(alpha)^dag in the Fock basis follow from the
    // associated-Laguerre recurrences; w[n] walks row m of that matrix
    // (times e^{-2|alpha|^2}/pi) while m increases.
    const Eigen::Index dim = rho.rows();
    std::vector<Complex> w(static_cast<std::size_t>(dim));
    w[0] = std::exp(-2.0 * std::norm(alpha)) / std::numbers::pi;
    double total = rho(0, 0).real() * w[0].real();
    for (Eigen::Index n = 1; n < dim; ++n) {
        const auto un = static_cast<std::size_t>(n);
        w[un] = 2.0 * alpha * w[un - 1] / std::sqrt(static_cast<double>(n));
        total += 2.0 * (rho(0, n) * w[un]).real();
    }
    for (Eigen::Index m = 1; m < dim; ++m) {
        const auto um = static_cast<std::size_t>(m);
        const double sm = std::sqrt(static_cast<double>(m));
        Complex previous = w[um];
        w[um] = (2.0 * std::conj(alpha) * previous - sm * w[um - 1]) / sm;
        total += (rho(m, m) * w[um]).real();
        for (Eigen::Index n = m + 1; n < dim; ++n) {
            const auto un = static_cast<std::size_t>(n);
            const Complex next = (2.0 * alpha * w[un - 1] - sm * previous) / std::sqrt(static_cast<double>(n));
            previous = w[un];
            w[un] = next;
            total += 2.0 * (rho(m, n) * w[un]).real();
        }
    }
    return 2.0 * total;
}

WignerGrid wigner(const CavityMatrix& rho, const WignerGridSpec& spec) {
    if (spec.resolution < 2 || !(spec.re_max > spec.re_min) || !(spec.im_max > spec.im_min)) {
        throw ValidationError("wigner grid needs resolution >= 2 and non-empty ranges");
    }
    WignerGrid grid{spec, Eigen::MatrixXd(spec.resolution, spec.resolution)};
    for (Eigen::Index i = 0; i < spec.resolution; ++i) {
        for (Eigen::Index j = 0; j < spec.resolution; ++j) {
            grid.values(i, j) = wigner_at(rho, Complex(grid.re(i), grid.im(j)));
        }
    }
    return grid;
}

WignerGrid point_reflect(const WignerGrid& grid) {
    const auto& s = grid.spec;
    if (std::abs(s.re_min + s.re_max) > 1e-12 || std::abs(s.im_min + s.im_max) > 1e-12) {
        throw ValidationError("point reflection needs a grid symmetric about the origin");
    }
    WignerGrid out = grid;
    out.values = grid.values.reverse();
    return out;
}

} // namespace afc
