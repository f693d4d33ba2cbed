#include "ks1d/tridiag.hpp"

#include <cmath>
#include <limits>

#include "ks1d/errors.hpp"

namespace ks1d {

std::vector<double> matvec(const SymTridiag& a, std::span<const double> x) {
    const std::size_t n = a.dim();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = a.diag[i] * x[i];
        if (i > 0) s += a.off[i - 1] * x[i - 1];
        if (i + 1 < n) s += a.off[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> solve_spd(const SymTridiag& a, std::vector<double> rhs) {
    const std::size_t n = a.dim();
    if (rhs.size() != n) throw InvalidRequestError("solve_spd: rhs dimension mismatch");
    if (n == 0) return rhs;

    std::vector<double> c(n > 1 ? n - 1 : 0);
    double piv = a.diag[0];
    if (!(piv > 0.0)) throw NumericalError("solve_spd: matrix is not positive definite");
    rhs[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        c[i - 1] = a.off[i - 1] / piv;
        piv = a.diag[i] - a.off[i - 1] * c[i - 1];
        if (!(piv > 0.0)) throw NumericalError("solve_spd: matrix is not positive definite");
        rhs[i] = (rhs[i] - a.off[i - 1] * rhs[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
    return rhs;
}

ShiftedTridiagLU::ShiftedTridiagLU(const SymTridiag& a, double shift) {
    const std::size_t n = a.dim();
    d_.resize(n);
    dl_.assign(n > 1 ? n - 1 : 0, 0.0);
    du_.assign(n > 1 ? n - 1 : 0, 0.0);
    du2_.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped_.assign(n > 1 ? n - 1 : 0, 0);

    double max_off = 0.0;
    for (double e : a.off) max_off = std::max(max_off, std::fabs(e));
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, max_off * max_off);

    for (std::size_t i = 0; i < n; ++i) d_[i] = a.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) dl_[i] = du_[i] = a.off[i];

    // Gaussian elimination with partial pivoting, one superdiagonal of fill-in.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
            double piv = d_[i];
            if (std::fabs(piv) < pivmin) piv = (piv < 0.0 ? -pivmin : pivmin);
            const double fact = dl_[i] / piv;
            d_[i] = piv;
            dl_[i] = fact;
            d_[i + 1] -= fact * du_[i];
            if (i + 2 < n) du2_[i] = 0.0;
        } else {
            const double fact = d_[i] / dl_[i];
            d_[i] = dl_[i];
            dl_[i] = fact;
            const double tmp = du_[i];
            du_[i] = d_[i + 1];
            d_[i + 1] = tmp - fact * d_[i + 1];
            if (i + 2 < n) {
                du2_[i] = du_[i + 1];
                du_[i + 1] = -fact * du_[i + 1];
            }
            swapped_[i] = 1;
        }
    }
    if (n > 0 && std::fabs(d_[n - 1]) < pivmin)
        d_[n - 1] = (d_[n - 1] < 0.0 ? -pivmin : pivmin);
}

void ShiftedTridiagLU::solve_in_place(std::vector<double>& x) const {
    const std::size_t n = d_.size();
    if (x.size() != n) throw InvalidRequestError("ShiftedTridiagLU: rhs dimension mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!swapped_[i]) {
            x[i + 1] -= dl_[i] * x[i];
        } else {
            const double tmp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = tmp - dl_[i] * x[i + 1];
        }
    }
    x[n - 1] /= d_[n - 1];
    if (n > 1) x[n - 2] = (x[n - 2] - du_[n - 2] * x[n - 1]) / d_[n - 2];
    for (std::size_t j = (n >= 3 ? n - 2 : 0); j-- > 0;)
        x[j] = (x[j] - du_[j] * x[j + 1] - du2_[j] * x[j + 2]) / d_[j];
}

}  // namespace ks1d
