#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ks1d {

// Symmetric tridiagonal matrix; diag has the full dimension, off one entry less.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t dim() const { return diag.size(); }
};

std::vector<double> matvec(const SymTridiag& a, std::span<const double> x);

// Thomas solve; requires a symmetric positive definite matrix.
std::vector<double> solve_spd(const SymTridiag& a, std::vector<double> rhs);

// LU factorization with partial pivoting of (A - shift*I). Near-singular
// shifts are admitted; zero pivots are replaced by a tiny signed value so the
// backward substitution amplifies instead of dividing by zero.
class ShiftedTridiagLU {
  public:
    ShiftedTridiagLU(const SymTridiag& a, double shift);

    void solve_in_place(std::vector<double>& x) const;

  private:
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<unsigned char> swapped_;
};

}  // namespace ks1d
