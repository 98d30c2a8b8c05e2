#include "cocycle_lab/mat2.hpp"

#include "cocycle_lab/error.hpp"

namespace cocycle_lab {

double spectral_norm(const Mat2& m) {
  if (!m.finite()) throw Error(ErrorKind::invalid_input, "matrix has non-finite entries");
  return spectral_norm_unchecked(m);
}

Mat2 inverse(const Mat2& m) {
  const double d = m.det();
  if (!(std::abs(d) > 1e-300)) throw Error(ErrorKind::singular_matrix, "determinant is zero or subnormal");
  const Mat2 adj{m.a22, -m.a12, -m.a21, m.a11};
  if (d == 1.0) return adj;
  return {adj.a11 / d, adj.a12 / d, adj.a21 / d, adj.a22 / d};
}

bool is_sl2(const Mat2& m, double rel_tol) {
  return std::abs(m.det() - 1.0) <= rel_tol * std::max(1.0, m.frobenius_sq());
}

}  // namespace cocycle_lab
