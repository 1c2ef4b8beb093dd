#pragma once

#include <random>

#include "sdc/linalg.hpp"

namespace sdc::testing {

inline ComplexMatrix random_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(g(gen), g(gen));
  return m;
}

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& gen) {
  const ComplexMatrix a = random_matrix(dim, dim, gen);
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_density(int dim, std::mt19937_64& gen) {
  const ComplexMatrix a = random_matrix(dim, dim, gen);
  const ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace sdc::testing
