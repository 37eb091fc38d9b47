#pragma once

#include <cstddef>
#include <vector>

#include "dmask/image.hpp"

namespace dmask {

// Dense reference path for small problems: explicit assembly plus a direct
// Cholesky solve. Bitwise-deterministic; the iterative solver is checked
// against it.

// Row-major n x n matrix of the mirrored 5-point Laplacian (n = w*h).
// Diagonal -deg_i, off-diagonal 1 per in-range neighbour; rows sum to zero.
std::vector<double> assemble_dense_laplacian(int width, int height);

// Reduced inpainting system restricted to the unknown pixels of `mask`.
struct ReducedSystem {
  std::vector<std::size_t> unknowns;  // grid indices, ascending
  std::vector<double> matrix;         // row-major, unknowns x unknowns
};
ReducedSystem assemble_reduced_system(const Mask& mask);

// Smallest eigenvalue of the reduced system via inverse power iteration on
// the Cholesky factorisation. Throws if the factorisation hits a nonpositive
// pivot (matrix not positive definite).
double reduced_min_eigenvalue(const Mask& mask);

// Direct inpainting solve; requires width*height <= 4096.
Image dense_solve_oracle(const Image& f, const Mask& mask);

}  // namespace dmask
