#pragma once

#include <vector>

#include "stf/linalg.hpp"

namespace stf {

/// Eigenvalues of a small symmetric matrix (N <= 3) obtained from the
/// characteristic polynomial: closed form for N <= 2, interval bisection on
/// the cubic for N = 3. Shares no code with the Jacobi solver, so it serves
/// as an independent cross-check. Returned sorted descending.
std::vector<double> charpoly_eigenvalues(const SymMat& m);

} // namespace stf
