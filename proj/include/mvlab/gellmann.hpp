#pragma once

// Generalized Gell-Mann generators of SU(d), normalized to Tr(g_a g_b) =
// 2*delta_ab.  Classic enumeration: for k = 1..d-1 first the symmetric and
// antisymmetric pair matrices (j,k) for j < k, then the k-th diagonal
// generator.  d=2 gives (sigma_x, sigma_y, sigma_z); d=3 the eight Gell-Mann
// matrices in their usual order.
//
// The d=2 operators of the source formalism use the index order (diagonal,
// real off-diagonal, imaginary off-diagonal) = (lambda_3, lambda_1, lambda_2);
// see pauli_index_map.

#include "mvlab/grid.hpp"

namespace mvlab {

MatrixXcd gellmann(int d, int alpha);  // alpha in [1, d^2-1]
int gellmann_count(int d);

// Maps the formalism's d=2 index (1=diagonal, 2=real swap, 3=imaginary swap)
// to the standard generator index.
int pauli_index_map(int alpha_f);

// Which ordered pair (j,k), j<k, an off-diagonal generator acts on, and
// whether it is the symmetric member; diagonal generators return j=k=-1.
struct GellmannSlot {
  int j = -1, k = -1;
  bool symmetric = false;
  bool diagonal = false;
  int diag_level = -1;
};
GellmannSlot gellmann_slot(int d, int alpha);

}  // namespace mvlab
