#include "mvlab/gellmann.hpp"

#include <cmath>

namespace mvlab {

int gellmann_count(int d) { return d * d - 1; }

GellmannSlot gellmann_slot(int d, int alpha) {
  if (d < 2 || alpha < 1 || alpha > gellmann_count(d))
    throw std::invalid_argument("gellmann: alpha out of range");
  int idx = 0;
  for (int k = 1; k < d; ++k) {
    for (int j = 0; j < k; ++j) {
      if (++idx == alpha) return {j, k, true, false, -1};
      if (++idx == alpha) return {j, k, false, false, -1};
    }
    if (++idx == alpha) return {-1, -1, false, true, k};
  }
  throw std::logic_error("gellmann_slot: enumeration error");
}

MatrixXcd gellmann(int d, int alpha) {
  const GellmannSlot slot = gellmann_slot(d, alpha);
  MatrixXcd g = MatrixXcd::Zero(d, d);
  if (slot.diagonal) {
    const int k = slot.diag_level;
    const double a = std::sqrt(2.0 / (k * (k + 1.0)));
    for (int i = 0; i < k; ++i) g(i, i) = a;
    g(k, k) = -a * k;
  } else if (slot.symmetric) {
    g(slot.j, slot.k) = 1.0;
    g(slot.k, slot.j) = 1.0;
  } else {
    g(slot.j, slot.k) = Complex(0.0, -1.0);
    g(slot.k, slot.j) = Complex(0.0, 1.0);
  }
  return g;
}

int pauli_index_map(int alpha_f) {
  switch (alpha_f) {
    case 1: return 3;  // diagonal
    case 2: return 1;  // real off-diagonal
    case 3: return 2;  // imaginary off-diagonal
  }
  throw std::invalid_argument("pauli_index_map: alpha must be 1..3");
}

}  // namespace mvlab
