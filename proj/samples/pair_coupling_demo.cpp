// Two molecules in a linear array: qubit parameters, ground-state impurity,
// concurrence, and the CNOT built from the conditional frequency shift.

#include <cstdio>
#include <numbers>

#include "polarq/polarq.hpp"

int main() {
  using namespace polarq;
  const double x = 2.0, omega = 1e-3;

  const QubitPair qp = qubit_pair(x);
  std::printf("x = %g: w0 = %.6f  w1 = %.6f  dw = %.6f\n", x, qp.w0, qp.w1, qp.dw);
  std::printf("        c0 = %.6f  c1 = %.6f  xme = %.6f\n", qp.c0, qp.c1, qp.xme);

  const auto geom = ArrayGeometry::linear(2);
  const auto couplings = pair_couplings(geom, omega);
  const auto h = build_hamiltonian(qp, couplings, geom.size());
  const Spectrum s = spectrum(h);
  const Eigen::VectorXd g = s.ground_state();
  std::printf("ground energy %.12f, gap %.12f\n", s.eigenvalues(0), energy_gap(s));
  std::printf("P(not |00>) = %.6e\n", p_not_all_zero(g));
  std::printf("C(1,2) = %.6e, fitted K(x) * omega = %.6e\n", concurrence(reduce(g, 0, 1)),
              k_of_x(x) * omega);

  const double shift = frequency_shift(qp, omega, std::numbers::pi / 2);
  const NmrCnotReport cnot = nmr_cnot_sequence(shift);
  std::printf("frequency shift %.6e, wait %.6e, CNOT deviation %.2e\n", shift, cnot.wait_time,
              cnot.deviation);
  return 0;
}
