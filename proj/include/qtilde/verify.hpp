// Verification suites behind the CLI `verify` subcommands: each check
// compares an observed quantity against its bound and reports pass/fail,
// so the same records drive the CLI reports and the acceptance runner.

#ifndef QTILDE_VERIFY_HPP
#define QTILDE_VERIFY_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace qtilde {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // observed quantity (residual, ratio, count, ...)
  double bound = 0.0;  // the limit it was held against (0 for exact checks)
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  std::size_t failures() const;
};

// Dimension formula dim = C(n,k)(r+1)^n with exact linear independence,
// swept over n <= 3, r <= 3 plus n = 4, r <= 2.
SuiteReport verify_dimensions();

// Moment Vandermonde exactly invertible and nodal condition number < 1e12
// for one parameter triple, or over the same sweep as the dimensions.
SuiteReport verify_unisolvency(int n, int k, int r);
SuiteReport verify_unisolvency_sweep();

// Exact algebraic lemmas: homotopy formula, degree invariance, the epsilon
// sign identity, the space inclusions, injectivity of d kappa on B, closure
// under 200 seeded random diagonal affine pullbacks, and the face trace
// property.  Every check is exact; any failure is a falsification.
SuiteReport verify_algebra(unsigned seed);

// |L_{r+1} - L_{r-1}| at the Gauss-Lobatto nodes for r <= max_r.
SuiteReport verify_legendre(int max_r = 8);

// Quadrature-product conditions on degree k: exactness of the lumped
// product on Qminus x Q_{r-1}, d-preservation and lumped orthogonality of
// the trimmed interpolation, and stability of the norm-equivalence ratio
// across refinements.
SuiteReport verify_conditions(int n, int k, int r);

// Lumped coderivative columns stay on the node patch of a 4x4 grid while
// the exact-mass operator provably spreads, for the given order.
SuiteReport verify_locality(int r);

// Discrete harmonic dimensions on the 3x3 grid and the 3x3-minus-center
// grid for r in {1, 2}.
SuiteReport verify_harmonic();

}  // namespace qtilde

#endif
