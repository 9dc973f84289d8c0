#pragma once
// Bessel functions of the first kind J_nu for real order nu >= 0.  The
// surface-measure Fourier transform of the unit sphere in R^n is
//
//   2*pi * |xi|^{-(n-2)/2} * J_{(n-2)/2}(2*pi*|xi|),
//
// so only modest orders (half-integers and small integers) ever occur here.
// Evaluation policy: ascending power series for x <= 12, Hankel's
// large-argument asymptotic expansion beyond.  The crossover was chosen so
// the series still has ~11 correct digits (cancellation eats ~4) while the
// asymptotic tail terms are already below 1e-10.

namespace diomax {

double bessel_j(double nu, double x);

}  // namespace diomax
