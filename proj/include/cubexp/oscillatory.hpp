// Oscillatory integrals with quadratic and cubic phases:
//
//   I(b1,b2;X) = int_0^X  e(b1 u + b2 u^2) du
//   J(b1,b2;X) = int_X^2X e(b1 u + b2 u^2) du
//   K(beta)    = int_0^H int_P^2P e(beta (v^3 + 3 u v^2 + 3 u^2 v)) du dv
//              = int_0^H e(beta v^3) J(3 beta v^2, 3 beta v; P) dv
//
// Evaluation strategy: the interval is split into panels carrying a
// bounded total phase change (a stationary point of the phase forces a
// panel boundary), with 15-point Gauss-Legendre per panel and the error
// estimated from a half-panel refinement. Above a cycle threshold the
// quadratic-phase integrals switch to a closed form in Fresnel integrals,
// which keeps K affordable near the arc boundary where the panel count
// would reach millions.
#pragma once

#include <complex>
#include <cstdint>

namespace cubexp::osc {

struct QuadratureResult {
  std::complex<double> value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  std::uint64_t panels = 1;
};

struct QuadratureOptions {
  double cycles_per_panel = 0.75;
  // Total-cycle count above which the Fresnel closed form replaces panel
  // quadrature for quadratic phases. At the crossover the closed form is
  // good to ~1e-12 relative and two orders of magnitude cheaper.
  double closed_form_threshold = 24.0;
  bool force_quadrature = false;  // panel path regardless of size
};

QuadratureResult integral_I(double b1, double b2, double X,
                            const QuadratureOptions& opt = {});
QuadratureResult integral_J(double b1, double b2, double X,
                            const QuadratureOptions& opt = {});
QuadratureResult integral_K(double beta, double H, double P,
                            const QuadratureOptions& opt = {});

// Fresnel integrals C(x) = int_0^x cos(pi t^2/2) dt and the sine analogue,
// accurate to ~1e-13 absolute over the full real line.
double fresnel_C(double x);
double fresnel_S(double x);

// int_A^B e(b1 u + b2 u^2) du by the panel rule (exposed for tests).
QuadratureResult quadratic_phase_integral(double b1, double b2, double A,
                                          double B,
                                          const QuadratureOptions& opt = {});

}  // namespace cubexp::osc
