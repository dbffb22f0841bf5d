#pragma once

namespace rswz {

struct WResult {
  double value = 0.0;
  double residual = 0.0;  // |w e^w - x|
  int iterations = 0;
};

// Principal branch of the Lambert W function, x >= -1/e.
WResult lambert_w0(double x);

// f_{gamma,q}(x) = exp(x (log x - gamma) / q) for x >= e^gamma, q > 0.
double f_gamma_q(double gamma, double q, double x);

// log f_{gamma,q}(x); safe for arguments whose value overflows a double.
double f_gamma_q_log(double gamma, double q, double x);

// Inverse of f_{gamma,q} on [e^gamma, inf): y >= 1.
double f_inverse(double gamma, double q, double y);

// Inverse taking log y >= 0 directly.
double f_inverse_from_log(double gamma, double q, double log_y);

}  // namespace rswz
