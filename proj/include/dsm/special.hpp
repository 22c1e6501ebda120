#pragma once

// Tail probabilities implemented in-repo: regularized incomplete gamma via
// series / continued fraction, with erfc and the chi-square and normal
// upper tails derived from it. Target accuracy: 1e-10 relative for
// p in [1e-12, 1].

namespace dsm {

double regularized_gamma_p(double a, double x);  // P(a, x)
double regularized_gamma_q(double a, double x);  // Q(a, x) = 1 - P(a, x)

double chi_squared_sf(double x, double df);  // upper tail of chi^2_df

double erfc_in_repo(double x);

double normal_sf(double z);  // P(Z > z) for standard normal

}  // namespace dsm
