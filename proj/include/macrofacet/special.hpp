// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace macrofacet {

// Error functions after W. J. Cody's rational Chebyshev approximations
// (Math. Comp. 1969). erf is odd to the bit; erfc keeps relative accuracy in
// the upper tail; erfcx(x) = exp(x^2) erfc(x) without overflow for x > 0.
double erf(double x);
double erfc(double x);
double erfcx(double x);

// Gaussian density phi(x; mu, var). Throws ParameterDomainError for var <= 0.
double gauss_pdf(double x, double mu, double var);

// Gaussian CDF Phi(x; mu, var) through erfc; Phi(mu) is exactly 0.5.
double gauss_cdf(double x, double mu, double var);

// log Phi(x; mu, var), finite far into the lower tail.
double log_gauss_cdf(double x, double mu, double var);

// phi(x)/Phi(x) for the standard normal, stable for x -> -inf (~ -x).
double standard_mills_inverse(double x);

}  // namespace macrofacet
