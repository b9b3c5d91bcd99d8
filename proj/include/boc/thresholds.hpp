#pragma once
/*
Stopping thresholds and the scalar special functions behind them.

The exact threshold for confidence delta at time t with per-arm pull counts
N_m is

  beta(delta, t) = sum_m 2d * log(4 + log(N_m)) + M*d * Psi(log(1/delta) / (M*d))

where Psi(x) = min_{1/2 <= h <= 1} psi(h) with

  psi(h) = 2 - 2*log(4h) + log(zeta(2h))/h - log(1-h)/(2h) + x/h

and zeta is the Riemann zeta function. -psi is unimodal on [1/2, 1], so the
minimum is found by golden-section search. Psi(x) >= x for every x > 0, hence
beta >= log(1/delta). The cheaper heuristic variant is

  beta~(delta, t) = d*log(1 + log(t)) + log(1/delta).

Natural logarithms throughout. Psi is memoized by x behind a mutex (the agent
evaluates it with the same argument at every step), so all functions here are
safe to call from concurrent trial workers.
*/
#include <span>

namespace boc {

enum class ThresholdKind { exact, heuristic };

// zeta(s) for s > 1, accurate to about 1e-12 absolute on (1, 2]:
// 2e4 series terms plus the Euler-Maclaurin tail.
double riemann_zeta(double s);

// Psi(x) for x > 0.
double psi(double x);

// Exact threshold; every pull count must be >= 1.
double beta_exact(double delta, std::span<const long long> pull_counts, int dim);

double beta_heuristic(double delta, long long t, int dim);

// Binary relative entropy d_KL(a,b) = a*log(a/b) + (1-a)*log((1-a)/(1-b)),
// for a, b in the open interval (0,1).
double binary_kl(double a, double b);

}  // namespace boc
