#include "boc/thresholds.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace boc {

double riemann_zeta(double s) {
    if (!(s > 1.0)) throw std::invalid_argument("riemann_zeta: requires s > 1");
    constexpr int kTerms = 20000;
    double sum = 0.0;
    for (int n = kTerms; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    // Euler-Maclaurin tail at N: integral + half-term + B2 correction.
    const double n = static_cast<double>(kTerms);
    sum += std::pow(n, 1.0 - s) / (s - 1.0);
    sum -= 0.5 * std::pow(n, -s);
    sum += s * std::pow(n, -s - 1.0) / 12.0;
    return sum;
}

namespace {

double psi_objective(double h, double x) {
    return 2.0 - 2.0 * std::log(4.0 * h) + std::log(riemann_zeta(2.0 * h)) / h -
           std::log(1.0 - h) / (2.0 * h) + x / h;
}

double psi_uncached(double x) {
    // golden-section search; -psi is unimodal on [1/2, 1]
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 0.5 + 1e-9, hi = 1.0 - 1e-9;
    double a = hi - kInvPhi * (hi - lo);
    double b = lo + kInvPhi * (hi - lo);
    double fa = psi_objective(a, x);
    double fb = psi_objective(b, x);
    while (hi - lo > 1e-10) {
        if (fa <= fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - kInvPhi * (hi - lo);
            fa = psi_objective(a, x);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + kInvPhi * (hi - lo);
            fb = psi_objective(b, x);
        }
    }
    return std::min(fa, fb);
}

std::mutex psi_mutex;
std::map<double, double> psi_cache;

}  // namespace

double psi(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("psi: requires x > 0");
    {
        std::lock_guard<std::mutex> lock(psi_mutex);
        auto it = psi_cache.find(x);
        if (it != psi_cache.end()) return it->second;
    }
    const double value = psi_uncached(x);
    std::lock_guard<std::mutex> lock(psi_mutex);
    psi_cache.emplace(x, value);
    return value;
}

double beta_exact(double delta, std::span<const long long> pull_counts, int dim) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("beta_exact: delta outside (0,1)");
    if (dim < 1) throw std::invalid_argument("beta_exact: dim must be positive");
    const double d = static_cast<double>(dim);
    double sum = 0.0;
    for (long long count : pull_counts) {
        if (count < 1) throw std::invalid_argument("beta_exact: every pull count must be >= 1");
        sum += 2.0 * d * std::log(4.0 + std::log(static_cast<double>(count)));
    }
    const double md = static_cast<double>(pull_counts.size()) * d;
    return sum + md * psi(std::log(1.0 / delta) / md);
}

double beta_heuristic(double delta, long long t, int dim) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("beta_heuristic: delta outside (0,1)");
    if (t < 1) throw std::invalid_argument("beta_heuristic: requires t >= 1");
    return dim * std::log(1.0 + std::log(static_cast<double>(t))) + std::log(1.0 / delta);
}

double binary_kl(double a, double b) {
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
        throw std::invalid_argument("binary_kl: arguments must lie in (0,1)");
    return a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
}

}  // namespace boc
