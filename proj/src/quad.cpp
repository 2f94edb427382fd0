#include "wwrcva/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wwrcva/types.hpp"

namespace wwrcva {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth, int max_depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double h = b - a;
    double left = h / 12.0 * (fa + 4.0 * flm + fm);
    double right = h / 12.0 * (fm + 4.0 * frm + fb);
    double err = (left + right - whole) / 15.0;
    if (depth >= max_depth)
        throw NumericsError("adaptive_simpson: max recursion depth reached");
    if (std::abs(err) <= tol)
        return left + right + err;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_depth) {
    if (!(b > a)) {
        if (b == a) return 0.0;
        return -adaptive_simpson(f, b, a, abs_tol, rel_tol, max_depth);
    }
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = abs_tol + rel_tol * std::abs(whole);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

namespace {

// Laguerre L_n and L_{n-1} at x via the three-term recurrence.
void laguerre_pair(int n, double x, double& ln, double& lnm1) {
    double p0 = 1.0;
    double p1 = 1.0 - x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0 - x) * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    ln = p1;
    lnm1 = p0;
}

GaussLaguerreRule build_rule(int n) {
    GaussLaguerreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            double ai = i - 1;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - rule.nodes[i - 2]);
        }
        double ln = 0.0, lnm1 = 0.0;
        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            laguerre_pair(n, z, ln, lnm1);
            double deriv = n * (ln - lnm1) / z;  // L'_n(x) = n (L_n - L_{n-1}) / x
            double dz = ln / deriv;
            z -= dz;
            if (std::abs(dz) <= 1e-14 * std::max(z, 1.0)) {
                ok = true;
                break;
            }
        }
        if (!ok) throw NumericsError("gauss_laguerre: Newton iteration stalled");
        laguerre_pair(n + 1, z, ln, lnm1);
        rule.nodes[i] = z;
        rule.weights[i] = z / ((n + 1.0) * (n + 1.0) * ln * ln);
    }
    return rule;
}

std::mutex rule_mutex;
std::map<int, GaussLaguerreRule> rule_cache;

}  // namespace

const GaussLaguerreRule& gauss_laguerre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be positive");
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto it = rule_cache.find(n);
    if (it == rule_cache.end()) it = rule_cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double gauss_laguerre_escalated(const std::function<double(double)>& f, double tol) {
    double prev = 0.0;
    bool have_prev = false;
    for (int n = 16; n <= 256; n *= 2) {
        const GaussLaguerreRule& rule = gauss_laguerre(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(rule.nodes[i]);
        if (have_prev && std::abs(sum - prev) <= tol * std::max(1.0, std::abs(sum)))
            return sum;
        prev = sum;
        have_prev = true;
    }
    throw NumericsError("gauss_laguerre_escalated: no convergence by n=256");
}

}  // namespace wwrcva
