"""Independent high-precision reference formulas used as test oracles.

Everything is evaluated in mpmath at 50 digits straight from the textbook
expressions, without the rearrangements the library uses for stability.
"""
import mpmath as mp

mp.mp.dps = 50


def dp_to_pdp(eps, delta, delta_prime):
    eps, delta, dp = mp.mpf(eps), mp.mpf(delta), mp.mpf(delta_prime)
    return float(mp.log(dp * mp.e ** eps + delta) - mp.log(dp - delta))


def zcdp_to_dp(rho, delta):
    rho = mp.mpf(rho)
    return float(rho + 2 * mp.sqrt(rho * mp.log(1 / mp.mpf(delta))))


def eps_tilde(eps):
    h = mp.e ** (mp.mpf(eps) / 2)
    return float(mp.log(3 * h - 1) - mp.log(3 - h))


def posterior_bounds(eps_prime, prior):
    e, p = mp.mpf(eps_prime), mp.mpf(prior)
    return float(p / (p + (1 - p) * mp.e ** e)), float(p / (p + (1 - p) * mp.e ** -e))


def diff_magnitude(eps_prime):
    h = mp.e ** (mp.mpf(eps_prime) / 2)
    return float((h - 1) / (h + 1))


def advanced(eps_list, total_delta):
    lin = mp.fsum(mp.mpf(e) * (mp.e ** mp.mpf(e) - 1) for e in eps_list)
    quad = mp.fsum(mp.mpf(e) ** 2 for e in eps_list)
    return float(lin + mp.sqrt(2 * quad * mp.log(1 / mp.mpf(total_delta))))


def delta_ell(eps0, k, ell):
    e = mp.mpf(eps0)
    num = mp.fsum(mp.binomial(k, j) * (mp.e ** ((k - j) * e) - mp.e ** ((k - 2 * ell + j) * e))
                  for j in range(ell))
    return float(num / (1 + mp.e ** e) ** k)


def optimal_best_eps_prime(eps0, k, delta_prime):
    """min over ell of the PDP epsilon' after optimal composition of k pure releases."""
    best = None
    for ell in range(k // 2 + 1):
        d = delta_ell(eps0, k, ell)
        if d >= delta_prime:
            continue
        v = dp_to_pdp((k - 2 * ell) * eps0, d, delta_prime)
        best = v if best is None else min(best, v)
    return best


def rr_kfold_tight_delta(eps0, k, eps):
    """Tight delta of k-fold randomized response by summing over the count of 'yes'."""
    e0, e = mp.mpf(eps0), mp.mpf(eps)
    q = mp.e ** e0 / (1 + mp.e ** e0)
    total = mp.mpf(0)
    for a in range(k + 1):
        pw = mp.binomial(k, a) * q ** a * (1 - q) ** (k - a)
        po = mp.binomial(k, a) * (1 - q) ** a * q ** (k - a)
        total += max(mp.mpf(0), pw - mp.e ** e * po)
    return float(total)


def zcdp_to_pdp_best(rho, delta_prime, n=4000):
    """Dense log-grid search over the intermediate delta, then local refinement."""
    dp = mp.mpf(delta_prime)

    def f(logd):
        d = mp.e ** logd
        return mp.mpf(dp_to_pdp(zcdp_to_dp(rho, d), d, dp))

    lo, hi = mp.log(dp) - 60, mp.log(dp) - mp.mpf("1e-9")
    grid = [lo + (hi - lo) * i / n for i in range(n + 1)]
    vals = [f(x) for x in grid]
    i = min(range(len(vals)), key=lambda j: vals[j])
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, n)]
    for _ in range(200):
        m1, m2 = a + (b - a) / 3, b - (b - a) / 3
        if f(m1) < f(m2):
            b = m2
        else:
            a = m1
    return float(f((a + b) / 2))
