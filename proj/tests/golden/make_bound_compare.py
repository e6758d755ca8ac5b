"""Regenerates bound_compare.csv with an independent high-precision root finder.

Thresholds are the least log N at which each bound is at most N/2:
  main:    xi0 L^3 / (log q)^2 = log 2             (closed form)
  older:   xi0 L / (rho^2 log rho) - a rho (1 + log rho)^2 = log 2,  rho = log q / L
Usage: python3 make_bound_compare.py > bound_compare.csv
"""
import mpmath as mp

mp.mp.dps = 40
P, GAMMAS, A, XI0 = 3, (100, 300, 1000), 1, 1


def main_threshold(lq):
    return mp.cbrt(lq**2 * mp.log(2) / XI0)


def older_threshold(lq):
    def savings(L):
        rho = lq / L
        return XI0 * L / (rho**2 * mp.log(rho)) - A * rho * (1 + mp.log(rho)) ** 2 - mp.log(2)

    # first sign change on a fine grid, then refine by bisection
    n = 20000
    prev = mp.mpf(lq) * mp.mpf(10) ** -9
    for i in range(1, n + 1):
        cur = lq * mp.mpf(i) / (n + 1)
        if savings(prev) < 0 <= savings(cur):
            return mp.findroot(savings, (prev, cur), solver="bisect")
        prev = cur
    raise RuntimeError("no threshold below log q")


def fmt(x):
    return mp.nstr(x, 15, strip_zeros=True, min_fixed=-5, max_fixed=20)


print("gamma,log_q,main_log_N,iwaniec_log_N,main_over_two_thirds,main_over_three_quarters,iwaniec_over_three_quarters")
for g in GAMMAS:
    lq = g * mp.log(P)
    m = main_threshold(lq)
    o = older_threshold(lq)
    print(",".join([str(g), fmt(lq), fmt(m), fmt(o), fmt(m / lq ** (mp.mpf(2) / 3)), fmt(m / lq ** mp.mpf(0.75)),
                    fmt(o / lq ** mp.mpf(0.75))]))
