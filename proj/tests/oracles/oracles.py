"""Independent reference values for the C++ test suites.

Every number frozen into a test as a derived constant comes from this
script. It shares no code with the library: dimensions of continued-fraction
Cantor sets use a Chebyshev collocation of the transfer operator, word
derivatives use exact endpoint evaluation in mpmath, and the similitude
families use closed forms.

    python3 tests/oracles/oracles.py
"""

import itertools

import mpmath as mp
import numpy as np

mp.mp.dps = 40


def fibonacci_count(depth):
    words = itertools.product([0, 1], repeat=depth)
    return sum(all(not (a == 1 and b == 1) for a, b in zip(w, w[1:])) for w in words)


def primitivity_length(a, max_p=10):
    a = np.array(a, dtype=np.int64)
    power = a.copy()
    for p in range(1, max_p + 1):
        power = np.minimum(power @ a, 1)
        if power.min() > 0:
            return p
    return None


def cf_word_derivative_bounds(digits):
    # s_w(x) = (p + p' x) / (q + q' x); |s_w'| = 1 / (q + q' x)^2 is monotone.
    m = mp.matrix([[1, 0], [0, 1]])
    for d in digits:
        m = m * mp.matrix([[0, 1], [1, d]])
    f = lambda x: 1 / (m[1, 0] * x + m[1, 1]) ** 2
    a, b = f(0), f(1)
    return max(a, b), min(a, b)


def cf_partition(n, t, depth):
    up = lo = mp.mpf(0)
    for w in itertools.product(range(1, n + 1), repeat=depth):
        s, i = cf_word_derivative_bounds(w)
        up += s ** t
        lo += i ** t
    return up, lo


def cf_spectral_radius(digits, t, nodes=40):
    # Chebyshev collocation of L_t f(x) = sum (q + x)^{-2t} f(1 / (q + x)).
    k = np.arange(nodes)
    x = 0.5 - 0.5 * np.cos(np.pi * (2 * k + 1) / (2 * nodes))

    def basis(y):
        z = 2 * y - 1
        return np.cos(np.outer(np.arccos(np.clip(z, -1, 1)), np.arange(nodes)))

    vals = basis(x)
    coeff = np.linalg.inv(vals)
    op = np.zeros((nodes, nodes))
    for q in digits:
        w = (q + x) ** (-2 * t)
        op += (w[:, None] * basis(1.0 / (q + x))) @ coeff
    return max(abs(np.linalg.eigvals(op)))


def cf_dimension(digits):
    lo, hi = 0.3, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if cf_spectral_radius(digits, mid) > 1:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_truncation_root(n):
    f = lambda h: sum(mp.power(2, -(i + 1) * h) for i in range(1, n + 1)) - 1
    return mp.findroot(f, 0.6)


def main():
    print("fibonacci words depth 3:", fibonacci_count(3))
    print("primitivity length [[1,1],[1,0]]:", primitivity_length([[1, 1], [1, 0]]))
    s, i = cf_word_derivative_bounds([1, 1])
    print("cf word (1,1) sup, inf:", mp.nstr(s, 17), mp.nstr(i, 17))
    up, lo = cf_partition(2, mp.mpf("0.6"), 6)
    print("cf n=2 t=0.6 depth 6 Z_sup, Z_inf:", mp.nstr(up, 17), mp.nstr(lo, 17))
    phi = (1 + mp.sqrt(5)) / 2
    print("golden limit h:", mp.nstr(mp.log(phi) / mp.log(2), 17))
    for n in range(2, 13):
        print(f"golden h_{n}:", mp.nstr(golden_truncation_root(n), 17))
    for t in (mp.mpf("0.5"), mp.mpf("0.8")):
        p3 = mp.log(sum(mp.power(2, -(i + 1) * t) for i in range(1, 4)))
        print(f"golden P_3({t}):", mp.nstr(p3, 17))
    h2 = golden_truncation_root(2)
    print("golden n=2 masses:", mp.nstr(mp.power(2, -2 * h2), 17), mp.nstr(mp.power(2, -3 * h2), 17))
    h4 = golden_truncation_root(4)
    print("singularity q (n1=2, n2=4):", mp.nstr(mp.power(2, -2 * h4) + mp.power(2, -3 * h4), 17))
    print("TV lower bounds 1 - q^200 for golden n1 < n2:")
    for n1 in range(2, 8):
        row = []
        for n2 in range(n1 + 1, 13):
            hn2 = golden_truncation_root(n2)
            q = sum(mp.power(2, -(i + 1) * hn2) for i in range(1, n1 + 1))
            row.append(f"{n2}:{mp.nstr(1 - q ** 200, 6)}")
        print(f"  n1={n1}", " ".join(row))
    print("cf dimension {1,2}:", repr(cf_dimension([1, 2])))
    print("cf dimension {1,2,3}:", repr(cf_dimension([1, 2, 3])))
    print("Perron root Fibonacci:", mp.nstr(phi, 17))
    print("KS critical value N=1e4, alpha=0.05:", 1.358 / 100)
    # Equilibrium state of t log|s'| for similitudes (0.2, 0.4) at t = 1 is
    # Bernoulli(1/3, 2/3).
    r = [mp.mpf("0.2"), mp.mpf("0.4")]
    p = [x / sum(r) for x in r]
    ent = -sum(x * mp.log(x) for x in p)
    lyap = -sum(x * mp.log(y) for x, y in zip(p, r))
    print("Bernoulli (0.2,0.4) t=1 entropy, lyapunov, ratio:", mp.nstr(ent, 17), mp.nstr(lyap, 17), mp.nstr(ent / lyap, 17))
    print("exm3.7 a=1/2 TV(nu_n, nu): exact a^{n+1}, and a^{n+1}/(1-a^{n+1}):")
    a = mp.mpf(1) / 2
    for n in range(1, 11):
        print(f"  n={n}", mp.nstr(a ** (n + 1), 17), mp.nstr(a ** (n + 1) / (1 - a ** (n + 1)), 17))


if __name__ == "__main__":
    main()
