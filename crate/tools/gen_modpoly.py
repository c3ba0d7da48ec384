#!/usr/bin/env python3
"""Generate classical modular polynomial data files from the q-expansion of j.

Usage: gen_modpoly.py OUT_DIR ELL [ELL ...]

Phi_ell(X, j) = (X - j(ell*tau)) * prod_b (X - j((tau + b)/ell)). The product
over b is assembled from power sums via Newton's identities, then every
coefficient (a Laurent series in q) is rewritten as a polynomial in j.
"""
import sys
from pathlib import Path


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for k, y in enumerate(b[: n - i]):
            out[i + k] += x * y
    return out


def qj_series(n):
    """Coefficients of q*j(q) up to q^(n-1)."""
    e4 = [1] + [240 * sum(d ** 3 for d in range(1, k + 1) if k % d == 0) for k in range(1, n)]
    eta24 = [1] + [0] * (n - 1)
    for k in range(1, n):
        # multiply by (1 - q^k)^24 one factor at a time
        for _ in range(24):
            for i in range(n - 1, k - 1, -1):
                eta24[i] -= eta24[i - k]
    e4cube = mul(mul(e4, e4, n), e4, n)
    # divide by eta24 (leading 1)
    out = [0] * n
    for i in range(n):
        s = e4cube[i] - sum(out[k] * eta24[i - k] for k in range(i))
        out[i] = s
    return out


class Laurent:
    """Truncated Laurent series: coefficient dict, valid for exponents < prec."""

    def __init__(self, coeffs, prec):
        self.c = {k: v for k, v in coeffs.items() if v != 0 and k < prec}
        self.prec = prec

    def val(self):
        return min(self.c) if self.c else self.prec

    def __add__(self, o):
        prec = min(self.prec, o.prec)
        d = dict(self.c)
        for k, v in o.c.items():
            d[k] = d.get(k, 0) + v
        return Laurent(d, prec)

    def scale(self, s):
        return Laurent({k: v * s for k, v in self.c.items()}, self.prec)

    def __mul__(self, o):
        prec = min(self.prec + o.val(), o.prec + self.val())
        d = {}
        for i, x in self.c.items():
            for k, y in o.c.items():
                if i + k < prec:
                    d[i + k] = d.get(i + k, 0) + x * y
        return Laurent(d, prec)


def modular_polynomial(ell):
    target = ell + 6
    n = ell * (target + 2) + ell + 4
    qj = qj_series(n)
    j = Laurent({k - 1: v for k, v in enumerate(qj)}, n - 1)
    jpow = [Laurent({0: 1}, 10 ** 9)]
    for _ in range(ell + 1):
        jpow.append(jpow[-1] * j)
    # power sums of j((tau+b)/ell) over b
    t = [None]
    for i in range(1, ell + 1):
        src = jpow[i]
        d = {k // ell: ell * v for k, v in src.c.items() if k % ell == 0}
        t.append(Laurent(d, (src.prec - 1) // ell + 1))
    e = [Laurent({0: 1}, 10 ** 9)]
    for k in range(1, ell + 1):
        acc = Laurent({}, 10 ** 9)
        for i in range(1, k + 1):
            term = e[k - i] * t[i]
            acc = acc + (term if i % 2 == 1 else term.scale(-1))
        assert all(v % k == 0 for v in acc.c.values())
        e.append(Laurent({q: v // k for q, v in acc.c.items()}, acc.prec))
    # psi(X) = sum_k (-1)^k e_k X^(ell-k)
    psi = {ell - k: (e[k] if k % 2 == 0 else e[k].scale(-1)) for k in range(ell + 1)}
    jl = Laurent({ell * k: v for k, v in j.c.items()}, ell * j.prec)
    phi = {}
    for a, s in psi.items():
        phi[a + 1] = phi.get(a + 1, Laurent({}, 10 ** 9)) + s
        phi[a] = phi.get(a, Laurent({}, 10 ** 9)) + (s * jl).scale(-1)
    coeffs = {}
    for a, s in phi.items():
        assert s.prec > 1, (ell, a, s.prec)
        rest = s
        while rest.c and rest.val() <= 0:
            v = rest.val()
            deg = -v
            c = rest.c[v]
            coeffs[(a, deg)] = c
            rest = rest + jpow[deg].scale(-c)
        assert not rest.c or rest.val() > 0
    for (a, b), c in coeffs.items():
        assert coeffs.get((b, a)) == c, (ell, a, b)
    return coeffs


def main():
    out = Path(sys.argv[1])
    for ell in map(int, sys.argv[2:]):
        coeffs = modular_polynomial(ell)
        lines = [f"MODPOLY ell={ell}", f"# classical modular polynomial Phi_{ell}(X, Y), entries i j c with i >= j"]
        for (a, b) in sorted(coeffs, reverse=True):
            if a >= b:
                lines.append(f"{a} {b} {coeffs[(a, b)]}")
        (out / f"phi_{ell}.txt").write_text("\n".join(lines) + "\n")
        print(ell, len(lines) - 2, max(len(str(abs(c))) for c in coeffs.values()))


if __name__ == "__main__":
    main()
