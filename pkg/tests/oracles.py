"""Independent reference implementations used to cross-check the package.

Nothing here imports the algebra code of ``udfverify``; polynomials are
plain ``{exponent tuple: Fraction}`` dicts and algebra elements are dicts
over words of basis indices.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


# -- words in a free algebra, reduced to PBW order by rewriting ---------------


def _add(acc, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def reduce_words(elem: dict, table: dict) -> dict:
    """Rewrite ``...ji...`` (j > i) as ``...ij... + sum_k c^k_ji ...k...`` until sorted.

    ``table[(j, i)]`` maps k to the structure constant of ``[e_j, e_i]``.
    """
    done: dict = {}
    todo = dict(elem)
    while todo:
        word, c = todo.popitem()
        pos = next((p for p in range(len(word) - 1) if word[p] > word[p + 1]), None)
        if pos is None:
            _add(done, word, c)
            continue
        j, i = word[pos], word[pos + 1]
        _add(todo, word[:pos] + (i, j) + word[pos + 2:], c)
        for k, s in table.get((j, i), {}).items():
            _add(todo, word[:pos] + (k,) + word[pos + 2:], c * s)
    return done


def word_to_exps(word, dim):
    e = [0] * dim
    for i in word:
        e[i] += 1
    return tuple(e)


def exps_to_word(exps):
    return tuple(i for i, a in enumerate(exps) for _ in range(a))


def free_product(a: dict, b: dict) -> dict:
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            _add(out, wa + wb, ca * cb)
    return out


# -- polynomials as dicts ------------------------------------------------------


def pmul(f: dict, g: dict) -> dict:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            _add(out, tuple(x + y for x, y in zip(e1, e2)), c1 * c2)
    return out


def padd(f: dict, g: dict, s=1) -> dict:
    out = dict(f)
    for e, c in g.items():
        _add(out, e, c * s)
    return out


def pderiv(f: dict, k: int) -> dict:
    out: dict = {}
    for e, c in f.items():
        if e[k]:
            e2 = list(e)
            e2[k] -= 1
            _add(out, tuple(e2), c * e[k])
    return out


# -- star-product terms without any twist machinery ----------------------------


def abelian_term(triples, n: int, a: dict, b: dict) -> dict:
    """mu(r^n ▷ (a⊗b)) for ``r = sum c e_i⊗e_j`` acting by partial derivatives.

    Expands r^n as an explicit sum over n-tuples of terms of r.
    """
    out: dict = {}
    for choice in itertools.product(triples, repeat=n):
        coeff = Fraction(1)
        fa, fb = a, b
        for c, i, j in choice:
            coeff *= c
            fa = pderiv(fa, i)
            fb = pderiv(fb, j)
        out = padd(out, pmul(fa, fb), coeff)
    return out


def _axb_leg(e_power: int, poch: int, m: int):
    """E^e (H)_poch applied to z^m, with E = d/dz and H = -z d/dz; returns (exponent, coeff)."""
    c = Fraction(1)
    for j in range(poch):
        c *= -m + j
    for j in range(e_power):
        c *= m - j
    return m - e_power, c


def axb_term(n: int, a: dict, b: dict) -> dict:
    """mu(F_n ▷ (a⊗b)) for ``F_n = sum_k (-1)^k C(n,k) E^{n-k}(H)_k ⊗ E^k (H)_{n-k}``."""
    out: dict = {}
    for (ma,), ca in a.items():
        for (mb,), cb in b.items():
            for k in range(n + 1):
                ea, xa = _axb_leg(n - k, k, ma)
                eb, xb = _axb_leg(k, n - k, mb)
                if ea < 0 or eb < 0:
                    continue
                c = (-1) ** k * math.comb(n, k) * ca * cb * xa * xb
                if c:
                    _add(out, (ea + eb,), c)
    return out


def star(terms, hbar) -> dict:
    out: dict = {}
    for n, t in enumerate(terms):
        w = hbar**n * Fraction(1, math.factorial(n))
        for e, c in t.items():
            _add(out, e, c * w)
    return out


# -- seminorm of z^m for one derivation -----------------------------------------


def abelian_1d_terms(m: int, radius: float, n_max: int) -> list:
    """sup over |xi| <= 1 of the polydisk norm of xi^n ▷ z^m, with xi acting as d/dz."""
    return [math.perm(m, n) * radius ** (m - n) if n <= m else 0.0 for n in range(n_max + 1)]


def weighted_sum(terms, R: float, r: float) -> float:
    return math.fsum(math.factorial(n) ** (R - 1) * r**n * t for n, t in enumerate(terms))
