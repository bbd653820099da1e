"""Moment functions of block trace statistics.

Finite-dimension expectations come from a numeric matrix exponential of
the generator; large-dimension limits are solved exactly: the Krylov
orbit of the seed row is finite, its annihilator polynomial factors over
the rationals, and matching Taylor coefficients yields a closed form
sum_rate e^(rate t) * polynomial(t) with rational data.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np
import sympy
from scipy.linalg import expm

from .brauer import ColouredBrauerDiagram, Pairing, Word, encode_word, \
    cycle_partition
from .generators import (
    build_generator_finite,
    build_generator_limit,
    delta_diag,
    field_class,
    reachable_basis,
    square_ratios,
)


class MomentFunction:
    """Exact function t -> sum over rates of e^(rate t) * poly(t).

    terms maps a rational rate to the list of polynomial coefficients
    c_0..c_m (rationals).  Most moments carry a single rate; starred
    words over several colours can genuinely mix rates.
    """

    def __init__(self, terms):
        clean = {}
        for rate, coeffs in terms.items():
            cs = [Fraction(c) for c in coeffs]
            while cs and cs[-1] == 0:
                cs.pop()
            if cs:
                clean[Fraction(rate)] = cs
        self.terms = clean

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def constant(cls, c):
        return cls({0: [Fraction(c)]})

    @classmethod
    def exponential(cls, rate, coeffs=(1,)):
        return cls({Fraction(rate): list(coeffs)})

    @property
    def is_single_rate(self):
        return len(self.terms) <= 1

    @property
    def rate(self):
        if not self.terms:
            return Fraction(0)
        if len(self.terms) > 1:
            raise ValueError("moment function mixes several rates")
        return next(iter(self.terms))

    @property
    def coeffs(self):
        if not self.terms:
            return [Fraction(0)]
        if len(self.terms) > 1:
            raise ValueError("moment function mixes several rates")
        return list(next(iter(self.terms.values())))

    def degree(self):
        return max((len(c) - 1 for c in self.terms.values()), default=0)

    def value(self, t):
        t = float(t)
        total = 0.0
        for rate, coeffs in self.terms.items():
            poly = 0.0
            for c in reversed(coeffs):
                poly = poly * t + float(c)
            total += math.exp(float(rate) * t) * poly
        return total

    __call__ = value

    def taylor_coeff(self, i):
        """Exact coefficient of t^i in the series expansion."""
        total = Fraction(0)
        for rate, coeffs in self.terms.items():
            for j, c in enumerate(coeffs):
                if j <= i:
                    total += c * rate ** (i - j) / math.factorial(i - j)
        return total

    def derivative(self):
        out = {}
        for rate, coeffs in self.terms.items():
            d = [Fraction(0)] * len(coeffs)
            for j, c in enumerate(coeffs):
                d[j] += rate * c
                if j:
                    d[j - 1] += j * c
            out[rate] = d
        return MomentFunction(out)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MomentFunction.constant(other)
        out = {r: list(c) for r, c in self.terms.items()}
        for rate, coeffs in other.terms.items():
            cur = out.setdefault(rate, [])
            for j, c in enumerate(coeffs):
                if j < len(cur):
                    cur[j] += c
                else:
                    cur.append(c)
        return MomentFunction(out)

    __radd__ = __add__

    def __neg__(self):
        return MomentFunction(
            {r: [-c for c in cs] for r, cs in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MomentFunction.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MomentFunction(
                {r: [c * other for c in cs]
                 for r, cs in self.terms.items()})
        out = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                prod = [Fraction(0)] * (len(c1) + len(c2) - 1)
                for i, a in enumerate(c1):
                    for j, b in enumerate(c2):
                        prod[i + j] += a * b
                cur = out.setdefault(r1 + r2, [])
                for j, c in enumerate(prod):
                    if j < len(cur):
                        cur[j] += c
                    else:
                        cur.append(c)
        return MomentFunction(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MomentFunction.constant(other)
        return isinstance(other, MomentFunction) and \
            self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "MomentFunction(0)"
        bits = []
        for rate in sorted(self.terms):
            bits.append("e^(%st)*%s" % (rate, self.terms[rate]))
        return "MomentFunction(%s)" % " + ".join(bits)

    def to_json(self):
        def enc(rate, coeffs):
            return {"rate": str(Fraction(rate)),
                    "coeffs": [str(c) for c in coeffs]}

        if len(self.terms) <= 1:
            rate = next(iter(self.terms), Fraction(0))
            coeffs = self.terms.get(rate, [Fraction(0)])
            return json.dumps(enc(rate, coeffs))
        return json.dumps(
            {"terms": [enc(r, self.terms[r])
                       for r in sorted(self.terms)]})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        if "terms" in data:
            items = data["terms"]
        else:
            items = [data]
        return cls({Fraction(d["rate"]): [Fraction(c) for c in d["coeffs"]]
                    for d in items})


# ---------------------------------------------------------------------------
# exact solution of the limit system
# ---------------------------------------------------------------------------

def _row_echelon_insert(rows, pivots, vec):
    """Reduce vec against stored echelon rows; returns the reduced vector
    and the combination used, or (None, combo) if dependent."""
    vec = list(vec)
    combo = {}
    for idx, (piv, row) in enumerate(zip(pivots, rows)):
        if vec[piv]:
            f = vec[piv]
            combo[idx] = f
            for c in range(len(vec)):
                vec[c] -= f * row[c]
    for c, v in enumerate(vec):
        if v:
            inv = Fraction(1) / v
            norm = [x * inv for x in vec]
            return norm, c, combo, v
    return None, None, combo, None


def _krylov_annihilator(gen, seed_index):
    """Minimal polynomial of the generator on the seed's Krylov row space.

    Returns (monic coefficient list a_0..a_{m-1} with x^m = sum a_i x^i,
    list of Krylov row vectors v_0..v_m).
    """
    n = gen.size
    rows_g = gen.rows

    def step(vec):
        out = [Fraction(0)] * n
        for i, x in enumerate(vec):
            if x:
                for j, g in rows_g[i].items():
                    out[j] += x * g
        return out

    v = [Fraction(0)] * n
    v[seed_index] = Fraction(1)
    krylov = [v]
    # reduced echelon basis of the Krylov space, with the expression of
    # each original Krylov vector in terms of it
    ech, pivots, expr = [], [], []
    cur = v
    while True:
        red, piv, combo, scale = _row_echelon_insert(ech, pivots, cur)
        if red is None:
            # dependent: x^m = sum over previous powers
            m = len(krylov) - 1
            coeffs = [Fraction(0)] * m
            for idx, f in combo.items():
                for p_idx, c in expr[idx].items():
                    coeffs[p_idx] += f * c
            return coeffs, krylov
        ech.append(red)
        pivots.append(piv)
        # red = (cur - sum combo*ech_prev)/scale; track powers instead:
        # express ech rows in terms of Krylov powers
        e = {len(krylov) - 1: Fraction(1) / scale}
        for idx, f in combo.items():
            for p_idx, c in expr[idx].items():
                e[p_idx] = e.get(p_idx, Fraction(0)) - f * c / scale
        expr.append(e)
        cur = step(cur)
        krylov.append(cur)
        if len(krylov) > n + 1:
            raise RuntimeError("krylov iteration failed to terminate")


def _rational_roots(rec_coeffs):
    """Roots (with multiplicity) of x^m - sum a_i x^i over the rationals."""
    m = len(rec_coeffs)
    x = sympy.Symbol("x")
    poly = x ** m - sum(sympy.Rational(c.numerator, c.denominator) * x ** i
                        for i, c in enumerate(rec_coeffs))
    roots = sympy.roots(sympy.Poly(poly, x))
    out = {}
    total = 0
    for r, mult in roots.items():
        if not r.is_rational:
            raise ValueError(
                "limit system has an irrational rate: %s" % r)
        out[Fraction(int(sympy.numer(r)), int(sympy.denom(r)))] = mult
        total += mult
    if total != m:
        raise ValueError("annihilator does not factor over the rationals")
    return out


def _match_exponentials(roots, taylor):
    """Solve for coefficients of t^j e^(rt) matching i! * [t^i] values."""
    cols = []
    for r in sorted(roots):
        for j in range(roots[r]):
            cols.append((r, j))
    m = len(cols)
    aug = []
    for i in range(m):
        row = []
        for r, j in cols:
            if i < j:
                row.append(Fraction(0))
            else:
                row.append(r ** (i - j)
                           * Fraction(math.factorial(i),
                                      math.factorial(i - j)))
        row.append(taylor[i])
        aug.append(row)
    # gaussian elimination over the rationals
    for c in range(m):
        p = next(r for r in range(c, m) if aug[r][c])
        aug[c], aug[p] = aug[p], aug[c]
        inv = Fraction(1) / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(m):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    sol = [aug[i][m] for i in range(m)]
    terms = {}
    for (r, j), c in zip(cols, sol):
        cur = terms.setdefault(r, [])
        while len(cur) <= j:
            cur.append(Fraction(0))
        cur[j] += c
    return MomentFunction(terms)


def solve_semigroup_row(gen, seed_index):
    """Exact (delta_diag o e^(tL)) applied to one basis coordinate."""
    dvec = [Fraction(delta_diag(b)) for b in gen.basis]
    rec, krylov = _krylov_annihilator(gen, seed_index)
    m = len(rec)
    if m == 0:
        return MomentFunction.zero()
    roots = _rational_roots(rec)
    taylor = []
    for i in range(m):
        taylor.append(sum(x * d for x, d in zip(krylov[i], dvec)
                          if x))
    return _match_exponentials(roots, taylor)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def evolve_finite(seed, word, t, df, field, weights=None):
    """Expected statistic of the seed diagram at time t, dimension df."""
    if t < 0:
        raise ValueError("negative time")
    fclass = field_class(field)
    basis = reachable_basis(seed, word, df, fclass)
    gen = build_generator_finite(basis, word, df, field, weights)
    dvec = np.array([float(delta_diag(b)) for b in basis])
    prop = expm(float(t) * gen.dense())
    return float(prop[gen.index(seed)] @ dvec)


def evolve_limit(seed, word, ratios, fclass="real", weights=None):
    """Exact limit moment function of the seed diagram."""
    basis = reachable_basis(seed, word, ratios, fclass)
    gen = build_generator_limit(basis, word, ratios, fclass, weights)
    return solve_semigroup_row(gen, gen.index(seed))


def moment_of_word(tokens, n, t=None, field=None, block_dim=None):
    """Moment of a word in the block entries u_ij^eps.

    With field and block_dim given, returns the finite-dimension value at
    time t for square blocks of that dimension; otherwise returns the
    exact limit MomentFunction (evaluated at t when t is given).
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("empty word")
    seed, word = encode_word(tokens)
    if field is not None:
        if block_dim is None or t is None:
            raise ValueError("finite evaluation needs block_dim and t")
        from .brauer import square_df

        df = square_df(n, block_dim)
        return evolve_finite(seed, word, t, df, field)
    mf = evolve_limit(seed, word, square_ratios(n), "complex")
    if t is not None:
        return mf.value(t)
    return mf


def _restrict_to_cycle(b, word, slots):
    """Sub-diagram and sub-word on one union of cycles, slots re-indexed."""
    slots = sorted(slots)
    pos = {s: i + 1 for i, s in enumerate(slots)}
    k_new, k = len(slots), b.k
    pairs = []
    for x, y in b.pairing.pairs:
        bx = x if x <= k else x - k
        if bx not in pos:
            continue

        def conv(p):
            return pos[p] if p <= k else k_new + pos[p - k]

        pairs.append((conv(x), conv(y)))
    cols = [0] * (2 * k_new)
    for s in slots:
        cols[pos[s] - 1] = b.colour(s)
        cols[k_new + pos[s] - 1] = b.colour(k + s)
    sub = ColouredBrauerDiagram(Pairing(k_new, pairs), cols)
    sub_word = Word(word[s - 1] for s in slots)
    return sub, sub_word


def factorized_moment(b, word, ratios, fclass="real", t=None):
    """Limit moment computed as a product over the diagram's cycles."""
    cp = cycle_partition(b.pairing)
    out = MomentFunction.constant(1)
    for block in cp.blocks:
        slots = sorted(p for p in block if p <= b.k)
        sub, sub_word = _restrict_to_cycle(b, word, slots)
        out = out * evolve_limit(sub, sub_word, ratios, fclass)
    if t is not None:
        return out.value(t)
    return out
