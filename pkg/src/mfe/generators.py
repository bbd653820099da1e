"""Moment generators on (diagram, word) bases.

A basis is the closure of a seed diagram under left multiplication by the
elementary diagrams the word admits.  On it the finite-dimension
generator has drift c_N^K per letter and off-diagonal entries given by
loop counts and fnc differences; the limit generator keeps only the
cycle- or loop-creating moves, with dimension ratios in place of
dimensions.  The Schuermann triple gives an independent closed form for
the limit generator evaluated on words.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .brauer import (
    ColouredBrauerDiagram,
    DimensionFunction,
    creates_cycle,
    compose,
    encode_word,
    fnc,
    format_diagram,
    matching_es,
    matching_tau,
    Word,
    WordLetter,
)

BASIS_BOUND = 20000


def field_class(field):
    return "complex" if field in ("C", "complex") else "real"


def slot_allows(word, i, j, kind, fclass):
    """Word filter for an elementary move joining slots i and j.

    Real-like processes need the same letter on both slots; the complex
    process additionally needs equal bars for transpositions and opposite
    bars for projections.
    """
    wi, wj = word[i - 1], word[j - 1]
    if wi.letter != wj.letter:
        return False
    if fclass == "real":
        return True
    if kind == "tau":
        return wi.bar == wj.bar
    return wi.bar != wj.bar


def delta_diag(b: ColouredBrauerDiagram) -> int:
    """Indicator of diagonally coloured diagrams: c(i) = c(i') for all i."""
    k = b.k
    return int(all(b.colour(i) == b.colour(k + i) for i in range(1, k + 1)))


def admissible_moves(b, word, df, fclass, creating_only=False):
    """All (slots, elementary, kind) gluable onto b that the word admits."""
    out = []
    for i in range(1, b.k + 1):
        for j in range(i + 1, b.k + 1):
            if slot_allows(word, i, j, "tau", fclass):
                r = matching_tau(b, i, j)
                if not creating_only or creates_cycle(r.pairing, b.pairing):
                    out.append(((i, j), r, "tau"))
            if slot_allows(word, i, j, "e", fclass):
                for r in matching_es(b, i, j, df.n):
                    if not creating_only or creates_cycle(
                            r.pairing, b.pairing):
                        out.append(((i, j), r, "e"))
    return out


def reachable_basis(seed, word, df, fclass, bound=BASIS_BOUND):
    """BFS closure of the seed under admissible left multiplications."""
    if len(word) != seed.k:
        raise ValueError("word length does not match diagram size")
    basis, index = [seed], {seed: 0}
    queue = [seed]
    while queue:
        b = queue.pop(0)
        for _, r, _ in admissible_moves(b, word, df, fclass):
            out = compose(r, b, df)
            nxt = out.diagram
            if nxt not in index:
                if len(basis) >= bound:
                    raise ValueError("reachable basis exceeds %d" % bound)
                index[nxt] = len(basis)
                basis.append(nxt)
                queue.append(nxt)
    return basis


class GeneratorMatrix:
    """Generator as sparse rows of exact rationals over an ordered basis.

    rows[i][j] is the coefficient of basis[j] in L(basis[i]).
    """

    def __init__(self, basis, word, rows):
        self.basis = list(basis)
        self.word = word
        self.rows = [dict(r) for r in rows]
        self._index = {b: i for i, b in enumerate(self.basis)}

    def index(self, b):
        return self._index[b]

    def entry(self, i, j):
        return self.rows[i].get(j, Fraction(0))

    @property
    def size(self):
        return len(self.basis)

    def dense(self):
        a = np.zeros((self.size, self.size))
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                a[i, j] = float(v)
        return a

    def __repr__(self):
        return "GeneratorMatrix(size=%d, word=%r)" % (self.size, self.word)


def casimir_drift(field, total_n):
    """Drift scalar c_N^K, half the Casimir eigenvalue on K^N."""
    n = Fraction(total_n)
    if field == "C":
        return Fraction(-1, 2)
    if field == "R":
        return -(n - 1) / (2 * n)
    if field == "H":
        return -(2 * n + 1) / (4 * n)
    raise ValueError("unknown field %r" % (field,))


def _weight(weights, letter):
    if weights is None:
        return Fraction(1)
    return Fraction(weights[letter])


def _ratio_factor(b, out, df, sign_scale):
    """Product over classes of base^(loops + fnc(b') - fnc(b)).

    base is the class dimension (or ratio), negated and doubled for the
    quaternionic scale.
    """
    val = Fraction(1)
    for cls in df.classes():
        base = df.value(cls)
        if sign_scale:
            base = -2 * base
        expo = (out.loops.get(cls, 0)
                + fnc(out.diagram, df, cls) - fnc(b, df, cls))
        val *= base ** expo
    return val


def build_generator_finite(basis, word, df, field, weights=None):
    """Finite-dimension generator on a closed basis; exact rationals.

    Entry for a move r at slots (i, j):
      sign(r) * t_letter * (1/base_N) * prod_cls base_cls^(loops + dfnc)
    with base = dims (R, C) or -2 dims (H), base_N the matching total.
    """
    fclass = field_class(field)
    index = {b: i for i, b in enumerate(basis)}
    total_n = sum(int(v) for v in df.dims.values())
    quat = field == "H"
    base_n = Fraction(-2 * total_n if quat else total_n)
    drift_c = casimir_drift(field, total_n)
    rows = [dict() for _ in basis]
    for i, b in enumerate(basis):
        d = drift_c * sum(_weight(weights, l.letter) for l in word.letters)
        rows[i][i] = rows[i].get(i, Fraction(0)) + d
        for (si, _), r, kind in admissible_moves(b, word, df, fclass):
            out = compose(r, b, df)
            if out.diagram not in index:
                raise ValueError("basis not closed under %s at %s" % (
                    kind, format_diagram(b)))
            j = index[out.diagram]
            sign = Fraction(-1 if kind == "tau" else 1)
            wt = _weight(weights, word[si - 1].letter)
            val = sign * wt * _ratio_factor(b, out, df, quat) / base_n
            rows[i][j] = rows[i].get(j, Fraction(0)) + val
    return GeneratorMatrix(basis, word, rows)


def build_generator_limit(basis, word, ratios, fclass="real", weights=None):
    """Large-dimension limit generator: drift -1/2 per weighted letter and
    only the cycle- or loop-creating moves, weighted by ratio factors.

    Built identically for the limits of the real and quaternionic
    processes; the complex variant differs only through the word filters.
    """
    if any(v <= 0 for v in ratios.dims.values()):
        raise ValueError("ratios must be positive")
    index = {b: i for i, b in enumerate(basis)}
    rows = [dict() for _ in basis]
    for i, b in enumerate(basis):
        d = Fraction(-1, 2) * sum(
            _weight(weights, l.letter) for l in word.letters)
        rows[i][i] = rows[i].get(i, Fraction(0)) + d
        for (si, _), r, kind in admissible_moves(
                b, word, ratios, fclass, creating_only=True):
            out = compose(r, b, ratios)
            if out.diagram not in index:
                raise ValueError("basis not closed at %s" % format_diagram(b))
            j = index[out.diagram]
            sign = Fraction(-1 if kind == "tau" else 1)
            wt = _weight(weights, word[si - 1].letter)
            val = sign * wt * _ratio_factor(b, out, ratios, False)
            rows[i][j] = rows[i].get(j, Fraction(0)) + val
    return GeneratorMatrix(basis, word, rows)


def square_ratios(n):
    """Equal block ratios 1/n for the square n-block limit."""
    return DimensionFunction({c: Fraction(1, n) for c in range(1, n + 1)})


def generator_free_process(tokens, n):
    """Limit generator evaluated on a word of the n x n unitary dual group.

    The value is the t-derivative at 0 of the word's limit moment:
    delta_diag contracted against the limit-generator row of the encoded
    seed diagram.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("empty word")
    seed, word = encode_word(tokens)
    ratios = square_ratios(n)
    total = Fraction(-1, 2) * len(word) * delta_diag(seed)
    for _, r, kind in admissible_moves(
            seed, word, ratios, "complex", creating_only=True):
        out = compose(r, seed, ratios)
        sign = Fraction(-1 if kind == "tau" else 1)
        total += (sign * _ratio_factor(seed, out, ratios, False)
                  * delta_diag(out.diagram))
    return total


# ---------------------------------------------------------------------------
# Schuermann triple of the free unitary Brownian motion
# ---------------------------------------------------------------------------

def _counit(tokens):
    """epsilon(u_ij^eps) = delta_ij, multiplicative on words."""
    val = Fraction(1)
    for i, j, _ in tokens:
        if i != j:
            return Fraction(0)
    return val


def _star_word(tokens):
    return [(i, j, not star) for i, j, star in reversed(tokens)]


def schurmann_eta(tokens, n):
    """Cocycle eta as an n x n rational matrix.

    On generators eta(u_ij) is the matrix unit E_ij and eta(u*_ij) is
    -E_ji; since the representation part is the counit times identity,
    eta(w) = sum_l eta(w_l) prod_{m != l} eps(w_m).
    """
    tokens = list(tokens)
    eta = [[Fraction(0)] * n for _ in range(n)]
    for l, (i, j, star) in enumerate(tokens):
        scale = Fraction(1)
        for m, tok in enumerate(tokens):
            if m != l:
                scale *= _counit([tok])
        if scale == 0:
            continue
        if star:
            eta[j - 1][i - 1] -= scale
        else:
            eta[i - 1][j - 1] += scale
    return eta


def _eta_inner(x, y, n):
    """<X, Y> = (1/n) Tr(X* Y) on real rational matrices."""
    total = Fraction(0)
    for a in range(n):
        for b in range(n):
            total += x[a][b] * y[a][b]
    return total / n


def schurmann_L(tokens, n):
    """Generator of the free unitary Brownian motion on a word.

    Extends L(u_ij^eps) = -delta_ij / 2 through
    L(a w) = L(a) eps(w) + eps(a) L(w) + <eta(a*), eta(w)>.
    """
    tokens = list(tokens)
    if not tokens:
        return Fraction(0)
    i, j, _ = tokens[0]
    head, rest = tokens[:1], tokens[1:]
    val = Fraction(-1, 2) if i == j else Fraction(0)
    if not rest:
        return val
    return (val * _counit(rest)
            + _counit(head) * schurmann_L(rest, n)
            + _eta_inner(schurmann_eta(_star_word(head), n),
                         schurmann_eta(rest, n), n))


# ---------------------------------------------------------------------------
# compatible (diagram, word) pairs
# ---------------------------------------------------------------------------

def is_compatible(b, word):
    """Whether the word's bar pattern matches the diagram's orientation.

    Reading a bar as sign -1, the pattern must agree with the canonical
    orientation up to a global flip on each cycle of the diagram.
    """
    from .brauer import canonical_orientation, oriented_cycles

    signs = [-1 if l.bar else 1 for l in word.letters]
    canon = canonical_orientation(b.pairing)
    for cyc, _ in oriented_cycles(b.pairing, canon):
        rel = {signs[i - 1] * canon.sign(i) for i in cyc}
        if len(rel) > 1:
            return False
    return True


def compatible_words(b, letter=1):
    """All single-letter bar words compatible with the diagram.

    A sign vector s is admissible when on every cycle of the diagram it
    equals the canonical orientation or its negation; the word puts a bar
    exactly at the negative slots.
    """
    from itertools import product

    from .brauer import canonical_orientation, oriented_cycles

    s = canonical_orientation(b.pairing)
    cycles = [c for c, _ in oriented_cycles(b.pairing, s)]
    words = []
    for flips in product((1, -1), repeat=len(cycles)):
        signs = list(s.signs)
        for cyc, fl in zip(cycles, flips):
            if fl == -1:
                for i in cyc:
                    signs[i - 1] = -signs[i - 1]
        words.append(Word(WordLetter(letter, bar=(x == -1)) for x in signs))
    return words
