import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from mfe.brauer import (
    ColouredBrauerDiagram,
    DimensionFunction,
    Pairing,
    Word,
    WordLetter,
    compose,
    encode_word,
    fnc,
    identity_diagram,
    nc,
    square_df,
)
from mfe.evaltrace import materialize_rho, total_dim
from mfe.generators import (
    _ratio_factor,
    admissible_moves,
    build_generator_finite,
    build_generator_limit,
    casimir_drift,
    compatible_words,
    delta_diag,
    generator_free_process,
    is_compatible,
    reachable_basis,
    schurmann_L,
    schurmann_eta,
    slot_allows,
    square_ratios,
)


def plain_word(k, letter=1):
    return Word(WordLetter(letter) for _ in range(k))


def c2_seed(n=1):
    b, w = encode_word([(1, 1, False), (1, 1, False)])
    return b, w


def random_valid_diagram(rng, k, df):
    n = df.n
    pts = list(range(1, 2 * k + 1))
    rng.shuffle(pts)
    pairs = [(pts[2 * i], pts[2 * i + 1]) for i in range(k)]
    cols = [0] * (2 * k)
    for x, y in pairs:
        c = rng.randrange(1, n + 1)
        c2 = rng.choice([d for d in range(1, n + 1)
                         if df.value(d) == df.value(c)])
        cols[x - 1], cols[y - 1] = c, c2
    return ColouredBrauerDiagram(Pairing(k, pairs), cols)


# ---------------------------------------------------------------------------
# independent oracle: the generator of the matrix-valued process on the
# k-fold tensor space, built from an orthonormal basis of the Lie algebra
# ---------------------------------------------------------------------------

def lie_basis(field, n):
    mats = []
    if field == "R":
        s = 1.0 / math.sqrt(n)
        for i in range(n):
            for j in range(i + 1, n):
                m = np.zeros((n, n), complex)
                m[i, j], m[j, i] = s, -s
                mats.append(m)
        return mats
    s = 1.0 / math.sqrt(2 * n)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), complex)
            m[i, j], m[j, i] = s, -s
            mats.append(m)
            m2 = np.zeros((n, n), complex)
            m2[i, j] = m2[j, i] = 1j * s
            mats.append(m2)
    for j in range(n):
        m = np.zeros((n, n), complex)
        m[j, j] = 1j / math.sqrt(n)
        mats.append(m)
    return mats


def kron_chain(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def tensor_generator(word, n, field):
    """Ito generator of t -> (x)_l U_t^(l), conjugated at barred slots,
    with independent motions for distinct letters."""
    k = len(word)
    basis = lie_basis(field, n)
    eye = np.eye(n, dtype=complex)
    cas = sum(a @ a for a in basis) / 2.0
    g = np.zeros((n ** k, n ** k), complex)
    for l in range(k):
        m = cas.conj() if word[l].bar else cas
        g += kron_chain([m if p == l else eye for p in range(k)])
    for l in range(k):
        for p in range(l + 1, k):
            if word[l].letter != word[p].letter:
                continue
            for a in basis:
                al = a.conj() if word[l].bar else a
                ap = a.conj() if word[p].bar else a
                g += kron_chain(
                    [al if q == l else ap if q == p else eye
                     for q in range(k)])
    return g


def moment_prediction(gen, t):
    """Expected statistics at time t for every basis element, from the
    diagram-side generator: rows of exp(tG) against the diagonal indicator."""
    dvec = np.array([float(delta_diag(b)) for b in gen.basis])
    return expm(t * gen.dense()) @ dvec


def oracle_value(b, df, e_t):
    norm = 1.0
    for cls in df.classes():
        norm *= float(df.value(cls)) ** (-fnc(b, df, cls))
    return norm * np.trace(materialize_rho(b, df) @ e_t)


class TestFilters:
    def test_real_needs_same_letter_only(self):
        w = Word([WordLetter(1), WordLetter(2, bar=True)])
        assert not slot_allows(w, 1, 2, "tau", "real")
        w2 = Word([WordLetter(1), WordLetter(1, bar=True)])
        assert slot_allows(w2, 1, 2, "tau", "real")
        assert slot_allows(w2, 1, 2, "e", "real")

    def test_complex_bar_rules(self):
        same = Word([WordLetter(1), WordLetter(1)])
        opp = Word([WordLetter(1), WordLetter(1, bar=True)])
        assert slot_allows(same, 1, 2, "tau", "complex")
        assert not slot_allows(same, 1, 2, "e", "complex")
        assert not slot_allows(opp, 1, 2, "tau", "complex")
        assert slot_allows(opp, 1, 2, "e", "complex")


class TestClosure:
    def test_single_point_identity(self):
        b = identity_diagram(1, [1])
        w = plain_word(1)
        for fclass in ("real", "complex"):
            assert reachable_basis(b, w, square_df(1), fclass) == [b]

    def test_cycle_two_complex(self):
        b, w = c2_seed()
        basis = reachable_basis(b, w, square_df(1), "complex")
        assert len(basis) == 2
        assert identity_diagram(2, [1, 1]) in basis

    def test_cycle_two_real(self):
        b, w = c2_seed()
        basis = reachable_basis(b, w, square_df(1), "real")
        assert len(basis) == 3

    def test_word_length_mismatch(self):
        with pytest.raises(ValueError):
            reachable_basis(identity_diagram(2, [1, 1]), plain_word(1),
                            square_df(1), "real")

    def test_bound(self):
        b, w = c2_seed()
        with pytest.raises(ValueError):
            reachable_basis(b, w, square_df(1), "real", bound=2)


class TestDrifts:
    def test_single_letter_rates(self):
        b = identity_diagram(1, [1])
        w = plain_word(1)
        for df in (DimensionFunction([5]), DimensionFunction([2, 3])):
            n = total_dim(df)
            for field, want in (
                    ("C", Fraction(-1, 2)),
                    ("R", Fraction(-(n - 1), 2 * n)),
                    ("H", Fraction(-(2 * n + 1), 4 * n))):
                basis = [identity_diagram(1, [1])]
                gen = build_generator_finite(basis, w, df, field)
                assert gen.size == 1
                assert gen.entry(0, 0) == want
        assert casimir_drift("C", 7) == Fraction(-1, 2)

    def test_limit_rate(self):
        basis = [identity_diagram(1, [1])]
        gen = build_generator_limit(basis, plain_word(1), square_ratios(1))
        assert gen.entry(0, 0) == Fraction(-1, 2)

    def test_unknown_field(self):
        with pytest.raises(ValueError):
            casimir_drift("Q", 3)


class TestFiniteAgainstTensorOperator:
    # E[(x)_l U_t^(l)] = exp(t G_tensor); every diagram statistic read from
    # it must match the diagram-side semigroup.

    def check(self, seed, word, df, field, t=0.7):
        n = total_dim(df)
        basis = reachable_basis(seed, word, df,
                                "complex" if field == "C" else "real")
        gen = build_generator_finite(basis, word, df, field)
        pred = moment_prediction(gen, t)
        e_t = expm(t * tensor_generator(word, n, field))
        for i, b in enumerate(basis):
            assert np.isclose(pred[i], oracle_value(b, df, e_t), atol=1e-8), \
                (field, df.dims, i)

    def test_casimir_normalization(self):
        for field in ("R", "C"):
            for n in (2, 3, 4):
                cas = sum(a @ a for a in lie_basis(field, n)) / 2.0
                want = float(casimir_drift(field, n)) * np.eye(n)
                assert np.allclose(cas, want)

    @pytest.mark.parametrize("field", ["R", "C"])
    def test_square_one_colour(self, field):
        seed, word = c2_seed()
        self.check(seed, word, square_df(1, 3), field)

    @pytest.mark.parametrize("field", ["R", "C"])
    def test_square_two_colours(self, field):
        seed, word = encode_word([(1, 2, False), (2, 1, False)])
        self.check(seed, word, square_df(2, 2), field)

    def test_barred_word_complex(self):
        seed, word = encode_word([(1, 1, True), (1, 1, False)])
        self.check(seed, word, square_df(1, 3), "C")

    def test_barred_word_rectangular(self):
        seed, word = encode_word([(1, 2, False), (1, 2, True)])
        self.check(seed, word, DimensionFunction([2, 1]), "C")

    @pytest.mark.parametrize("field", ["R", "C"])
    def test_rectangular_real_word(self, field):
        seed, word = encode_word([(1, 2, False), (2, 1, False)])
        self.check(seed, word, DimensionFunction([2, 1]), field)

    def test_three_slots(self):
        seed, word = encode_word(
            [(1, 2, False), (2, 2, False), (2, 1, False)])
        self.check(seed, word, square_df(2, 2), "C", t=0.4)

    def test_two_independent_letters(self):
        seed, word = encode_word([(1, 1, False), (1, 1, False)],
                                 letters=[1, 2])
        self.check(seed, word, square_df(1, 3), "C")

    def test_weights_scale_time(self):
        # doubling a letter's weight doubles its contribution to the rows
        seed, word = c2_seed()
        df = square_df(1, 3)
        basis = reachable_basis(seed, word, df, "complex")
        g1 = build_generator_finite(basis, word, df, "C")
        g2 = build_generator_finite(basis, word, df, "C",
                                    weights={1: Fraction(2)})
        for i in range(g1.size):
            for j in range(g1.size):
                assert g2.entry(i, j) == 2 * g1.entry(i, j)

    def test_unclosed_basis_rejected(self):
        seed, word = c2_seed()
        with pytest.raises(ValueError):
            build_generator_finite([seed], word, square_df(1, 3), "C")


class TestQuaternionEntries:
    def test_square_rows(self):
        # single colour of dimension d: the move to the identity keeps the
        # entry -1 for both R and H, while non-creating entries differ
        seed, word = c2_seed()
        for d in (2, 5):
            df = square_df(1, d)
            basis = reachable_basis(seed, word, df, "real")
            gr = build_generator_finite(basis, word, df, "R")
            gh = build_generator_finite(basis, word, df, "H")
            i = gr.index(seed)
            j = gr.index(identity_diagram(2, [1, 1]))
            assert gr.entry(i, j) == -1
            assert gh.entry(i, j) == -1
            e_diag = next(b for b in basis
                          if b not in (seed, identity_diagram(2, [1, 1])))
            je = gr.index(e_diag)
            assert gr.entry(i, je) == Fraction(1, d)
            assert gh.entry(i, je) == Fraction(-1, 2 * d)


class TestLimitGenerator:
    def test_square_rows_k2(self):
        seed, word = c2_seed()
        ratios = square_ratios(1)
        basis = reachable_basis(seed, word, ratios, "real")
        gen = build_generator_limit(basis, word, ratios)
        ident = identity_diagram(2, [1, 1])
        e_diag = next(b for b in basis if b not in (seed, ident))
        i, j, je = gen.index(seed), gen.index(ident), gen.index(e_diag)
        assert gen.entry(i, i) == -1 and gen.entry(i, j) == -1
        assert gen.entry(i, je) == 0
        assert gen.entry(j, j) == -1 and gen.entry(j, i) == 0
        # the projection feeds itself a loop: +1 against drift -1
        assert gen.entry(je, je) == 0

    def test_square_entries_are_inverse_block_counts(self):
        # with equal ratios 1/n every creating entry is +-(1/n)^(power)
        seed, word = encode_word([(1, 2, False), (2, 1, False)])
        ratios = square_ratios(2)
        basis = reachable_basis(seed, word, ratios, "complex")
        gen = build_generator_limit(basis, word, ratios, "complex")
        seen = set()
        for i in range(gen.size):
            for j, v in gen.rows[i].items():
                if i != j and v:
                    assert abs(v).denominator in (1, 2, 4)
                    seen.add(v)
        assert Fraction(-1, 2) in seen

    def test_creating_exponent_homogeneity(self):
        # a move survives the limit iff its total dimension exponent is 1
        rng = random.Random(20)
        for df in (square_df(1), square_df(2), DimensionFunction([2, 1])):
            for _ in range(20):
                k = rng.randrange(2, 5)
                b = random_valid_diagram(rng, k, df)
                w = plain_word(k)
                for _, r, kind in admissible_moves(b, w, df, "real"):
                    out = compose(r, b, df)
                    total = sum(
                        out.loops.get(cls, 0)
                        + fnc(out.diagram, df, cls) - fnc(b, df, cls)
                        for cls in df.classes())
                    from mfe.brauer import creates_cycle
                    if creates_cycle(r.pairing, b.pairing):
                        assert total == 1
                    else:
                        assert total <= 0

    def test_finite_entries_converge_at_rate_one_over_d(self):
        seed, word = c2_seed()
        ratios = square_ratios(1)
        basis = reachable_basis(seed, word, ratios, "real")
        glim = build_generator_limit(basis, word, ratios)
        last = None
        for d in (10, 100, 1000):
            df = square_df(1, d)
            err = Fraction(0)
            for field in ("R", "H"):
                gfin = build_generator_finite(basis, word, df, field)
                for i in range(glim.size):
                    for j in range(glim.size):
                        err = max(err, abs(gfin.entry(i, j)
                                           - glim.entry(i, j)))
            assert err <= Fraction(4, d)
            if last is not None:
                assert err < last
            last = err

    def test_zero_ratio_rejected(self):
        with pytest.raises((ValueError, ZeroDivisionError)):
            build_generator_limit(
                [identity_diagram(1, [1])], plain_word(1),
                DimensionFunction({1: Fraction(0)}))


class TestFreeProcess:
    def test_diagonal_generator(self):
        for n in (1, 2, 3):
            assert generator_free_process([(1, 1, False)], n) == \
                Fraction(-1, 2)
            assert generator_free_process([(n, n, True)], n) == \
                Fraction(-1, 2)

    def test_off_diagonal_vanishes(self):
        assert generator_free_process([(1, 2, False)], 2) == 0
        assert generator_free_process([(2, 1, True)], 3) == 0

    def test_square_of_generator(self):
        assert generator_free_process(
            [(1, 1, False), (1, 1, False)], 1) == -2

    def test_mixed_cycle(self):
        assert generator_free_process(
            [(1, 2, False), (2, 1, False)], 2) == Fraction(-1, 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            generator_free_process([], 1)

    def test_unitarity_sums_are_constant(self):
        # sum_r u*_ri u_rj and sum_r u_ir u*_jr are delta_ij, so the
        # generator must vanish on them
        for n in (1, 2, 3):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    assert sum(generator_free_process(
                        [(r, i, True), (r, j, False)], n)
                        for r in range(1, n + 1)) == 0
                    assert sum(generator_free_process(
                        [(i, r, False), (j, r, True)], n)
                        for r in range(1, n + 1)) == 0


class TestSchurmann:
    def test_eta_on_generators(self):
        e = schurmann_eta([(1, 2, False)], 2)
        assert e[0][1] == 1 and sum(map(abs, e[0] + e[1])) == 1
        es = schurmann_eta([(1, 2, True)], 2)
        assert es[1][0] == -1

    def test_eta_cocycle_on_product(self):
        # eta(u11 u12) = eta(u11) eps(u12) + eps(u11) eta(u12) = E12
        e = schurmann_eta([(1, 1, False), (1, 2, False)], 2)
        assert e[0][1] == 1 and e[0][0] == 0

    def test_L_on_generators(self):
        for n in (1, 2, 3):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    want = Fraction(-1, 2) if i == j else 0
                    assert schurmann_L([(i, j, False)], n) == want
                    assert schurmann_L([(i, j, True)], n) == want

    def test_unitarity_relations_killed(self):
        # L vanishes on sum_r u*_ri u_rj - delta_ij
        for n in (1, 2, 3):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    total = sum(
                        schurmann_L([(r, i, True), (r, j, False)], n)
                        for r in range(1, n + 1))
                    assert total == 0

    def test_square_word(self):
        assert schurmann_L([(1, 1, False), (1, 1, False)], 1) == -2

    def test_matches_diagram_generator_on_random_words(self):
        rng = random.Random(21)
        for _ in range(40):
            n = rng.randrange(1, 4)
            k = rng.randrange(1, 5)
            tokens = [(rng.randrange(1, n + 1), rng.randrange(1, n + 1),
                       rng.random() < 0.5) for _ in range(k)]
            assert schurmann_L(tokens, n) == \
                generator_free_process(tokens, n), (tokens, n)


def limit_row(b, word, ratios, fclass):
    row = {}
    for (si, _), r, kind in admissible_moves(
            b, word, ratios, fclass, creating_only=True):
        out = compose(r, b, ratios)
        sign = Fraction(-1 if kind == "tau" else 1)
        val = sign * _ratio_factor(b, out, ratios, False)
        key = out.diagram
        row[key] = row.get(key, Fraction(0)) + val
    return row


class TestCompatiblePairs:
    def test_word_count_is_two_per_cycle(self):
        rng = random.Random(22)
        for _ in range(10):
            k = rng.randrange(1, 5)
            b = random_valid_diagram(rng, k, square_df(1))
            words = compatible_words(b)
            assert len(words) == 2 ** nc(b.pairing)
            assert len(set(words)) == len(words)
            for w in words:
                assert is_compatible(b, w)

    def test_incompatible_detected(self):
        b, _ = c2_seed()  # single cycle through both slots
        w = Word([WordLetter(1), WordLetter(1, bar=True)])
        # the 2-cycle's canonical signs are (+, +): one bar breaks it
        assert not is_compatible(b, w)

    def test_complex_row_equals_real_row_on_compatible_pairs(self):
        # on a compatible pair the bar filters select exactly the creating
        # moves, so the letter-blind generator row is reproduced
        rng = random.Random(23)
        ratios = DimensionFunction({1: Fraction(1, 2)})
        for _ in range(25):
            k = rng.randrange(1, 5)
            b = random_valid_diagram(rng, k, ratios)
            plain = plain_word(k)
            real_row = limit_row(b, plain, ratios, "real")
            for w in compatible_words(b):
                assert limit_row(b, w, ratios, "complex") == real_row
                for target in real_row:
                    assert is_compatible(target, w)
