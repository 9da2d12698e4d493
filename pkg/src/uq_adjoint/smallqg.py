"""The small quantum group u_q(sl2) at an odd root of unity.

Elements are sparse combinations of PBW monomials E^a F^b K^c.  Products are
normal-ordered by a string rewriting system

    KE -> q^2 EK,   KF -> q^-2 FK,   FE -> EF - (K - K^(l-1))/(q - q^-1),
    E^l -> 0,       F^l -> 0,        K^l -> 1,

applied one redex at a time.  Products of a monomial with a single generator
are memoized and general products are assembled from those.
"""

from __future__ import annotations

import json
import random
from functools import lru_cache
from typing import Iterable, NamedTuple

from .cyclotomic import Cyc, CyclotomicField, field
from .linalg import Matrix, Subspace
from . import polynomial as poly
from .modcat import BlockIndex, GradedModule, block_indices

__all__ = [
    "Monomial",
    "AlgElem",
    "TensorElem",
    "SmallQuantumGroup",
    "small_quantum_group",
]


class Monomial(NamedTuple):
    a: int  # exponent of E
    b: int  # exponent of F
    c: int  # exponent of K

    @property
    def degree(self) -> int:
        return 2 * self.a - 2 * self.b

    def word(self) -> str:
        return "E" * self.a + "F" * self.b + "K" * self.c

    def __str__(self) -> str:
        parts = [f"{g}^{e}" if e > 1 else g for g, e in zip("EFK", self) if e]
        return "*".join(parts) or "1"


class AlgElem:
    """A sparse element of u: ``{Monomial: Cyc}`` with nonzero coefficients."""

    __slots__ = ("U", "terms")

    def __init__(self, U: "SmallQuantumGroup", terms: dict[Monomial, Cyc] | None = None):
        self.U = U
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in sorted(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Cyc)):
            other = self.U.scalar(other)
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "AlgElem") -> "AlgElem":
        if isinstance(other, (int, Cyc)):
            other = self.U.scalar(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return AlgElem(self.U, out)

    __radd__ = __add__

    def __neg__(self) -> "AlgElem":
        return AlgElem(self.U, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgElem") -> "AlgElem":
        if isinstance(other, (int, Cyc)):
            other = self.U.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "AlgElem":
        return (-self) + other

    def scale(self, s) -> "AlgElem":
        s = self.U.K(s)
        if not s:
            return AlgElem(self.U)
        return AlgElem(self.U, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other) -> "AlgElem":
        if isinstance(other, AlgElem):
            return self.U.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "AlgElem":
        return self.scale(other)

    def __pow__(self, e: int) -> "AlgElem":
        out = self.U.one()
        for _ in range(e):
            out = out * self
        return out

    def weights(self) -> set[int]:
        return {m.degree for m in self.terms}

    def to_json(self) -> list:
        return [[list(m), c.to_json()] for m, c in sorted(self.terms.items())]


class TensorElem:
    """A sparse element of u (x) u: ``{(Monomial, Monomial): Cyc}``."""

    __slots__ = ("U", "terms")

    def __init__(self, U, terms=None):
        self.U = U
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "TensorElem") -> "TensorElem":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElem(self.U, out)

    def __repr__(self) -> str:
        return " + ".join(f"({c})*{m1}(x){m2}" for (m1, m2), c in sorted(self.terms.items())) or "0"

    def __mul__(self, other: "TensorElem") -> "TensorElem":
        U = self.U
        out: dict = {}
        for (x1, x2), c in self.terms.items():
            for (y1, y2), d in other.terms.items():
                p1 = U.mono_mul(x1, y1)
                if not p1:
                    continue
                p2 = U.mono_mul(x2, y2)
                cd = c * d
                for m1, e1 in p1.items():
                    for m2, e2 in p2.items():
                        k = (m1, m2)
                        v = cd * e1 * e2
                        out[k] = out[k] + v if k in out else v
        return TensorElem(U, out)

    @classmethod
    def pure(cls, x: AlgElem, y: AlgElem) -> "TensorElem":
        return cls(x.U, {(m1, m2): c * d for m1, c in x.terms.items() for m2, d in y.terms.items()})

    def apply_left(self, f) -> "TensorElem":
        """(f (x) id) for f: AlgElem -> AlgElem."""
        U = self.U
        out = TensorElem(U)
        for (m1, m2), c in self.terms.items():
            out = out + TensorElem.pure(f(U.monomial(*m1)).scale(c), U.monomial(*m2))
        return out

    def apply_right(self, f) -> "TensorElem":
        U = self.U
        out = TensorElem(U)
        for (m1, m2), c in self.terms.items():
            out = out + TensorElem.pure(U.monomial(*m1).scale(c), f(U.monomial(*m2)))
        return out

    def contract(self, f=None, g=None) -> AlgElem:
        """m o (f (x) g): sum f(x1) g(x2)."""
        U = self.U
        out = U.zero()
        for (m1, m2), c in self.terms.items():
            x = U.monomial(*m1) if f is None else f(U.monomial(*m1))
            y = U.monomial(*m2) if g is None else g(U.monomial(*m2))
            out = out + (x * y).scale(c)
        return out


_PAIRS = ("KE", "KF", "FE")


class SmallQuantumGroup:
    """u_q(sl2) for odd l >= 3 with q = zeta_l ** root_exponent."""

    def __init__(self, l: int, root_exponent: int = 1):
        self.K: CyclotomicField = field(l, root_exponent)
        self.l = l
        K = self.K
        self._c = (K.q - K.qinv).inv()
        self._word_cache: dict[str, dict[Monomial, Cyc]] = {}
        self._mul_cache: dict[tuple[Monomial, Monomial], dict[Monomial, Cyc]] = {}
        self._adjoint: GradedModule | None = None
        self._minpoly = None
        self._idempotents: dict[int, AlgElem] = {}
        self._cop_cache: dict[Monomial, TensorElem] = {}
        self._antipode_cache: dict[Monomial, AlgElem] = {}

    def __repr__(self) -> str:
        return f"SmallQuantumGroup(l={self.l}, root_exponent={self.K.root_exponent})"

    # -- basis ------------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.l ** 3

    def basis(self) -> list[Monomial]:
        l = self.l
        return [Monomial(a, b, c) for a in range(l) for b in range(l) for c in range(l)]

    def monomial(self, a: int = 0, b: int = 0, c: int = 0) -> AlgElem:
        l = self.l
        if a >= l or b >= l:
            return self.zero()
        return AlgElem(self, {Monomial(a, b, c % l): self.K.one})

    def zero(self) -> AlgElem:
        return AlgElem(self)

    def one(self) -> AlgElem:
        return self.monomial()

    def scalar(self, s) -> AlgElem:
        return self.one().scale(s)

    @property
    def E(self) -> AlgElem:
        return self.monomial(1, 0, 0)

    @property
    def F(self) -> AlgElem:
        return self.monomial(0, 1, 0)

    @property
    def Kgen(self) -> AlgElem:
        return self.monomial(0, 0, 1)

    @property
    def Kinv(self) -> AlgElem:
        return self.monomial(0, 0, self.l - 1)

    def word(self, w: str) -> AlgElem:
        """Normal form of a word in the letters E, F, K."""
        return AlgElem(self, self.normal_form(w))

    # -- rewriting -----------------------------------------------------------------------
    def _redexes(self, w: str) -> list[tuple[int, str]]:
        out = [(i, w[i:i + 2]) for i in range(len(w) - 1) if w[i:i + 2] in _PAIRS]
        l = self.l
        for g in "EFK":
            i = w.find(g * l)
            while i != -1:
                out.append((i, g * l))
                i = w.find(g * l, i + 1)
        return out

    def _rewrite(self, w: str, pos: int, redex: str) -> list[tuple[Cyc, str]]:
        K = self.K
        pre, post = w[:pos], w[pos + len(redex):]
        if redex == "KE":
            return [(K.q_power(2), pre + "EK" + post)]
        if redex == "KF":
            return [(K.q_power(-2), pre + "FK" + post)]
        if redex == "FE":
            c = self._c
            return [(K.one, pre + "EF" + post), (-c, pre + "K" + post),
                    (c, pre + "K" * (self.l - 1) + post)]
        if redex[0] in "EF":
            return []
        return [(K.one, pre + post)]

    def normal_form(self, w: str, strategy: str | random.Random = "leftmost") -> dict[Monomial, Cyc]:
        """Rewrite ``w`` to PBW normal form, one redex at a time.

        ``strategy`` picks the redex: "leftmost", "rightmost", or a
        ``random.Random`` instance for a random choice (used to test confluence).
        """
        memo = strategy == "leftmost"
        if memo and w in self._word_cache:
            return self._word_cache[w]
        K = self.K
        todo: dict[str, Cyc] = {w: K.one}
        done: dict[Monomial, Cyc] = {}
        while todo:
            word, coeff = todo.popitem()
            redexes = self._redexes(word)
            if not redexes:
                m = Monomial(word.count("E"), word.count("F"), word.count("K"))
                done[m] = done[m] + coeff if m in done else coeff
                continue
            if strategy == "leftmost":
                pos, red = min(redexes)
            elif strategy == "rightmost":
                pos, red = max(redexes)
            else:
                pos, red = strategy.choice(sorted(redexes))
            for c, nw in self._rewrite(word, pos, red):
                v = coeff * c
                todo[nw] = todo[nw] + v if nw in todo else v
                if not todo[nw]:
                    del todo[nw]
        done = {m: c for m, c in done.items() if c}
        if memo:
            self._word_cache[w] = done
        return done

    def mono_mul(self, x: Monomial, y: Monomial) -> dict[Monomial, Cyc]:
        """Normal form of x*y, built by right-multiplying x with the letters of y."""
        key = (x, y)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        K = self.K
        if y == (0, 0, 0):
            res = {x: K.one}
        elif x == (0, 0, 0):
            res = {y: K.one}
        elif y.a + y.b + y.c == 1:
            res = self.normal_form(x.word() + y.word())
        else:
            # peel the last letter of y
            if y.c:
                head, letter = Monomial(y.a, y.b, y.c - 1), Monomial(0, 0, 1)
            elif y.b:
                head, letter = Monomial(y.a, y.b - 1, 0), Monomial(0, 1, 0)
            else:
                head, letter = Monomial(y.a - 1, 0, 0), Monomial(1, 0, 0)
            res = {}
            for m, c in self.mono_mul(x, head).items():
                for m2, d in self.mono_mul(m, letter).items():
                    v = c * d
                    res[m2] = res[m2] + v if m2 in res else v
            res = {m: c for m, c in res.items() if c}
        self._mul_cache[key] = res
        return res

    def multiply(self, x: AlgElem, y: AlgElem) -> AlgElem:
        out: dict[Monomial, Cyc] = {}
        for m1, c1 in x.terms.items():
            for m2, c2 in y.terms.items():
                c12 = c1 * c2
                for m, d in self.mono_mul(m1, m2).items():
                    v = c12 * d
                    out[m] = out[m] + v if m in out else v
        return AlgElem(self, out)

    # -- Hopf structure ------------------------------------------------------------------
    def _letters(self, m: Monomial) -> str:
        return m.word()

    def _gen_coproduct(self, g: str) -> TensorElem:
        K, l = self.K, self.l
        one = Monomial(0, 0, 0)
        if g == "E":
            return TensorElem(self, {(Monomial(1, 0, 0), one): K.one, (Monomial(0, 0, 1), Monomial(1, 0, 0)): K.one})
        if g == "F":
            return TensorElem(self, {(Monomial(0, 1, 0), Monomial(0, 0, l - 1)): K.one, (one, Monomial(0, 1, 0)): K.one})
        return TensorElem(self, {(Monomial(0, 0, 1), Monomial(0, 0, 1)): K.one})

    def _mono_coproduct(self, m: Monomial) -> TensorElem:
        hit = self._cop_cache.get(m)
        if hit is None:
            one = Monomial(0, 0, 0)
            hit = TensorElem(self, {(one, one): self.K.one})
            for g in self._letters(m):
                hit = hit * self._gen_coproduct(g)
            self._cop_cache[m] = hit
        return hit

    def coproduct(self, x: AlgElem) -> TensorElem:
        out = TensorElem(self)
        for m, c in x.terms.items():
            t = self._mono_coproduct(m)
            out = out + TensorElem(self, {k: v * c for k, v in t.terms.items()})
        return out

    def counit(self, x: AlgElem) -> Cyc:
        acc = self.K.zero
        for m, c in x.terms.items():
            if m.a == 0 and m.b == 0:
                acc = acc + c
        return acc

    def _gen_antipode(self, g: str) -> AlgElem:
        l = self.l
        if g == "E":
            return -self.monomial(0, 0, l - 1) * self.E
        if g == "F":
            return -self.F * self.Kgen
        return self.Kinv

    def _mono_antipode(self, m: Monomial) -> AlgElem:
        hit = self._antipode_cache.get(m)
        if hit is None:
            hit = self.one()
            for g in reversed(self._letters(m)):
                hit = hit * self._gen_antipode(g)
            self._antipode_cache[m] = hit
        return hit

    def antipode(self, x: AlgElem) -> AlgElem:
        out = self.zero()
        for m, c in x.terms.items():
            out = out + self._mono_antipode(m).scale(c)
        return out

    def omega(self, x: AlgElem) -> AlgElem:
        """The automorphism E -> F, F -> E, K -> K^-1."""
        images = {"E": self.F, "F": self.E, "K": self.Kinv}
        out = self.zero()
        for m, c in x.terms.items():
            t = self.scalar(c)
            for g in self._letters(m):
                t = t * images[g]
            out = out + t
        return out

    # -- Casimir ---------------------------------------------------------------------------
    def casimir(self) -> AlgElem:
        """X = EF + (q^-1 K + q K^-1)/(q - q^-1)^2."""
        K = self.K
        s = K.qdiff_sq(1).inv()
        return (self.word("EF") + self.Kgen.scale(K.qinv * s) + self.Kinv.scale(K.q * s))

    def casimir_alt(self) -> AlgElem:
        """FE + (q K + q^-1 K^-1)/(q - q^-1)^2."""
        K = self.K
        s = K.qdiff_sq(1).inv()
        return (self.word("FE") + self.Kgen.scale(K.q * s) + self.Kinv.scale(K.qinv * s))

    def evaluate_poly(self, p: list[Cyc], x: AlgElem) -> AlgElem:
        acc = self.zero()
        for c in reversed(p):
            acc = acc * x + self.scalar(c)
        return acc

    def minimal_polynomial(self, x: AlgElem | None = None) -> list[Cyc]:
        """Monic minimal polynomial of an element, i.e. of its left regular action."""
        if x is None:
            if self._minpoly is not None:
                return self._minpoly
            x = self.casimir()
            cache = True
        else:
            cache = False
        K = self.K
        powers = [self.one()]
        while True:
            nxt = powers[-1] * x
            support = sorted({m for p in powers + [nxt] for m in p.terms})
            cols = [[p.terms.get(m, K.zero) for m in support] for p in powers]
            A = Matrix.from_columns(K, cols, len(support))
            rhs = Matrix.from_columns(K, [[nxt.terms.get(m, K.zero) for m in support]], len(support))
            sol = A.solve(rhs)
            if sol is not None:
                coeffs = [-r[0] for r in sol.rows] + [K.one]
                if cache:
                    self._minpoly = coeffs
                return coeffs
            powers.append(nxt)

    def casimir_root_structure(self) -> dict[int, int]:
        """Multiplicity of each b_j (j in H') as a root of the minimal polynomial of X.

        Raises ValueError if the b_j do not account for the full degree.
        """
        K = self.K
        mp = self.minimal_polynomial()
        mult = {bi.j: poly.multiplicity(K, mp, bi.b) for bi in block_indices(K)}
        if sum(mult.values()) != len(mp) - 1:
            raise ValueError("minimal polynomial of X has roots outside {b_j}")
        return mult

    def block_idempotent(self, j: int | BlockIndex) -> AlgElem:
        """Central idempotent e_j(X) projecting onto the generalized b_j-eigenspace of X."""
        if isinstance(j, BlockIndex):
            j = j.j
        hit = self._idempotents.get(j)
        if hit is not None:
            return hit
        K = self.K
        mp = self.minimal_polynomial()
        mult = self.casimir_root_structure()
        b = K.casimir_root(j)
        local = poly.linear_power(K, b, mult[j])
        cofactor, rem = poly.divmod_(K, mp, local)
        assert not rem
        s = poly.inverse_mod(K, cofactor, local)
        e = poly.divmod_(K, poly.mul(K, cofactor, s), mp)[1]
        elem = self.evaluate_poly(e, self.casimir())
        self._idempotents[j] = elem
        return elem

    def block_projector(self, j: int | BlockIndex) -> "BlockProjector":
        return BlockProjector(self, j if isinstance(j, int) else j.j)

    def ad_casimir_on_K_powers(self, i: int) -> AlgElem:
        """Closed form of ad(X) K^i for 1 <= i <= l."""
        K = self.K
        s = K.qdiff_sq(1).inv()
        X = self.casimir()
        first = self.monomial(0, 0, i).scale((K.q_power(2 * i - 1) + K.q_power(1 - 2 * i)) * s)
        middle = (X * self.monomial(0, 0, i + 1)).scale(-K.qdiff_sq(i))
        last = self.monomial(0, 0, i + 2).scale(K.qint(i) * K.qint(i + 1))
        return first + middle + last

    # -- adjoint action -------------------------------------------------------------------
    def ad(self, x: AlgElem, v: AlgElem) -> AlgElem:
        """Hopf adjoint action sum x_(1) v S(x_(2))."""
        out = self.zero()
        for (m1, m2), c in self.coproduct(x).terms.items():
            out = out + (self.monomial(*m1) * v * self.antipode(self.monomial(*m2))).scale(c)
        return out

    def ad_E(self, v: AlgElem) -> AlgElem:
        """ad(E) v = E v - K v K^-1 E."""
        return self.E * v - self.Kgen * v * self.Kinv * self.E

    def ad_F(self, v: AlgElem) -> AlgElem:
        """ad(F) v = F v K - v F K."""
        return self.F * v * self.Kgen - v * self.F * self.Kgen

    def ad_K(self, v: AlgElem) -> AlgElem:
        return self.Kgen * v * self.Kinv

    def ad_basis(self) -> dict[int, list[Monomial]]:
        out: dict[int, list[Monomial]] = {}
        for m in self.basis():
            out.setdefault(m.degree, []).append(m)
        return dict(sorted(out.items()))

    def to_vector(self, x: AlgElem, w: int) -> list[Cyc]:
        """Coordinates of a weight-w element in the monomial basis of ad^w."""
        idx = self._ad_index()
        K = self.K
        n = len(self.ad_basis()[w])
        v = [K.zero] * n
        for m, c in x.terms.items():
            ww, i = idx[m]
            if ww != w:
                raise ValueError(f"element has a component of weight {ww}, expected {w}")
            v[i] = c
        return v

    def from_vector(self, v: list[Cyc], w: int) -> AlgElem:
        basis = self.ad_basis()[w]
        return AlgElem(self, {m: c for m, c in zip(basis, v) if c})

    def _ad_index(self) -> dict[Monomial, tuple[int, int]]:
        if not hasattr(self, "_idx"):
            self._idx = {m: (w, i) for w, ms in self.ad_basis().items() for i, m in enumerate(ms)}
        return self._idx

    def adjoint_rep(self) -> GradedModule:
        """ad as an object of C on the monomial basis, weight(E^a F^b K^c) = 2a - 2b."""
        if self._adjoint is not None:
            return self._adjoint
        K = self.K
        basis = self.ad_basis()
        dims = {w: len(ms) for w, ms in basis.items()}
        E, F = {}, {}
        for w, ms in basis.items():
            if w + 2 in dims:
                cols = [self.to_vector(self.ad_E(self.monomial(*m)), w + 2) for m in ms]
                E[w] = Matrix.from_columns(K, cols, dims[w + 2])
            if w - 2 in dims:
                cols = [self.to_vector(self.ad_F(self.monomial(*m)), w - 2) for m in ms]
                F[w] = Matrix.from_columns(K, cols, dims[w - 2])
        self._adjoint = GradedModule(K, dims, E, F, "ad")
        return self._adjoint

    def left_multiplication(self, x: AlgElem) -> dict[int, Matrix]:
        """Matrix of v -> x v on each weight space of ad (x of weight 0)."""
        if x.weights() - {0}:
            raise ValueError("left multiplication by an element of nonzero weight")
        K = self.K
        out = {}
        for w, ms in self.ad_basis().items():
            cols = [self.to_vector(x * self.monomial(*m), w) for m in ms]
            out[w] = Matrix.from_columns(K, cols, len(ms))
        return out

    # -- serialization --------------------------------------------------------------------
    def structure_constants(self, pairs: Iterable[tuple[Monomial, Monomial]] | None = None) -> list:
        if pairs is None:
            pairs = [(x, y) for x in self.basis() for y in self.basis()]
        out = []
        for x, y in pairs:
            prod = self.mono_mul(x, y)
            out.append([list(x), list(y), [[list(m), c.to_json()] for m, c in sorted(prod.items())]])
        return out

    def dump_structure_constants(self, path, pairs=None) -> None:
        with open(path, "w") as fh:
            json.dump({"l": self.l, "root_exponent": self.K.root_exponent,
                       "products": self.structure_constants(pairs)}, fh)


class BlockProjector:
    """pr_j: left multiplication by the central idempotent e_j(X) on ad."""

    def __init__(self, U: SmallQuantumGroup, j: int):
        self.U = U
        self.j = j
        self.idempotent = U.block_idempotent(j)

    def __call__(self, x: AlgElem) -> AlgElem:
        return self.idempotent * x

    def matrices(self) -> dict[int, Matrix]:
        """pr_j on each weight space of ad.

        Uses (e x) K^c = (e x) shifted in the K exponent, so only the c = 0
        monomials need an actual product.
        """
        U = self.U
        K = U.K
        idx = U._ad_index()
        out = {}
        for w, ms in U.ad_basis().items():
            n = len(ms)
            m = Matrix.zeros(K, n, n)
            heads: dict[tuple[int, int], AlgElem] = {}
            for col, mono in enumerate(ms):
                key = (mono.a, mono.b)
                if key not in heads:
                    heads[key] = self.idempotent * U.monomial(mono.a, mono.b, 0)
                for t, c in heads[key].terms.items():
                    _, row = idx[Monomial(t.a, t.b, (t.c + mono.c) % U.l)]
                    m.rows[row][col] = c
            out[w] = m
        return out

    def image(self) -> dict[int, Subspace]:
        return {w: m.column_space() for w, m in self.matrices().items()}


@lru_cache(maxsize=None)
def _sqg(l: int, root_exponent: int) -> SmallQuantumGroup:
    return SmallQuantumGroup(l, root_exponent)


def small_quantum_group(l: int, root_exponent: int = 1) -> SmallQuantumGroup:
    """Shared instance per (l, root_exponent), so caches are reused."""
    return _sqg(l, root_exponent % l)
