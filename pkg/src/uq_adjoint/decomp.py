"""Krull-Schmidt decomposition of graded modules by candidate peel-off.

The engine first cuts a module along commuting idempotents (the Casimir blocks
of the module itself, plus any extra family the caller supplies), then peels
summands off each piece: a candidate C splits off M exactly when some
f in Hom(C, M) and g in Hom(M, C) have g o f invertible.  Every split is
recorded as an (injection, projection) certificate in the coordinates of the
original module.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .cyclotomic import Cyc
from .linalg import Matrix, Subspace
from .modcat import (
    BlockIndex,
    GradedModule,
    ModuleLabel,
    block_of_weight,
    canonical_label,
    combine_maps,
    compose,
    composition_multiplicities,
    hom_space,
    is_isomorphic,
    label_dim,
    map_inverse,
    map_is_invertible,
    projective,
    simple,
    simple_character,
)

log = logging.getLogger(__name__)

__all__ = [
    "EndAlgebra",
    "Decomposition",
    "BlockFiltration",
    "UnidentifiedSummand",
    "endomorphism_algebra",
    "radical",
    "is_indecomposable",
    "fitting_split",
    "decompose",
    "split_by_idempotents",
    "casimir_split",
    "ad_candidates",
    "default_candidates",
    "is_semisimple_matrix",
    "adjoint_blocks",
    "decompose_adjoint",
    "casimir_block_filtration",
    "decompose_N_j",
    "is_isomorphic_by_blocks",
]


class UnidentifiedSummand(RuntimeError):
    def __init__(self, dim: int, character: dict[int, int]):
        super().__init__(f"no candidate splits off the remaining module of dim {dim}, character {character}")
        self.dim = dim
        self.character = character


# ---------------------------------------------------------------------------
# endomorphism algebras
# ---------------------------------------------------------------------------
def _flatten(f: dict[int, Matrix]) -> list[Cyc]:
    return [x for w in sorted(f) for r in f[w].rows for x in r]


def _map_trace(f) -> Cyc:
    it = iter(f.values())
    acc = next(it).trace()
    for m in it:
        acc = acc + m.trace()
    return acc


@dataclass
class EndAlgebra:
    module: GradedModule
    basis: list[dict[int, Matrix]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, f) -> list[Cyc] | None:
        """Coordinates of f in the basis, or None if f is outside the span."""
        K = self.module.K
        if not self.basis:
            return None
        A = Matrix.from_columns(K, [_flatten(b) for b in self.basis], len(_flatten(self.basis[0])))
        rhs = Matrix.from_columns(K, [_flatten(f)], A.nrows)
        sol = A.solve(rhs)
        return None if sol is None else [r[0] for r in sol.rows]

    def is_closed(self) -> bool:
        return all(self.coords(compose(x, y)) is not None for x in self.basis for y in self.basis)

    def contains_identity(self) -> bool:
        return self.coords(self.module.identity()) is not None


def endomorphism_algebra(M: GradedModule) -> EndAlgebra:
    return EndAlgebra(M, hom_space(M, M))


def radical(A: EndAlgebra) -> list[dict[int, Matrix]]:
    """Jacobson radical as the null space of the trace form (x, y) -> tr(xy)."""
    K = A.module.K
    n = A.dim
    if n == 0:
        return []
    gram = Matrix.zeros(K, n, n)
    for i, x in enumerate(A.basis):
        for j in range(i, n):
            t = _map_trace(compose(x, A.basis[j]))
            gram.rows[i][j] = gram.rows[j][i] = t
    rad = []
    for v in gram.nullspace():
        rad.append(combine_maps(K, A.basis, v))
    for x in rad:
        if not _is_nilpotent(x):
            raise AssertionError("trace-form radical element is not nilpotent")
    return rad


def _is_nilpotent(f) -> bool:
    for m in f.values():
        if m.nrows and not m.power(m.nrows).is_zero():
            return False
    return True


def is_indecomposable(M: GradedModule) -> bool:
    if M.dim == 0:
        return False
    A = endomorphism_algebra(M)
    return A.dim - len(radical(A)) == 1


def fitting_split(M: GradedModule, phi: dict[int, Matrix]):
    """M = ker(phi^n) + im(phi^n); returns the two submodules or None (NoSplit)."""
    K = M.K
    n = max(M.dims.values(), default=0)
    phi = {w: phi.get(w) or Matrix.zeros(K, d, d) for w, d in M.dims.items()}
    power = {w: m.power(n) for w, m in phi.items()}
    kers = {w: m.kernel() for w, m in power.items()}
    ims = {w: m.image() for w, m in power.items()}
    if sum(s.dim for s in kers.values()) == 0 or sum(s.dim for s in ims.values()) == 0:
        return None
    return M.submodule(kers, "ker")[0], M.submodule(ims, "im")[0]


def is_semisimple_matrix(A: Matrix) -> bool:
    """True iff the minimal polynomial of A is squarefree (A diagonalizable over the closure)."""
    from . import polynomial as poly

    K = A.K
    n = A.nrows
    # minimal polynomial by stacking powers
    powers = [Matrix.identity(K, n)]
    flat = lambda m: [x for r in m.rows for x in r]
    while True:
        nxt = powers[-1] @ A
        B = Matrix.from_columns(K, [flat(p) for p in powers], n * n)
        sol = B.solve(Matrix.from_columns(K, [flat(nxt)], n * n))
        if sol is not None:
            mp = [-r[0] for r in sol.rows] + [K.one]
            break
        powers.append(nxt)
    deriv = [c * i for i, c in enumerate(mp)][1:]
    g, _, _ = poly.xgcd(K, mp, deriv)
    return len(g) == 1


# ---------------------------------------------------------------------------
# pieces and splitting
# ---------------------------------------------------------------------------
@dataclass
class Piece:
    """A direct summand R of M with inclusion R -> M and projection M -> R."""

    module: GradedModule
    incl: dict[int, Matrix]
    proj: dict[int, Matrix]
    casimir: Cyc | None = None
    tag: tuple = ()


def _whole(M: GradedModule) -> Piece:
    return Piece(M, M.identity(), M.identity())


def _lift(piece: Piece, sub: GradedModule, incl, proj, **kw) -> Piece:
    K = piece.module.K
    new_incl = {w: piece.incl[w] @ incl[w] for w in sub.dims}
    new_proj = {}
    for w, p in piece.proj.items():
        if w in sub.dims:
            new_proj[w] = proj[w] @ p
    return Piece(sub, new_incl, new_proj, **kw)


def split_by_idempotents(piece: Piece, idempotents: Sequence[dict[int, Matrix]], tags=None) -> list[Piece]:
    """Cut a piece along orthogonal idempotent endomorphisms summing to the identity.

    The idempotents are given on the piece's own module.
    """
    M = piece.module
    out = []
    for n, e in enumerate(idempotents):
        subs = {w: e[w].column_space() for w in M.dims if w in e}
        sub, incl, coords = M.submodule(subs)
        if not sub.dim:
            continue
        proj = {w: (coords[w] @ e[w]) if w in coords else Matrix.zeros(M.K, 0, M.d(w)) for w in M.dims}
        out.append(_lift(piece, sub, incl, proj, casimir=piece.casimir,
                         tag=piece.tag + ((tags[n] if tags else n),)))
    return out


def casimir_eigenvalues(K) -> list[tuple[int, Cyc]]:
    """Distinct Casimir eigenvalues b_j on C, labelled by j in H'."""
    from .modcat import block_indices

    return [(bi.j, bi.b) for bi in block_indices(K)]


def casimir_split(piece: Piece) -> list[Piece]:
    """Cut along the generalized eigenspaces of the module's own Casimir action."""
    M = piece.module
    K = M.K
    X = M.casimir()
    eig = casimir_eigenvalues(K)
    spaces: dict[int, dict[int, Subspace]] = {j: {} for j, _ in eig}
    change: dict[int, Matrix] = {}
    for w, n in M.dims.items():
        cols = []
        for j, b in eig:
            S = (X[w] - Matrix.scalar(K, n, b)).power(n).kernel()
            spaces[j][w] = S
            cols.extend(S.basis)
        if len(cols) != n:
            raise ArithmeticError(f"Casimir eigenvalues outside {{b_j}} on weight {w}")
        change[w] = Matrix.from_columns(K, cols, n).inverse()
    out = []
    offsets = {w: 0 for w in M.dims}
    for j, b in eig:
        subs = {w: S for w, S in spaces[j].items() if S.dim}
        if not subs:
            continue
        sub, incl, _ = M.submodule(subs)
        proj = {}
        for w in M.dims:
            d = spaces[j][w].dim
            o = offsets[w]
            proj[w] = change[w].submatrix(range(o, o + d), range(M.d(w)))
            offsets[w] += d
        out.append(_lift(piece, sub, incl, proj, casimir=b, tag=piece.tag + (j,)))
    return out


# ---------------------------------------------------------------------------
# candidates
# ---------------------------------------------------------------------------
def ad_candidates(K) -> list[tuple[ModuleLabel, GradedModule]]:
    """Possible summands of ad: P(lam), lam even in [0, l-1]; L(lam), lam even in [1-l, 2l-2]."""
    l = K.l
    out = [(ModuleLabel("P", lam), projective(K, lam)) for lam in range(0, l, 2)]
    out += [(ModuleLabel("L", lam), simple(K, lam)) for lam in range(1 - l, 2 * l - 1) if lam % 2 == 0]
    return _order_candidates(out, l)


def default_candidates(M: GradedModule) -> list[tuple[ModuleLabel, GradedModule]]:
    """Every simple and projective whose character fits inside the character of M."""
    K, l = M.K, M.l
    ch = M.dims
    lo, hi = min(ch), max(ch)
    out = []
    for lam in range(lo, hi + 1):
        if _fits(simple_character(l, lam), ch):
            out.append((canonical_label(ModuleLabel("L", lam), l), simple(K, lam)))
    for lam in range(lo - 2 * l, hi + 2 * l + 1):
        if lam % l == l - 1:
            continue
        P = projective(K, lam)
        if _fits(P.dims, ch):
            out.append((ModuleLabel("P", lam), P))
    return _order_candidates(out, l)


def _order_candidates(cands, l):
    return sorted(cands, key=lambda c: (c[0].kind != "P", -c[1].dim, c[0].highest_weight))


def _fits(small: dict[int, int], big: dict[int, int]) -> bool:
    return all(big.get(w, 0) >= d for w, d in small.items())


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------
@dataclass
class Certificate:
    label: ModuleLabel
    model: GradedModule
    inj: dict[int, Matrix]  # model -> M
    proj: dict[int, Matrix]  # M -> model


@dataclass
class Decomposition:
    module: GradedModule
    summands: Counter = dc_field(default_factory=Counter)
    certificates: list[Certificate] = dc_field(default_factory=list)

    def total_dim(self) -> int:
        return sum(m * label_dim(lab, self.module.l) for lab, m in self.summands.items())

    def to_json(self) -> list[dict]:
        return [{"kind": lab.kind, "weight": lab.highest_weight, "multiplicity": m}
                for lab, m in sorted(self.summands.items())]

    def implied_composition(self) -> Counter:
        out: Counter = Counter()
        for lab, m in self.summands.items():
            model = simple(self.module.K, lab.highest_weight) if lab.kind == "L" else \
                projective(self.module.K, lab.highest_weight)
            for f, n in composition_multiplicities(model).items():
                out[f] += m * n
        return out

    def verify(self, check_morphisms: bool = True) -> bool:
        """proj o inj = id on every model, and the idempotents inj o proj sum to id on M."""
        M = self.module
        K = M.K
        total = {w: Matrix.zeros(K, n, n) for w, n in M.dims.items()}
        for cert in self.certificates:
            back = compose(cert.proj, cert.inj)
            if any(not back[w].is_identity() for w in cert.model.dims):
                return False
            if check_morphisms:
                from .modcat import is_morphism

                if not is_morphism(cert.inj, cert.model, M):
                    return False
            for w in cert.model.dims:
                total[w] = total[w] + cert.inj[w] @ cert.proj[w]
        return all(total[w].is_identity() for w in M.dims)


def _find_split(C: GradedModule, R: GradedModule):
    """(f, g) with g o f invertible on C, or None."""
    K = C.K
    fs = hom_space(C, R)
    if not fs:
        return None
    gs = hom_space(R, C)
    if not gs:
        return None
    # End(C) is local, so if some combination g o f is invertible then so is
    # one of the basis products g_j o f_i
    for f in fs:
        for g in gs:
            gf = compose(g, f)
            if map_is_invertible(gf):
                return f, g, gf
    return None


def _peel(piece: Piece, candidates, dec: Decomposition) -> None:
    K = piece.module.K
    l = K.l
    while piece.module.dim:
        R = piece.module
        ch = R.dims
        found = False
        for label, C in candidates:
            if piece.casimir is not None and K.casimir_root(label.highest_weight) != piece.casimir:
                continue
            if not _fits(C.dims, ch):
                continue
            hit = _find_split(C, R)
            if hit is None:
                continue
            f, g, gf = hit
            h = map_inverse(gf)
            p = compose(h, g)  # R -> C, p o f = id
            # complement: kernel of p
            subs = {}
            for w, n in R.dims.items():
                pw = p.get(w)
                subs[w] = pw.kernel() if pw is not None and pw.nrows else Subspace.full(K, n)
            comp, incl_c, coords_c = R.submodule(subs)
            # projection R -> comp along im f: coords o (id - f p)
            proj_c = {}
            for w, n in R.dims.items():
                if w not in comp.dims:
                    continue
                idem = Matrix.identity(K, n)
                if w in C.dims:
                    idem = idem - f[w] @ p[w]
                proj_c[w] = coords_c[w] @ idem
            inj_M = {w: piece.incl[w] @ f[w] for w in C.dims}
            proj_M = {w: p[w] @ piece.proj[w] for w in C.dims}
            label = canonical_label(label, l)
            dec.certificates.append(Certificate(label, C, inj_M, proj_M))
            dec.summands[label] += 1
            log.debug("split off %s, %d dims left", label, comp.dim)
            piece = _lift(piece, comp, incl_c, proj_c, casimir=piece.casimir, tag=piece.tag)
            found = True
            break
        if not found:
            raise UnidentifiedSummand(R.dim, dict(R.dims))


def decompose(M: GradedModule, candidates=None, idempotents=None, idempotent_tags=None,
              pieces_out: list | None = None) -> Decomposition:
    """Krull-Schmidt decomposition of M against a list of (label, model) candidates.

    ``idempotents`` optionally supplies a family of orthogonal idempotent
    endomorphisms of M summing to the identity; M is cut along them before the
    module's own Casimir blocks are separated.
    """
    if candidates is None:
        candidates = default_candidates(M)
    else:
        candidates = _order_candidates(list(candidates), M.l)
    dec = Decomposition(M)
    pieces = [_whole(M)]
    if idempotents is not None:
        pieces = split_by_idempotents(pieces[0], idempotents, idempotent_tags)
    split = []
    for pc in pieces:
        split.extend(casimir_split(pc))
    for pc in split:
        if pieces_out is not None:
            pieces_out.append(pc)
        before = Counter(dec.summands)
        _peel(pc, candidates, dec)
        pc.summands = dec.summands - before
    if dec.total_dim() != M.dim:
        raise AssertionError("decomposition does not account for the full dimension")
    return dec


# ---------------------------------------------------------------------------
# Casimir filtration of the blocks of ad
# ---------------------------------------------------------------------------
@dataclass
class BlockFiltration:
    """ad_j with M_j = Ker(X - b_j) and N_j = ad_j n Im(X - b_j), in ad_j coordinates."""

    index: BlockIndex
    block: GradedModule
    incl: dict[int, Matrix]
    proj: dict[int, Matrix]
    M: dict[int, Subspace]
    N: dict[int, Subspace]

    def dim_M(self) -> int:
        return sum(s.dim for s in self.M.values())

    def dim_N(self) -> int:
        return sum(s.dim for s in self.N.values())

    def N_module(self) -> GradedModule:
        return self.block.submodule(self.N, f"N_{self.index.j}")[0]

    def M_module(self) -> GradedModule:
        return self.block.submodule(self.M, f"M_{self.index.j}")[0]

    def top_quotient(self) -> GradedModule:
        """ad_j / M_j."""
        return self.block.quotient(self.M, f"ad_{self.index.j}/M_{self.index.j}")[0]

    def middle_quotient(self) -> GradedModule:
        """M_j / N_j."""
        Mmod = self.M_module()
        K = self.block.K
        # N_j inside M_j coordinates
        subs = {}
        for w, S in self.M.items():
            if not S.dim:
                continue
            vecs = [S.coords(v) for v in self.N[w].basis]
            subs[w] = Subspace.span(K, vecs, S.dim)
        return Mmod.quotient(subs, f"M_{self.index.j}/N_{self.index.j}")[0]

    def is_nested(self) -> bool:
        return all(self.M[w].contains_space(self.N[w]) for w in self.block.dims)


def _restrict_map(sub_incl, sub_coords, f, dims):
    """The map f of the ambient module, restricted to a stable family of subspaces."""
    return {w: sub_coords[w] @ f[w] @ sub_incl[w] for w in dims}


def adjoint_blocks(U) -> list[tuple[BlockIndex, GradedModule, dict, dict]]:
    """(index, ad_j, inclusion, projection) for every j in H', projection = coords o pr_j."""
    from .modcat import block_indices

    ad = U.adjoint_rep()
    out = []
    for bi in block_indices(U.K):
        P = U.block_projector(bi.j).matrices()
        subs = {w: m.column_space() for w, m in P.items()}
        sub, incl, coords = ad.submodule(subs, f"ad_{bi.j}")
        proj = {w: coords[w] @ P[w] for w in sub.dims}
        out.append((bi, sub, incl, proj))
    return out


def decompose_adjoint(U, candidates=None, pieces_out: list | None = None) -> Decomposition:
    """Decompose ad = u_q(sl2) under the adjoint action.

    The pieces are the Casimir blocks ad_j (images of the central idempotents)
    further cut into the generalized eigenspaces ad_j(k) of ad(X).
    """
    ad = U.adjoint_rep()
    if candidates is None:
        candidates = ad_candidates(U.K)
    from .modcat import block_indices

    idems, tags = [], []
    for bi in block_indices(U.K):
        idems.append(U.block_projector(bi.j).matrices())
        tags.append(bi.j)
    return decompose(ad, candidates, idempotents=idems, idempotent_tags=tags, pieces_out=pieces_out)


def casimir_block_filtration(U, j: int) -> BlockFiltration:
    """0 <= N_j <= M_j <= ad_j with M_j = Ker(X - b_j), N_j = Im((X - b_j) pr_j)."""
    from .modcat import block_indices

    K = U.K
    bi = next(b for b in block_indices(K) if b.j == j)
    ad = U.adjoint_rep()
    P = U.block_projector(j).matrices()
    subs = {w: m.column_space() for w, m in P.items()}
    block, incl, coords = ad.submodule(subs, f"ad_{j}")
    LX = U.left_multiplication(U.casimir())
    shifted = {w: LX[w] - Matrix.scalar(K, LX[w].nrows, bi.b) for w in LX}
    local = _restrict_map(incl, coords, shifted, block.dims)
    if j == -1:
        # X acts semisimply here; by convention N_-1 = M_-1 = ad_-1
        Msub = {w: Subspace.full(K, n) for w, n in block.dims.items()}
        Nsub = dict(Msub)
    else:
        Msub = {w: local[w].kernel() for w in block.dims}
        Nsub = {w: local[w].image() for w in block.dims}
    proj = {w: coords[w] @ P[w] for w in block.dims}
    return BlockFiltration(bi, block, incl, proj, Msub, Nsub)


def decompose_N_j(U, j: int, candidates=None) -> Decomposition:
    filt = casimir_block_filtration(U, j)
    N = filt.N_module()
    if candidates is None:
        candidates = ad_candidates(U.K)
    return decompose(N, candidates)


def is_isomorphic_by_blocks(M: GradedModule, N: GradedModule):
    """is_isomorphic after cutting both modules into Casimir blocks.

    Hom vanishes between different generalized Casimir eigenspaces, so M and N
    are isomorphic iff their blocks are; the returned witness M -> N is the
    sum of the blockwise isomorphisms.
    """
    if M.dims != N.dims:
        return False, None
    K = M.K
    pm = {pc.casimir: pc for pc in casimir_split(_whole(M))}
    pn = {pc.casimir: pc for pc in casimir_split(_whole(N))}
    if set(pm) != set(pn):
        return False, None
    phi = {w: Matrix.zeros(K, N.d(w), n) for w, n in M.dims.items()}
    for b, a in pm.items():
        c = pn[b]
        ok, f = is_isomorphic(a.module, c.module)
        if not ok:
            return False, None
        for w in a.module.dims:
            phi[w] = phi[w] + c.incl[w] @ f[w] @ a.proj[w]
    return True, phi
