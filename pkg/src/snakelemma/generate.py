"""Seeded random diagrams that are valid by construction.

Rows are made exact by taking ``C = coker f + E`` with ``g`` the
projection followed by the inclusion, so ``im f == ker g`` holds exactly and
``g`` fails to be surjective whenever the padding ``E`` is nontrivial.
Vertical maps are found by solving the integer lifting systems that make the
squares commute.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .abgroup import (
    TRIVIAL,
    FpAbGroup,
    Hom,
    add_homs,
    cokernel,
    compose,
    direct_sum,
    make_group,
)
from .errors import GenerationExhausted
from .four import FOUR_ROLES, FourDiagram
from .linalg import (
    IntMatrix,
    inverse_unimodular,
    lattice_preimage,
    reduce_mod,
    snf,
    solve,
)
from .snake import SNAKE_ROLES, RingPair, SnakeDiagram


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_gens: int = 4
    entry_bound: int = 5
    relation_bound: int = 6
    resample_limit: int = 100
    # finite mode: every group finite with order at most finite_order_bound
    finite: bool = False
    finite_order_bound: int = 16

    def __post_init__(self):
        if self.max_gens < 0 or self.entry_bound <= 0 or self.relation_bound <= 0 \
                or self.resample_limit <= 0 or self.finite_order_bound <= 0:
            raise ValueError("generator bounds must be positive")


class _Gen:
    def __init__(self, cfg: GenConfig, rng: Optional[random.Random] = None):
        self.cfg = cfg
        self.rng = rng or random.Random(cfg.seed)

    # -- groups -------------------------------------------------------------

    def unimodular(self, n):
        rng = self.rng
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(2 * n):
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j:
                continue
            if rng.random() < 0.3:
                rows[i], rows[j] = rows[j], rows[i]
            else:
                q = rng.choice((-2, -1, 1, 2))
                rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
        return IntMatrix(rows, rows=n, cols=n)

    def group(self, max_gens=None, allow_trivial_bias=0.0) -> FpAbGroup:
        cfg, rng = self.cfg, self.rng
        max_gens = cfg.max_gens if max_gens is None else max_gens
        if rng.random() < allow_trivial_bias:
            return TRIVIAL
        n = rng.randint(0, max_gens)
        if cfg.finite:
            diag, order = [], 1
            for _ in range(n):
                dmax = max(1, min(cfg.relation_bound, cfg.finite_order_bound // order))
                d = rng.randint(1, dmax)
                diag.append(d)
                order *= d
            cols = []
            for j in range(n):
                col = [0] * n
                col[j] = diag[j]
                for i in range(j + 1, n):
                    col[i] = rng.randint(0, diag[i] - 1) if diag[i] > 1 else 0
                cols.append(col)
            p = self.unimodular(n)
            return make_group(n, [p.apply(c) for c in cols])
        k = rng.randint(0, n)
        b = cfg.relation_bound
        cols = [[rng.randint(-b, b) for _ in range(n)] for _ in range(k)]
        return make_group(n, cols)

    # -- homomorphisms --------------------------------------------------------

    def hom(self, source: FpAbGroup, target: FpAbGroup) -> Hom:
        """A uniformly-shaped random well-defined map, built in Smith coordinates of the source."""
        rng, bound = self.rng, self.cfg.entry_bound
        s = snf(source.relations.basis)
        diag = s.diagonal
        n, m = source.n_gens, target.n_gens
        cols = []
        for i in range(n):
            d = diag[i] if i < len(diag) else 0
            if d:
                allowed = lattice_preimage(IntMatrix.identity(m).scale(d), target.relations)
                vec = [0] * m
                for b in allowed.vectors():
                    c = rng.randint(-bound, bound)
                    vec = [x + c * y for x, y in zip(vec, b)]
            else:
                vec = [rng.randint(-bound, bound) for _ in range(m)]
            cols.append(vec)
        new = IntMatrix.from_columns(cols, m)
        return self._reduced(source, target, new @ s.u)

    def _reduced(self, source, target, matrix, check=True):
        cols = [reduce_mod(target.relations, c) for c in matrix.columns()]
        return Hom(source, target, IntMatrix.from_columns(cols, target.n_gens), check=check)

    def coker_plus(self, f: Hom, pad: FpAbGroup):
        """``C = coker f + pad`` and ``g: B -> C`` (projection then inclusion)."""
        cok = cokernel(f).group
        c = direct_sum(cok, pad)
        n = f.target.n_gens
        g = Hom(f.target, c, IntMatrix.identity(n).vstack(IntMatrix.zeros(pad.n_gens, n)),
                check=False)
        return c, g

    def lift_vertical(self, f: Hom, f1: Hom, beta: Hom) -> Optional[Hom]:
        """Some alpha: A -> A' with ``f1 alpha == beta f``, or ``None``."""
        A, A1, B1 = f.source, f1.source, f1.target
        target = beta.matrix @ f.matrix
        s = snf(A.relations.basis)
        uinv = inverse_unimodular(s.u)
        diag = s.diagonal
        na1, nb1 = A1.n_gens, B1.n_gens
        rb1, ra1 = B1.relations.basis, A1.relations.basis
        cols = []
        for i in range(A.n_gens):
            d = diag[i] if i < len(diag) else 0
            t = target.apply(uinv.column(i))
            top = f1.matrix.hstack(rb1, IntMatrix.zeros(nb1, ra1.cols))
            bottom = IntMatrix.identity(na1).scale(d).hstack(
                IntMatrix.zeros(na1, rb1.cols), -ra1)
            x = solve(top.vstack(bottom), tuple(t) + (0,) * na1, self.rng)
            if x is None:
                return None
            cols.append(x[:na1])
        alpha = IntMatrix.from_columns(cols, na1) @ s.u
        return self._reduced(A, A1, alpha)

    def beta(self, f: Hom, f1: Hom) -> Hom:
        """Random beta: B -> B'; usually of a shape for which alpha exists."""
        B, B1, A1 = f.target, f1.target, f1.source
        if self.rng.random() < 0.3:
            return self.hom(B, B1)
        cok = cokernel(f)
        phi = self.hom(B, A1)
        psi = self.hom(cok.group, B1)
        m = add_homs(compose(f1, phi), compose(psi, cok.projection))
        return self._reduced(B, B1, m.matrix, check=False)


def gen_snake(cfg: GenConfig) -> SnakeDiagram:
    gen = _Gen(cfg)
    for _ in range(cfg.resample_limit):
        A, B = gen.group(), gen.group()
        f = gen.hom(A, B)
        E = gen.group(allow_trivial_bias=0.35)
        C, g = gen.coker_plus(f, E)
        A1, B1 = gen.group(), gen.group()
        f1 = gen.hom(A1, B1)
        C1, g1 = gen.coker_plus(f1, gen.group(allow_trivial_bias=0.35))
        beta = gen.beta(f, f1)
        alpha = gen.lift_vertical(f, f1, beta)
        if alpha is None:
            continue
        gamma_pad = gen.hom(E, C1)
        gamma = gen._reduced(C, C1, (g1.matrix @ beta.matrix).hstack(gamma_pad.matrix))
        d = SnakeDiagram(f, g, f1, g1, alpha, beta, gamma)
        return rebase_snake(d, gen) if gen.rng.random() < 0.5 else d
    raise GenerationExhausted(f"no solvable draw within {cfg.resample_limit} attempts")


def gen_four(cfg: GenConfig) -> FourDiagram:
    gen = _Gen(cfg)
    rng = gen.rng
    small = min(cfg.max_gens, max(1, cfg.max_gens // 2))
    A, B = gen.group(), gen.group()
    f = gen.hom(A, B)
    E = gen.group(small, allow_trivial_bias=0.3)
    C, g = gen.coker_plus(f, E)
    E2 = gen.group(small, allow_trivial_bias=0.3)
    D, h = gen.coker_plus(g, E2)

    # alpha: the projection onto a random quotient of A, hence surjective
    extra = [[rng.randint(-2, 2) for _ in range(A.n_gens)] for _ in range(rng.randint(0, 2))]
    A1 = make_group(A.n_gens, A.relations.vectors() + extra)
    alpha = Hom(A, A1, IntMatrix.identity(A.n_gens), check=False)

    # B' as the pushout of alpha and f, plus a padding summand F that beta hits through coker f
    F = gen.group(small, allow_trivial_bias=0.4)
    na1, nb, nf = A1.n_gens, B.n_gens, F.n_gens
    rels = [tuple(v) + (0,) * (nb + nf) for v in A1.relations.vectors()]
    rels += [(0,) * na1 + tuple(v) + (0,) * nf for v in B.relations.vectors()]
    rels += [(0,) * (na1 + nb) + tuple(v) for v in F.relations.vectors()]
    for j in range(A.n_gens):
        rels.append(alpha.matrix.column(j) + tuple(-x for x in f.matrix.column(j)) + (0,) * nf)
    B1 = make_group(na1 + nb + nf, rels)
    f1 = Hom(A1, B1, IntMatrix.identity(na1).vstack(IntMatrix.zeros(nb + nf, na1)))
    cok_f = cokernel(f)
    beta_f = compose(gen.hom(cok_f.group, F), cok_f.projection)
    beta = Hom(B, B1, IntMatrix.zeros(na1, nb).vstack(IntMatrix.identity(nb), beta_f.matrix))

    # C' = coker f1 + E + E'', gamma is g1 beta on B-generators and includes E
    E_extra = gen.group(small, allow_trivial_bias=0.5)
    C1, g1 = gen.coker_plus(f1, direct_sum(E, E_extra))
    rho = gen.hom(E, B1)
    nc1 = C1.n_gens
    incl_e = IntMatrix.zeros(B1.n_gens, E.n_gens).vstack(
        IntMatrix.identity(E.n_gens), IntMatrix.zeros(E_extra.n_gens, E.n_gens))
    gamma_e = incl_e + g1.matrix @ rho.matrix
    gamma = gen._reduced(C, C1, (g1.matrix @ beta.matrix).hstack(gamma_e))

    # D' = coker g1 + E2 + E2'', delta is h1 gamma on C-generators and includes E2
    E2_extra = gen.group(small, allow_trivial_bias=0.5)
    D1, h1 = gen.coker_plus(g1, direct_sum(E2, E2_extra))
    sigma = gen.hom(E2, C1)
    incl_e2 = IntMatrix.zeros(nc1, E2.n_gens).vstack(
        IntMatrix.identity(E2.n_gens), IntMatrix.zeros(E2_extra.n_gens, E2.n_gens))
    delta_e2 = incl_e2 + h1.matrix @ sigma.matrix
    delta = gen._reduced(D, D1, (h1.matrix @ gamma.matrix).hstack(delta_e2))

    d = FourDiagram(f, g, h, f1, g1, h1, alpha, beta, gamma, delta)
    return rebase_four(d, gen) if rng.random() < 0.5 else d


def gen_pair(cfg: GenConfig) -> RingPair:
    """A random composable pair ``alpha: A -> B``, ``beta: B -> C``."""
    gen = _Gen(cfg)
    A, B, C = gen.group(), gen.group(), gen.group()
    return RingPair(gen.hom(A, B), gen.hom(B, C))


# ---------------------------------------------------------------------------
# Changing generators

def rebase_group(g: FpAbGroup, p: IntMatrix):
    """The same group with generators changed by the unimodular ``p``.

    Returns ``(new_group, p, p_inverse)``; coordinates transform as ``x -> p x``.
    """
    new = make_group(g.n_gens, [p.apply(v) for v in g.relations.vectors()])
    return new, p, inverse_unimodular(p)


def rebase_snake(d: SnakeDiagram, gen: _Gen, with_changes=False):
    """``d`` with every group re-presented; optionally also ``{position: p}``."""
    maps, changes = _rebase_diagram(d, gen, SNAKE_ROLES)
    out = SnakeDiagram(**maps)
    return (out, changes) if with_changes else out


def rebase_four(d: FourDiagram, gen: _Gen, with_changes=False):
    maps, changes = _rebase_diagram(d, gen, FOUR_ROLES)
    out = FourDiagram(**maps)
    return (out, changes) if with_changes else out


def _rebase_diagram(d, gen, roles):
    position = _positions(roles)
    new_groups = {}
    for pos, (r, end) in position.items():
        m = getattr(d, r)
        grp = m.source if end == "source" else m.target
        new_groups[pos] = rebase_group(grp, gen.unimodular(grp.n_gens))
    out = {}
    for r in roles:
        m = getattr(d, r)
        s_pos, t_pos = ENDS[r]
        s_new, _, s_inv = new_groups[s_pos]
        t_new, t_p, _ = new_groups[t_pos]
        out[r] = gen._reduced(s_new, t_new, t_p @ m.matrix @ s_inv)
    return out, {pos: p for pos, (_, p, _) in new_groups.items()}


# where each arrow starts and ends, by position name
ENDS = {"f": ("A", "B"), "g": ("B", "C"), "f1": ("A1", "B1"), "g1": ("B1", "C1"),
        "alpha": ("A", "A1"), "beta": ("B", "B1"), "gamma": ("C", "C1"),
        "h": ("C", "D"), "h1": ("C1", "D1"), "delta": ("D", "D1")}


def _positions(roles):
    pos = {}
    for r in roles:
        s, t = ENDS[r]
        pos.setdefault(s, (r, "source"))
        pos.setdefault(t, (r, "target"))
    return pos
