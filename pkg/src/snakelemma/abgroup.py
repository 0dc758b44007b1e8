"""Finitely presented abelian groups Z^n / L and homomorphisms between them.

A subgroup of G = Z^n / R is stored as its full preimage lattice in Z^n,
which always contains R.  That makes sum, intersection, membership and
equality of subgroups canonical (they are HNF computations).

>>> Z, Z2 = make_group(1), make_group(1, [[2]])
>>> proj = make_hom(Z, Z2, [[1]])
>>> is_surjective(proj), is_injective(proj)
(True, False)
>>> cokernel(make_hom(Z, Z, [[2]])).group.invariant_factors
(2,)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .errors import ContractError, IllDefined, NotInduced
from .linalg import (
    IntMatrix,
    Lattice,
    as_matrix,
    lattice_contains,
    lattice_coordinates,
    lattice_image,
    lattice_intersect,
    lattice_preimage,
    lattice_sum,
    snf,
    solve,
)


@dataclass(frozen=True)
class FpAbGroup:
    """Z^n_gens modulo the relation lattice.

    ``invariant_factors`` lists d1 | d2 | ... with ones dropped and a 0 for
    every free summand, e.g. ``(2, 0)`` for Z/2 + Z.
    """

    n_gens: int
    relations: Lattice
    invariant_factors: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.relations.ambient_dim != self.n_gens:
            raise ContractError("relation lattice lives in the wrong dimension")
        diag = snf(self.relations.basis, transforms=False).d
        torsion = [diag[i, i] for i in range(self.relations.rank) if diag[i, i] != 1]
        free = [0] * (self.n_gens - self.relations.rank)
        object.__setattr__(self, "invariant_factors", tuple(torsion + free))

    @property
    def order(self):
        """Number of elements, or ``None`` for an infinite group."""
        if 0 in self.invariant_factors:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self):
        return not self.invariant_factors

    def element(self, coords):
        return Element(self, tuple(coords))

    def __str__(self):
        parts = ["Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def make_group(n_gens: int, relation_columns: Sequence[Sequence[int]] = ()) -> FpAbGroup:
    return FpAbGroup(n_gens, Lattice.span(n_gens, relation_columns))


TRIVIAL = make_group(0)


def cyclic(order: int) -> FpAbGroup:
    """Z/order, with ``cyclic(0)`` the infinite cyclic group."""
    return make_group(1, [[order]] if order else [])


@dataclass(frozen=True, eq=False)
class Element:
    group: FpAbGroup
    coords: tuple

    def __eq__(self, other):
        if not isinstance(other, Element) or other.group != self.group:
            return NotImplemented
        diff = [a - b for a, b in zip(self.coords, other.coords)]
        return lattice_contains(self.group.relations, diff)

    __hash__ = None

    def is_zero(self):
        return lattice_contains(self.group.relations, self.coords)


class Hom:
    """Homomorphism given by the images of the source generators (as columns)."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FpAbGroup, target: FpAbGroup, matrix, check: bool = True):
        matrix = as_matrix(matrix)
        if matrix.rows == 0 and matrix.cols == 0 and (target.n_gens or source.n_gens):
            matrix = IntMatrix.zeros(target.n_gens, source.n_gens)
        if matrix.shape != (target.n_gens, source.n_gens):
            raise ContractError(
                f"matrix shape {matrix.shape} does not match {target.n_gens}x{source.n_gens}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            for r in source.relations.vectors():
                if not lattice_contains(target.relations, matrix.apply(r)):
                    raise IllDefined(f"relation {list(r)} maps outside the target relations")

    def __call__(self, coords):
        return self.matrix.apply(coords)

    def __eq__(self, other):
        if not isinstance(other, Hom):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        diff = self.matrix - other.matrix
        return all(lattice_contains(self.target.relations, c) for c in diff.columns())

    def __hash__(self):
        return hash((self.source, self.target))

    def __repr__(self):
        return f"Hom({self.source} -> {self.target}, {self.matrix.tolist()})"

    def is_zero(self):
        return all(lattice_contains(self.target.relations, c) for c in self.matrix.columns())


def make_hom(source: FpAbGroup, target: FpAbGroup, matrix) -> Hom:
    return Hom(source, target, matrix)


def identity(g: FpAbGroup) -> Hom:
    return Hom(g, g, IntMatrix.identity(g.n_gens), check=False)


def zero_hom(source: FpAbGroup, target: FpAbGroup) -> Hom:
    return Hom(source, target, IntMatrix.zeros(target.n_gens, source.n_gens), check=False)


def compose(h2: Hom, h1: Hom) -> Hom:
    """``h2 o h1``."""
    if h1.target != h2.source:
        raise ContractError(f"cannot compose: {h1.target} is not the source of the second map")
    return Hom(h1.source, h2.target, h2.matrix @ h1.matrix, check=False)


def add_homs(h1: Hom, h2: Hom) -> Hom:
    if h1.source != h2.source or h1.target != h2.target:
        raise ContractError("homs with different source/target cannot be added")
    return Hom(h1.source, h1.target, h1.matrix + h2.matrix, check=False)


# ---------------------------------------------------------------------------
# Subgroups

@dataclass(frozen=True)
class Subgroup:
    ambient: FpAbGroup
    lattice: Lattice

    def __post_init__(self):
        if self.lattice.ambient_dim != self.ambient.n_gens:
            raise ContractError("subgroup lattice lives in the wrong dimension")
        if not self.ambient.relations <= self.lattice:
            raise ContractError("subgroup lattice must contain the ambient relations")

    def __contains__(self, coords):
        return lattice_contains(self.lattice, coords)

    def __le__(self, other):
        _same_ambient(self, other)
        return self.lattice <= other.lattice

    @property
    def is_zero(self):
        return self.lattice == self.ambient.relations

    @property
    def is_whole(self):
        return self.lattice == Lattice.full(self.ambient.n_gens)


def zero_subgroup(g: FpAbGroup) -> Subgroup:
    return Subgroup(g, g.relations)


def whole(g: FpAbGroup) -> Subgroup:
    return Subgroup(g, Lattice.full(g.n_gens))


def subgroup_generated(g: FpAbGroup, vectors) -> Subgroup:
    return Subgroup(g, Lattice.span(g.n_gens, list(vectors) + g.relations.vectors()))


def _same_ambient(a: Subgroup, b: Subgroup):
    if a.ambient != b.ambient:
        raise ContractError("subgroups of different groups")


def sub_sum(a: Subgroup, b: Subgroup) -> Subgroup:
    _same_ambient(a, b)
    return Subgroup(a.ambient, lattice_sum(a.lattice, b.lattice))


def sub_intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    _same_ambient(a, b)
    return Subgroup(a.ambient, lattice_intersect(a.lattice, b.lattice))


def image(h: Hom) -> Subgroup:
    vecs = h.matrix.columns() + h.target.relations.vectors()
    return Subgroup(h.target, Lattice.span(h.target.n_gens, vecs))


def image_of(h: Hom, s: Subgroup) -> Subgroup:
    """``h(s)`` as a subgroup of the target."""
    if s.ambient != h.source:
        raise ContractError("subgroup does not live in the source of the map")
    img = lattice_image(h.matrix, s.lattice)
    return Subgroup(h.target, lattice_sum(img, h.target.relations))


def preimage(h: Hom, s: Subgroup) -> Subgroup:
    if s.ambient != h.target:
        raise ContractError("subgroup does not live in the target of the map")
    return Subgroup(h.source, lattice_preimage(h.matrix, s.lattice))


def kernel_subgroup(h: Hom) -> Subgroup:
    return Subgroup(h.source, lattice_preimage(h.matrix, h.target.relations))


# ---------------------------------------------------------------------------
# Presentations of subgroups and quotients

class Presented(NamedTuple):
    """A subgroup as a standalone group plus its inclusion into the ambient group."""

    subgroup: Subgroup
    group: FpAbGroup
    inclusion: Hom


class Quotient(NamedTuple):
    group: FpAbGroup
    projection: Hom


def present(s: Subgroup) -> Presented:
    """Present ``s`` with one generator per basis column of its lattice."""
    gens = s.lattice.basis
    rels = []
    for r in s.ambient.relations.vectors():
        y = lattice_coordinates(s.lattice, r)
        assert y is not None
        rels.append(y)
    group = make_group(gens.cols, rels)
    return Presented(s, group, Hom(group, s.ambient, gens, check=False))


def kernel(h: Hom) -> Presented:
    return present(kernel_subgroup(h))


def quotient(g: FpAbGroup, s: Subgroup) -> Quotient:
    if s.ambient != g:
        raise ContractError("subgroup does not live in this group")
    q = FpAbGroup(g.n_gens, s.lattice)
    return Quotient(q, Hom(g, q, IntMatrix.identity(g.n_gens), check=False))


def cokernel(h: Hom) -> Quotient:
    return quotient(h.target, image(h))


def is_injective(h: Hom) -> bool:
    return kernel_subgroup(h).is_zero


def is_surjective(h: Hom) -> bool:
    return image(h).is_whole


def is_isomorphism(h: Hom) -> bool:
    return is_injective(h) and is_surjective(h)


def inverse(h: Hom) -> Hom:
    """Inverse of an isomorphism."""
    if not is_injective(h):
        raise ContractError("map is not injective")
    block = h.matrix.hstack(h.target.relations.basis)
    n = h.source.n_gens
    cols = []
    for j in range(h.target.n_gens):
        e = [0] * h.target.n_gens
        e[j] = 1
        x = solve(block, e)
        if x is None:
            raise ContractError("map is not surjective")
        cols.append(x[:n])
    return Hom(h.target, h.source, IntMatrix.from_columns(cols, n))


def _lift(h: Hom, coords, rng=None):
    """Some x with h(x) == coords modulo the target relations, or ``None``."""
    block = h.matrix.hstack(h.target.relations.basis)
    x = solve(block, coords, rng)
    return None if x is None else x[:h.source.n_gens]


def lift(h: Hom, coords, rng=None):
    return _lift(h, coords, rng)


def induced_hom(h: Hom, src: Optional[Hom] = None, tgt: Optional[Hom] = None) -> Hom:
    """The map between a sub/quotient of ``h.source`` and a sub/quotient of ``h.target``.

    ``src`` is either an embedding ``S -> h.source`` or a projection
    ``h.source -> S``; ``tgt`` likewise relative to ``h.target``.  ``None``
    stands for the identity.  A map that is both an endomorphism of
    ``h.source`` and injective is read as an embedding.
    """
    X, Y = h.source, h.target
    src_embed = _reads_as_embedding(src, X)
    tgt_embed = _reads_as_embedding(tgt, Y)
    S = X if src is None else (src.source if src_embed else src.target)
    T = Y if tgt is None else (tgt.source if tgt_embed else tgt.target)

    cols = []
    for i in range(S.n_gens):
        if src is None:
            x = tuple(int(k == i) for k in range(S.n_gens))
        elif src_embed:
            x = src.matrix.column(i)
        else:
            e = [int(k == i) for k in range(S.n_gens)]
            x = _lift(src, e)
            if x is None:
                raise NotInduced("source projection is not surjective")
        y = h.matrix.apply(x)
        if tgt is None:
            z = y
        elif tgt_embed:
            z = _lift(tgt, y)
            if z is None:
                raise NotInduced("image leaves the target subgroup")
        else:
            z = tgt.matrix.apply(y)
        cols.append(z)
    try:
        phi = Hom(S, T, IntMatrix.from_columns(cols, T.n_gens))
    except IllDefined as exc:
        raise NotInduced(f"induced map is not well defined: {exc}") from None

    # d o phi o b == c o h o a, with a, b, c, d the identity where absent
    left = phi
    if src is not None and not src_embed:
        left = compose(left, src)
    if tgt is not None and tgt_embed:
        left = compose(tgt, left)
    right = h
    if src is not None and src_embed:
        right = compose(right, src)
    if tgt is not None and not tgt_embed:
        right = compose(tgt, right)
    if left != right:
        raise NotInduced("the induced square does not commute")
    return phi


def _reads_as_embedding(m: Optional[Hom], ambient: FpAbGroup) -> bool:
    if m is None:
        return False
    into = m.target == ambient
    out_of = m.source == ambient
    if into and out_of:
        return is_injective(m)
    if into:
        return True
    if out_of:
        return False
    raise ContractError("presentation map is not attached to the expected group")


def direct_sum(g1: FpAbGroup, g2: FpAbGroup) -> FpAbGroup:
    n1 = g1.n_gens
    rels = [tuple(v) + (0,) * g2.n_gens for v in g1.relations.vectors()]
    rels += [(0,) * n1 + tuple(v) for v in g2.relations.vectors()]
    return make_group(n1 + g2.n_gens, rels)
