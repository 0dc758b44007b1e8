"""Brute-force ground truth over finite abelian groups.

Every finite presented group is identified with a product of cyclic groups
(residue tuples) and every map becomes an explicit table.  Kernels, images,
exactness and the connecting map are then recomputed by exhaustive
enumeration, with no lattice arithmetic beyond that identification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence

from .abgroup import FpAbGroup, Hom
from .errors import CapExceeded
from .linalg import inverse_unimodular, snf

DEFAULT_CAP = 512


@dataclass(frozen=True)
class EnumGroup:
    """Z/n1 x Z/n2 x ... with elements as residue tuples."""

    cyclic_orders: tuple

    @property
    def order(self):
        out = 1
        for n in self.cyclic_orders:
            out *= n
        return out

    @property
    def zero(self):
        return (0,) * len(self.cyclic_orders)

    def add(self, x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, self.cyclic_orders))

    def elements(self):
        return itertools.product(*(range(n) for n in self.cyclic_orders))


class FiniteModel:
    """An explicit isomorphism between a finite presented group and an :class:`EnumGroup`."""

    def __init__(self, group: FpAbGroup, cap: int = DEFAULT_CAP):
        order = group.order
        if order is None:
            raise CapExceeded(f"group {group} is infinite")
        if order > cap:
            raise CapExceeded(f"group {group} has order {order} > cap {cap}")
        self.group = group
        s = snf(group.relations.basis)
        diag = s.diagonal
        keep = [i for i, d in enumerate(diag) if d != 1]
        self._rows = [s.u.data[i] for i in keep]
        self._mods = [diag[i] for i in keep]
        uinv = inverse_unimodular(s.u)
        self._cols = [uinv.column(i) for i in keep]
        self.enum = EnumGroup(tuple(self._mods))

    def encode(self, coords: Sequence[int]) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, coords)) % m
                     for row, m in zip(self._rows, self._mods))

    def decode(self, t) -> tuple:
        n = self.group.n_gens
        out = [0] * n
        for k, col in zip(t, self._cols):
            if k:
                for i in range(n):
                    out[i] += k * col[i]
        return tuple(out)

    def elements(self):
        return self.enum.elements()


def hom_table(h: Hom, src: FiniteModel, tgt: FiniteModel) -> Dict[tuple, tuple]:
    return {t: tgt.encode(h.matrix.apply(src.decode(t))) for t in src.elements()}


def table_kernel(table, zero):
    return {x for x, y in table.items() if y == zero}


def table_image(table):
    return set(table.values())


def enum_exactness(groups: List[EnumGroup], tables: List[dict]) -> List[bool]:
    """Verdict at each interior term: image of the incoming map == kernel of the outgoing one."""
    return [table_image(tables[i - 1]) == table_kernel(tables[i], groups[i + 1].zero)
            for i in range(1, len(groups) - 1)]


def enum_check_exact(groups: List[EnumGroup], tables: List[dict]) -> bool:
    return all(enum_exactness(groups, tables))


def enum_sequence(seq, cap: int = DEFAULT_CAP):
    """Enumerated version of an :class:`~snakelemma.snake.ExactSequence`."""
    models = [FiniteModel(t, cap) for t in seq.terms]
    tables = [hom_table(m, models[i], models[i + 1]) for i, m in enumerate(seq.maps)]
    return [m.enum for m in models], tables


def sequence_agrees(seq, cap: int = DEFAULT_CAP) -> bool:
    groups, tables = enum_sequence(seq, cap)
    return tuple(enum_exactness(groups, tables)) == tuple(seq.certificate)


# ---------------------------------------------------------------------------
# Snake diagrams by enumeration

class _EnumDiagram:
    def __init__(self, d, cap):
        self.d = d
        self.m = {k: FiniteModel(getattr(d, k), cap) for k in ("a", "b", "c", "a1", "b1", "c1")}
        ends = {"f": ("a", "b"), "g": ("b", "c"), "f1": ("a1", "b1"), "g1": ("b1", "c1"),
                "alpha": ("a", "a1"), "beta": ("b", "b1"), "gamma": ("c", "c1")}
        self.t = {r: hom_table(getattr(d, r), self.m[s], self.m[t]) for r, (s, t) in ends.items()}

    def zero(self, k):
        return self.m[k].enum.zero

    def add(self, k, x, y):
        return self.m[k].enum.add(x, y)

    def subgroup_sum(self, k, s1, s2):
        return {self.add(k, x, y) for x in s1 for y in s2}

    def cosets(self, k, sub):
        """Label every element of group ``k`` by its coset of ``sub``."""
        label = {}
        n = 0
        for x in self.m[k].elements():
            if x in label:
                continue
            for s in sub:
                label[self.add(k, x, s)] = n
            n += 1
        return label, n


@dataclass
class EnumConnecting:
    table: dict              # element of ker gamma & im g (in C) -> coset label in A'
    independent: bool        # every lift gave the same class
    domain_matches: bool     # the lattice domain equals the enumerated one
    matches: bool            # the lattice delta agrees elementwise


def enum_connecting(d, connecting=None, cap: int = DEFAULT_CAP) -> EnumConnecting:
    """Chase every lift of every element and compare with the lattice construction."""
    e = _EnumDiagram(d, cap)
    t = e.t
    ker_gamma = table_kernel(t["gamma"], e.zero("c1"))
    dom = ker_gamma & table_image(t["g"])
    sub = e.subgroup_sum("a1", table_image(t["alpha"]), table_kernel(t["f1"], e.zero("b1")))
    label, _ = e.cosets("a1", sub)

    g_pre, f1_pre = {}, {}
    for b, c in t["g"].items():
        g_pre.setdefault(c, []).append(b)
    for a1, b1 in t["f1"].items():
        f1_pre.setdefault(b1, []).append(a1)

    table, independent = {}, True
    for c in dom:
        classes = set()
        for b in g_pre[c]:
            for a1 in f1_pre.get(t["beta"][b], ()):
                classes.add(label[a1])
        if len(classes) != 1:
            independent = False
        table[c] = min(classes) if classes else None

    domain_matches = matches = True
    if connecting is not None:
        dom_model = FiniteModel(connecting.domain.group, cap)
        seen = set()
        for x in dom_model.elements():
            coords = dom_model.decode(x)
            c = e.m["c"].encode(connecting.domain.inclusion.matrix.apply(coords))
            seen.add(c)
            image = e.m["a1"].encode(connecting.hom.matrix.apply(coords))
            if table.get(c) != label[image]:
                matches = False
        domain_matches = seen == dom
    return EnumConnecting(table, independent, domain_matches, matches)


def enum_snake_orders(d, cap: int = DEFAULT_CAP) -> List[int]:
    """Orders of the ten terms of the snake sequence, counted inside A..C'."""
    e = _EnumDiagram(d, cap)
    t = e.t
    z = e.zero
    ker_f = table_kernel(t["f"], z("b"))
    ker_fa = {a for a in e.m["a"].elements() if t["f1"][t["alpha"][a]] == z("b1")}
    ker_beta = table_kernel(t["beta"], z("b1"))
    dom = table_kernel(t["gamma"], z("c1")) & table_image(t["g"])
    sub = e.subgroup_sum("a1", table_image(t["alpha"]), table_kernel(t["f1"], z("b1")))
    im_gg = {t["gamma"][c] for c in table_image(t["g"])}
    n = {k: e.m[k].enum.order for k in e.m}
    return [1, len(ker_f), len(ker_fa), len(ker_beta), len(dom),
            n["a1"] // len(sub),
            n["b1"] // len(table_image(t["beta"])),
            n["c1"] // len(im_gg),
            n["c1"] // len(table_image(t["g1"])),
            1]


def all_finite(groups, cap: int = DEFAULT_CAP) -> bool:
    return all(g.order is not None and g.order <= cap for g in groups)


def four_kernel_count(d, cap: int = DEFAULT_CAP) -> bool:
    """|ker beta| == |ker beta & ker g| * |ker gamma|, counted in B and C."""
    mb, mc = FiniteModel(d.beta.source, cap), FiniteModel(d.gamma.source, cap)
    mb1, mc1 = FiniteModel(d.beta.target, cap), FiniteModel(d.gamma.target, cap)
    beta = hom_table(d.beta, mb, mb1)
    g = hom_table(d.g, mb, mc)
    gamma = hom_table(d.gamma, mc, mc1)
    ker_beta = table_kernel(beta, mb1.enum.zero)
    meet = ker_beta & table_kernel(g, mc.enum.zero)
    ker_gamma = table_kernel(gamma, mc1.enum.zero)
    return len(ker_beta) == len(meet) * len(ker_gamma)
