"""The 4-lemma: short exact sequences for the middle verticals of a 2x4 diagram.

For rows ``A -f-> B -g-> C -h-> D`` and ``A' -f1-> B' -g1-> C' -h1-> D'``
(exact at B, C, B', C') with alpha surjective and delta injective:

    es1:  0 -> ker beta & ker g -> ker beta --g--> ker gamma -> 0
    es2:  0 -> coker beta --g1--> coker gamma -> C'/(im gamma + im g1) -> 0
    esr:  0 -> ker g --iota--> ker(g1 beta) --g_hat--> ker gamma -> 0

es1 is obtained the way the argument goes: esr from the snake lemma on the
right two squares, then the ring lemma applied to iota and beta_hat.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from .abgroup import (
    TRIVIAL,
    Hom,
    cokernel,
    compose,
    identity,
    image,
    image_of,
    induced_hom,
    inverse,
    is_injective,
    is_isomorphism,
    is_surjective,
    kernel,
    preimage,
    present,
    quotient,
    sub_intersect,
    sub_sum,
    zero_hom,
)
from .errors import HypothesisFailed, InternalError, NotCommutative, RowNotExact
from .snake import (
    ExactSequence,
    SnakeDiagram,
    check_shapes,
    exact_at,
    make_sequence,
    ring_lemma,
    snake_sequence,
)

FOUR_ROLES = ("f", "g", "h", "f1", "g1", "h1", "alpha", "beta", "gamma", "delta")


@dataclass(frozen=True)
class FourDiagram:
    f: Hom
    g: Hom
    h: Hom
    f1: Hom
    g1: Hom
    h1: Hom
    alpha: Hom
    beta: Hom
    gamma: Hom
    delta: Hom
    validated: bool = field(default=False, compare=False)
    alpha_surjective: Optional[bool] = field(default=None, compare=False)
    delta_injective: Optional[bool] = field(default=None, compare=False)

    def homs(self):
        return {r: getattr(self, r) for r in FOUR_ROLES}


def _check_shapes(d: FourDiagram):
    check_shapes({
        "g": (d.g, d.f.target, d.g.target), "h": (d.h, d.g.target, d.h.target),
        "g1": (d.g1, d.f1.target, d.g1.target), "h1": (d.h1, d.g1.target, d.h1.target),
        "alpha": (d.alpha, d.f.source, d.f1.source),
        "beta": (d.beta, d.f.target, d.f1.target),
        "gamma": (d.gamma, d.g.target, d.g1.target),
        "delta": (d.delta, d.h.target, d.h1.target),
    })


def check_four(d: FourDiagram) -> FourDiagram:
    """Check squares and rows, record the two hypothesis flags without enforcing them."""
    _check_shapes(d)
    if compose(d.f1, d.alpha) != compose(d.beta, d.f):
        raise NotCommutative(1, "f1 alpha != beta f")
    if compose(d.g1, d.beta) != compose(d.gamma, d.g):
        raise NotCommutative(2, "g1 beta != gamma g")
    if compose(d.h1, d.gamma) != compose(d.delta, d.h):
        raise NotCommutative(3, "h1 gamma != delta h")
    for row, pos, m1, m2 in (("top", "B", d.f, d.g), ("top", "C", d.g, d.h),
                             ("bottom", "B'", d.f1, d.g1), ("bottom", "C'", d.g1, d.h1)):
        if not exact_at(m1, m2):
            raise RowNotExact(row, pos)
    return dataclasses.replace(d, alpha_surjective=is_surjective(d.alpha),
                               delta_injective=is_injective(d.delta))


def validate_four(d: FourDiagram) -> FourDiagram:
    """All of :func:`check_four` plus both hypotheses, which are tested first."""
    if d.validated:
        return d
    _check_shapes(d)
    if not is_surjective(d.alpha):
        raise HypothesisFailed("alpha-not-surjective")
    if not is_injective(d.delta):
        raise HypothesisFailed("delta-not-injective")
    d = check_four(d)
    return dataclasses.replace(d, validated=True)


@dataclass
class FourLemmaResult:
    es1: ExactSequence
    es2: ExactSequence
    esr: ExactSequence
    iota: Hom
    g_hat: Hom
    beta_hat: Hom
    ring: ExactSequence          # ring lemma for (iota, beta_hat)
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return (self.es1.is_exact and self.es2.is_exact and self.esr.is_exact
                and all(self.checks.values()))


def _require(cond, what):
    if not cond:
        raise InternalError(what)


def four_lemma(d: FourDiagram) -> FourLemmaResult:
    d = validate_four(d)
    B, C1 = d.f.target, d.g1.target
    checks = {}

    # esr: snake lemma on the squares through beta, gamma, delta
    right = SnakeDiagram(d.g, d.h, d.g1, d.h1, d.beta, d.gamma, d.delta)
    long = snake_sequence(right).sequence
    ker_g = kernel(d.g)
    ker_g1b = kernel(compose(d.g1, d.beta))
    ker_gamma = kernel(d.gamma)
    _require(long.terms[1] == ker_g.group and long.terms[2] == ker_g1b.group
             and long.terms[3] == ker_gamma.group, "snake kernel row has unexpected terms")
    _require(long.terms[4].is_trivial, "ker delta & im h should vanish when delta is injective")
    iota, g_hat = long.maps[1], long.maps[2]
    esr = make_sequence(
        [TRIVIAL, ker_g.group, ker_g1b.group, ker_gamma.group, TRIVIAL],
        [zero_hom(TRIVIAL, ker_g.group), iota, g_hat, zero_hom(ker_gamma.group, TRIVIAL)],
        ("0", "ker g", "ker g1.beta", "ker gamma", "0"))

    # beta restricted to ker(g1 beta) lands in ker g1
    ker_g1 = kernel(d.g1)
    beta_hat = induced_hom(d.beta, ker_g1b.inclusion, ker_g1.inclusion)
    checks["beta_hat is beta restricted"] = (
        compose(ker_g1.inclusion, beta_hat) == compose(d.beta, ker_g1b.inclusion))
    checks["g_hat o iota == 0"] = compose(g_hat, iota).is_zero()
    checks["beta(ker g) == ker g1"] = image_of(d.beta, ker_g.subgroup) == ker_g1.subgroup
    bi = compose(beta_hat, iota)
    checks["coker(beta_hat o iota) == 0"] = cokernel(bi).group.is_trivial

    ring = ring_lemma(iota, beta_hat)
    _require(ring.terms[1].is_trivial, "ker iota should vanish")
    _require(ring.terms[5].is_trivial, "coker(beta_hat iota) should vanish")
    short = make_sequence(
        [TRIVIAL, ring.terms[2], ring.terms[3], ring.terms[4], TRIVIAL],
        [zero_hom(TRIVIAL, ring.terms[2]), ring.maps[2], ring.maps[3],
         zero_hom(ring.terms[4], TRIVIAL)])
    checks["ring-lemma short sequence exact"] = short.is_exact

    # identify the terms of that short sequence with named subgroups of B and C
    ker_beta = kernel(d.beta)
    meet = present(sub_intersect(ker_beta.subgroup, ker_g.subgroup))
    ker_bi = kernel(bi)
    ker_bh = kernel(beta_hat)
    cok_iota = cokernel(iota)
    _require(ker_bi.group == ring.terms[2] and ker_bh.group == ring.terms[3]
             and cok_iota.group == ring.terms[4], "ring lemma terms have unexpected presentations")
    into_b_from_bi = compose(ker_g.inclusion, ker_bi.inclusion)
    into_b_from_bh = compose(ker_g1b.inclusion, ker_bh.inclusion)
    cmp_meet = induced_hom(identity(B), into_b_from_bi, meet.inclusion)
    cmp_ker_beta = induced_hom(identity(B), into_b_from_bh, ker_beta.inclusion)
    cmp_coker = induced_hom(g_hat, cok_iota.projection, None)
    for name, iso in (("ker(beta_hat iota) == ker beta & ker g", cmp_meet),
                      ("ker beta_hat == ker beta", cmp_ker_beta),
                      ("coker iota == ker gamma", cmp_coker)):
        checks[name] = is_isomorphism(iso)
    if not (checks["ker(beta_hat iota) == ker beta & ker g"]
            and checks["ker beta_hat == ker beta"] and checks["coker iota == ker gamma"]):
        raise InternalError("identifications of the 4-lemma proof failed")

    m1 = compose(cmp_ker_beta, compose(ring.maps[2], inverse(cmp_meet)))
    m2 = compose(cmp_coker, compose(ring.maps[3], inverse(cmp_ker_beta)))
    es1 = make_sequence(
        [TRIVIAL, meet.group, ker_beta.group, ker_gamma.group, TRIVIAL],
        [zero_hom(TRIVIAL, meet.group), m1, m2, zero_hom(ker_gamma.group, TRIVIAL)],
        ("0", "ker beta & ker g", "ker beta", "ker gamma", "0"))
    checks["es1 first map is the inclusion"] = (
        m1 == induced_hom(identity(B), meet.inclusion, ker_beta.inclusion))
    g_star = induced_hom(d.g, ker_beta.inclusion, ker_gamma.inclusion)
    checks["es1 middle map is g restricted"] = m2 == g_star

    # es2, computed directly
    cok_beta = cokernel(d.beta)
    cok_gamma = cokernel(d.gamma)
    q = quotient(C1, sub_sum(image(d.gamma), image(d.g1)))
    g1_star = induced_hom(d.g1, cok_beta.projection, cok_gamma.projection)
    to_q = induced_hom(identity(C1), cok_gamma.projection, q.projection)
    es2 = make_sequence(
        [TRIVIAL, cok_beta.group, cok_gamma.group, q.group, TRIVIAL],
        [zero_hom(TRIVIAL, cok_beta.group), g1_star, to_q, zero_hom(q.group, TRIVIAL)],
        ("0", "coker beta", "coker gamma", "C1/(im gamma + im g1)", "0"))

    checks["ker gamma == g(ker beta)"] = image_of(d.g, ker_beta.subgroup) == ker_gamma.subgroup
    checks["im beta == g1^-1(im gamma)"] = preimage(d.g1, image(d.gamma)) == image(d.beta)

    return FourLemmaResult(es1, es2, esr, iota, g_hat, beta_hat, ring, checks)
