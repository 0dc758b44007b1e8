"""Snake lemma for diagrams whose rows are exact only in the middle.

Given a commutative diagram with rows ``A -f-> B -g-> C`` and
``A' -f1-> B' -g1-> C'`` (exact at B and B') and verticals alpha, beta,
gamma, :func:`snake_sequence` builds the exact sequence

    0 -> ker f -> ker(f1 alpha) -> ker beta -> ker gamma & im g
      -delta-> A'/(im alpha + ker f1) -> coker beta -> coker(gamma g)
      -> coker g1 -> 0

with every group presented explicitly and every map a :class:`Hom`.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field
from typing import Optional

from .abgroup import (
    TRIVIAL,
    FpAbGroup,
    Hom,
    Presented,
    Quotient,
    Subgroup,
    cokernel,
    compose,
    identity,
    image,
    induced_hom,
    is_injective,
    is_isomorphism,
    is_surjective,
    kernel,
    kernel_subgroup,
    lift,
    present,
    quotient,
    sub_intersect,
    sub_sum,
    zero_hom,
)
from .errors import ContractError, InternalError, NotCommutative, RowNotExact
from .linalg import IntMatrix


# ---------------------------------------------------------------------------
# Exact sequences

@dataclass(frozen=True)
class ExactSequence:
    """``terms[i] --maps[i]--> terms[i+1]`` with a verdict per interior term.

    ``certificate[k]`` is the verdict at ``terms[k + 1]``.
    """

    terms: tuple
    maps: tuple
    certificate: tuple
    labels: tuple = ()

    @property
    def is_exact(self):
        return all(self.certificate)

    def failures(self):
        return [k + 1 for k, ok in enumerate(self.certificate) if not ok]

    def __len__(self):
        return len(self.terms)


def exact_at(incoming: Hom, outgoing: Hom) -> bool:
    return image(incoming).lattice == kernel_subgroup(outgoing).lattice


def make_sequence(terms, maps, labels=()) -> ExactSequence:
    terms, maps = tuple(terms), tuple(maps)
    if len(maps) != len(terms) - 1:
        raise ContractError("need exactly one map between consecutive terms")
    for i, m in enumerate(maps):
        if m.source != terms[i] or m.target != terms[i + 1]:
            raise ContractError(f"map {i} does not go from term {i} to term {i + 1}")
    cert = tuple(exact_at(maps[i - 1], maps[i]) for i in range(1, len(maps)))
    return ExactSequence(terms, maps, cert, tuple(labels))


# ---------------------------------------------------------------------------
# Diagrams

SNAKE_ROLES = ("f", "g", "f1", "g1", "alpha", "beta", "gamma")


@dataclass(frozen=True)
class SnakeDiagram:
    f: Hom
    g: Hom
    f1: Hom
    g1: Hom
    alpha: Hom
    beta: Hom
    gamma: Hom
    validated: bool = field(default=False, compare=False)

    @property
    def a(self):
        return self.f.source

    @property
    def b(self):
        return self.f.target

    @property
    def c(self):
        return self.g.target

    @property
    def a1(self):
        return self.f1.source

    @property
    def b1(self):
        return self.f1.target

    @property
    def c1(self):
        return self.g1.target

    def homs(self):
        return {r: getattr(self, r) for r in SNAKE_ROLES}


def check_shapes(pairs):
    for name, (hom, src, tgt) in pairs.items():
        if hom.source != src or hom.target != tgt:
            raise ContractError(f"map {name} does not fit the diagram")


def validate(d: SnakeDiagram) -> SnakeDiagram:
    """Check commutativity and exactness of both rows; return the marked diagram."""
    if d.validated:
        return d
    check_shapes({
        "g": (d.g, d.b, d.c), "g1": (d.g1, d.b1, d.c1),
        "alpha": (d.alpha, d.a, d.a1), "beta": (d.beta, d.b, d.b1),
        "gamma": (d.gamma, d.c, d.c1),
    })
    if compose(d.f1, d.alpha) != compose(d.beta, d.f):
        raise NotCommutative(1, "f1 alpha != beta f")
    if compose(d.g1, d.beta) != compose(d.gamma, d.g):
        raise NotCommutative(2, "g1 beta != gamma g")
    if not exact_at(d.f, d.g):
        raise RowNotExact("top", "B", "im f != ker g")
    if not exact_at(d.f1, d.g1):
        raise RowNotExact("bottom", "B'", "im f1 != ker g1")
    return dataclasses.replace(d, validated=True)


# ---------------------------------------------------------------------------
# Connecting homomorphism

@dataclass(frozen=True)
class ConnectingMap:
    """delta together with how its domain sits in C and its codomain arises from A'."""

    hom: Hom
    domain: Presented          # ker gamma & im g, with inclusion into C
    codomain: Quotient          # A' / (im alpha + ker f1), with projection from A'
    codomain_subgroup: Subgroup


def connecting_domain(d: SnakeDiagram) -> Subgroup:
    return sub_intersect(kernel_subgroup(d.gamma), image(d.g))


def connecting_codomain_subgroup(d: SnakeDiagram) -> Subgroup:
    return sub_sum(image(d.alpha), kernel_subgroup(d.f1))


def connecting_hom(d: SnakeDiagram, rng: Optional[random.Random] = None) -> ConnectingMap:
    """The connecting map, computed by the lift / push / pull-back chase.

    ``rng`` randomizes every lift; the result must not depend on it.
    """
    d = validate(d)
    dom = present(connecting_domain(d))
    cod_sub = connecting_codomain_subgroup(d)
    cod = quotient(d.a1, cod_sub)
    ker_g1 = kernel_subgroup(d.g1)
    cols = []
    for c in dom.inclusion.matrix.columns():
        b = lift(d.g, c, rng)
        if b is None:
            raise InternalError("element of im g has no preimage under g")
        b1 = d.beta(b)
        if b1 not in ker_g1:
            raise InternalError("beta(b) is not in ker g1")
        a1 = lift(d.f1, b1, rng)
        if a1 is None:
            raise InternalError("element of ker g1 is not in im f1")
        cols.append(a1)
    try:
        delta = Hom(dom.group, cod.group, IntMatrix.from_columns(cols, d.a1.n_gens))
    except Exception as exc:
        raise InternalError(f"connecting map is not well defined: {exc}") from exc
    return ConnectingMap(delta, dom, cod, cod_sub)


# ---------------------------------------------------------------------------
# The long sequence

SNAKE_LABELS = (
    "0", "ker f", "ker f1.alpha", "ker beta", "ker gamma & im g",
    "A1/(im alpha + ker f1)", "coker beta", "coker gamma.g", "coker g1", "0",
)


@dataclass(frozen=True)
class SnakeResult:
    sequence: ExactSequence
    connecting: ConnectingMap
    kernels: dict      # label -> Presented
    cokernels: dict    # label -> Quotient


def snake_sequence(d: SnakeDiagram, rng: Optional[random.Random] = None) -> SnakeResult:
    d = validate(d)
    ker_f = kernel(d.f)
    ker_fa = kernel(compose(d.f1, d.alpha))
    ker_beta = kernel(d.beta)
    conn = connecting_hom(d, rng)
    cok_beta = cokernel(d.beta)
    cok_gg = cokernel(compose(d.gamma, d.g))
    cok_g1 = cokernel(d.g1)

    maps = [
        zero_hom(TRIVIAL, ker_f.group),
        induced_hom(identity(d.a), ker_f.inclusion, ker_fa.inclusion),
        induced_hom(d.f, ker_fa.inclusion, ker_beta.inclusion),
        induced_hom(d.g, ker_beta.inclusion, conn.domain.inclusion),
        conn.hom,
        induced_hom(d.f1, conn.codomain.projection, cok_beta.projection),
        induced_hom(d.g1, cok_beta.projection, cok_gg.projection),
        induced_hom(identity(d.c1), cok_gg.projection, cok_g1.projection),
        zero_hom(cok_g1.group, TRIVIAL),
    ]
    terms = [TRIVIAL, ker_f.group, ker_fa.group, ker_beta.group, conn.domain.group,
             conn.codomain.group, cok_beta.group, cok_gg.group, cok_g1.group, TRIVIAL]
    seq = make_sequence(terms, maps, SNAKE_LABELS)
    return SnakeResult(
        seq, conn,
        {"ker f": ker_f, "ker f1.alpha": ker_fa, "ker beta": ker_beta,
         "ker gamma & im g": conn.domain},
        {"A1/(im alpha + ker f1)": conn.codomain, "coker beta": cok_beta,
         "coker gamma.g": cok_gg, "coker g1": cok_g1},
    )


# ---------------------------------------------------------------------------
# Classical specialization

CLASSICAL_LABELS = (
    "0", "ker f", "ker alpha", "ker beta", "ker gamma",
    "coker alpha", "coker beta", "coker gamma", "coker g1", "0",
)


@dataclass
class SpecializationReport:
    f1_injective: bool
    g_surjective: bool
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    classical: Optional[ExactSequence] = None
    matches_general: Optional[bool] = None

    @property
    def ok(self):
        return all(self.checks.values()) and self.matches_general is not False


def classical_specialization(d: SnakeDiagram, result: Optional[SnakeResult] = None
                             ) -> SpecializationReport:
    d = validate(d)
    if result is None:
        result = snake_sequence(d)
    rep = SpecializationReport(is_injective(d.f1), is_surjective(d.g))
    gen = result.sequence
    ker_alpha = kernel(d.alpha)
    cok_alpha = cokernel(d.alpha)
    ker_gamma = kernel(d.gamma)
    cok_gamma = cokernel(d.gamma)

    if rep.f1_injective:
        ker_fa = result.kernels["ker f1.alpha"]
        rep.checks["ker f1.alpha == ker alpha"] = ker_fa.subgroup == ker_alpha.subgroup
        q = result.cokernels["A1/(im alpha + ker f1)"]
        rep.checks["A1/(im alpha + ker f1) == coker alpha"] = (
            q.group.invariant_factors == cok_alpha.group.invariant_factors
            and result.connecting.codomain_subgroup == image(d.alpha))
    else:
        rep.notes.append("f1 is not injective: ker(f1.alpha) may be larger than ker alpha")

    if rep.g_surjective:
        cgg = result.cokernels["coker gamma.g"]
        rep.checks["coker gamma.g == coker gamma"] = cgg.group == cok_gamma.group
        rep.checks["ker gamma & im g == ker gamma"] = (
            result.connecting.domain.subgroup == ker_gamma.subgroup)
    else:
        rep.notes.append("g is not surjective: coker(gamma.g) may be larger than coker gamma")

    if rep.f1_injective and rep.g_surjective:
        ker_f = result.kernels["ker f"]
        ker_beta = result.kernels["ker beta"]
        cok_beta = result.cokernels["coker beta"]
        cok_g1 = result.cokernels["coker g1"]
        conn = result.connecting
        # delta transported along the identifications of its domain and codomain
        into = induced_hom(identity(d.c), ker_gamma.inclusion, conn.domain.inclusion)
        out = induced_hom(identity(d.a1), conn.codomain.projection, cok_alpha.projection)
        delta = compose(out, compose(conn.hom, into))
        maps = [
            zero_hom(TRIVIAL, ker_f.group),
            induced_hom(identity(d.a), ker_f.inclusion, ker_alpha.inclusion),
            induced_hom(d.f, ker_alpha.inclusion, ker_beta.inclusion),
            induced_hom(d.g, ker_beta.inclusion, ker_gamma.inclusion),
            delta,
            induced_hom(d.f1, cok_alpha.projection, cok_beta.projection),
            induced_hom(d.g1, cok_beta.projection, cok_gamma.projection),
            induced_hom(identity(d.c1), cok_gamma.projection, cok_g1.projection),
            zero_hom(cok_g1.group, TRIVIAL),
        ]
        terms = [TRIVIAL, ker_f.group, ker_alpha.group, ker_beta.group, ker_gamma.group,
                 cok_alpha.group, cok_beta.group, cok_gamma.group, cok_g1.group, TRIVIAL]
        rep.classical = make_sequence(terms, maps, CLASSICAL_LABELS)
        rep.checks["classical sequence exact"] = rep.classical.is_exact
        rep.checks["comparison maps are isomorphisms"] = is_isomorphism(into) and is_isomorphism(out)
        rep.matches_general = all(
            s.invariant_factors == t.invariant_factors
            for s, t in zip(rep.classical.terms, gen.terms))
    return rep


# ---------------------------------------------------------------------------
# Ring lemma and the exact ring

RING_LABELS = ("0", "ker alpha", "ker beta.alpha", "ker beta",
               "coker alpha", "coker beta.alpha", "coker beta", "0")


@dataclass(frozen=True)
class RingPair:
    """A composable pair ``alpha: A -> B``, ``beta: B -> C``."""

    alpha: Hom
    beta: Hom

    def homs(self):
        return {"alpha": self.alpha, "beta": self.beta}


def ring_diagram(alpha: Hom, beta: Hom) -> SnakeDiagram:
    """Top row ``A -alpha-> B -> coker alpha``, bottom row ``C -id-> C -> 0``."""
    if alpha.target != beta.source:
        raise ContractError("alpha and beta are not composable")
    A, B, C = alpha.source, alpha.target, beta.target
    cok = cokernel(alpha)
    ba = compose(beta, alpha)
    return SnakeDiagram(
        f=alpha, g=cok.projection,
        f1=identity(C), g1=zero_hom(C, TRIVIAL),
        alpha=ba, beta=beta, gamma=zero_hom(cok.group, TRIVIAL),
    )


@dataclass(frozen=True)
class RingLemmaResult:
    sequence: ExactSequence
    snake: SnakeResult
    diagram: SnakeDiagram


def ring_lemma_full(alpha: Hom, beta: Hom) -> RingLemmaResult:
    d = validate(ring_diagram(alpha, beta))
    res = snake_sequence(d)
    long = res.sequence
    # ker(0) & im(proj) is all of coker alpha; A'/(im beta.alpha + ker id) is coker beta.alpha
    cok_alpha = cokernel(alpha)
    cok_ba = cokernel(compose(beta, alpha))
    if long.terms[4] != cok_alpha.group or long.terms[5] != cok_ba.group:
        raise InternalError("generalized middle terms did not collapse")
    if long.terms[7] != TRIVIAL:
        raise InternalError("coker(gamma g) should be trivial in the ring diagram")
    terms = list(long.terms[:8])
    maps = list(long.maps[:7])
    seq = make_sequence(terms, maps, RING_LABELS)
    return RingLemmaResult(seq, res, d)


def ring_lemma(alpha: Hom, beta: Hom) -> ExactSequence:
    """0 -> ker a -> ker ba -> ker b -> coker a -> coker ba -> coker b -> 0."""
    return ring_lemma_full(alpha, beta).sequence


@dataclass
class ExactRing:
    nodes: tuple                 # the eight ring nodes
    maps: tuple                  # node[i] -> node[(i + 1) % 8]
    inner: dict                  # name -> Hom into/out of A, B, C
    factorizations: dict         # name -> bool
    exactness: tuple             # verdicts at the six nontrivial nodes
    matches_ring_lemma: bool

    @property
    def ok(self):
        return all(self.factorizations.values()) and all(self.exactness) and self.matches_ring_lemma


def exact_ring(alpha: Hom, beta: Hom) -> ExactRing:
    if alpha.target != beta.source:
        raise ContractError("alpha and beta are not composable")
    ba = compose(beta, alpha)
    ker_a, ker_ba, ker_b = kernel(alpha), kernel(ba), kernel(beta)
    cok_a, cok_ba, cok_b = cokernel(alpha), cokernel(ba), cokernel(beta)
    A, B, C = alpha.source, alpha.target, beta.target

    ring_maps = (
        zero_hom(TRIVIAL, ker_a.group),
        induced_hom(identity(A), ker_a.inclusion, ker_ba.inclusion),
        induced_hom(alpha, ker_ba.inclusion, ker_b.inclusion),
        compose(cok_a.projection, ker_b.inclusion),
        induced_hom(beta, cok_a.projection, cok_ba.projection),
        induced_hom(identity(C), cok_ba.projection, cok_b.projection),
        zero_hom(cok_b.group, TRIVIAL),
        zero_hom(TRIVIAL, TRIVIAL),
    )
    nodes = (TRIVIAL, ker_a.group, ker_ba.group, ker_b.group,
             cok_a.group, cok_ba.group, cok_b.group, TRIVIAL)
    inner = {
        "ker alpha -> A": ker_a.inclusion,
        "ker beta.alpha -> A": ker_ba.inclusion,
        "ker beta -> B": ker_b.inclusion,
        "A -> B": alpha,
        "B -> C": beta,
        "B -> coker alpha": cok_a.projection,
        "C -> coker beta.alpha": cok_ba.projection,
        "C -> coker beta": cok_b.projection,
    }
    fact = {
        "ker alpha -> ker beta.alpha through A":
            compose(ker_ba.inclusion, ring_maps[1]) == ker_a.inclusion,
        "ker beta.alpha -> ker beta through A, B":
            compose(ker_b.inclusion, ring_maps[2]) == compose(alpha, ker_ba.inclusion),
        "ker beta -> coker alpha through B":
            ring_maps[3] == compose(cok_a.projection, ker_b.inclusion),
        "coker alpha -> coker beta.alpha through B, C":
            compose(ring_maps[4], cok_a.projection) == compose(cok_ba.projection, beta),
        "coker beta.alpha -> coker beta through C":
            compose(ring_maps[5], cok_ba.projection) == cok_b.projection,
        "A -> B -> C is beta.alpha": compose(beta, alpha) == ba,
    }
    exactness = tuple(exact_at(ring_maps[i - 1], ring_maps[i]) for i in range(1, 7))
    lemma = ring_lemma(alpha, beta)
    matches = (lemma.terms == nodes
               and all(m1 == m2 for m1, m2 in zip(lemma.maps, ring_maps[:7])))
    return ExactRing(nodes, ring_maps, inner, fact, exactness, matches)
