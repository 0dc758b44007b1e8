"""Invariant checks run on every fuzzed diagram.

Each ``check_*`` function returns an ordered dict of named boolean verdicts.
Oracle checks are added only when every group involved is finite and under
the enumeration cap.
"""

from __future__ import annotations

import random
from typing import Dict, Optional

from . import oracle
from .abgroup import image, image_of, kernel, preimage
from .errors import CapExceeded
from .fileformat import dumps, parse_text
from .four import FourDiagram, four_lemma, validate_four
from .snake import (
    RingPair,
    SnakeDiagram,
    classical_specialization,
    connecting_hom,
    exact_ring,
    ring_lemma_full,
    snake_sequence,
    validate,
)


def alternating_orders_agree(seq) -> Optional[bool]:
    """Orders in an exact sequence of finite groups multiply to the same value at even
    and odd positions.  ``None`` when some term is infinite."""
    even = odd = 1
    for i, t in enumerate(seq.terms):
        n = t.order
        if n is None:
            return None
        if i % 2:
            odd *= n
        else:
            even *= n
    return even == odd


def _groups(d):
    out = []
    for h in d.homs().values():
        out += [h.source, h.target]
    return out


def round_trips(d) -> bool:
    back = parse_text(dumps(d))
    return all(back.homs()[r] == h and back.homs()[r].matrix == h.matrix
               and back.homs()[r].source == h.source and back.homs()[r].target == h.target
               for r, h in d.homs().items())


def check_snake(d: SnakeDiagram, cap: int = oracle.DEFAULT_CAP, witnesses: int = 2,
                rng: Optional[random.Random] = None) -> Dict[str, bool]:
    rng = rng or random.Random(0)
    checks = {}
    d = validate(d)
    res = snake_sequence(d)
    seq = res.sequence
    checks["snake sequence exact"] = seq.is_exact
    checks["ker f -> ker f1.alpha injective"] = seq.terms[0].is_trivial and seq.certificate[0]
    checks["coker gamma.g -> coker g1 surjective"] = seq.terms[-1].is_trivial and seq.certificate[-1]
    alt = alternating_orders_agree(seq)
    if alt is not None:
        checks["alternating order product"] = alt
    spec = classical_specialization(d, res)
    checks["classical specialization"] = spec.ok
    for k in range(witnesses):
        again = connecting_hom(d, random.Random(rng.getrandbits(64)))
        checks[f"delta witness {k}"] = again.hom == res.connecting.hom
    checks["round trip"] = round_trips(d)
    if oracle.all_finite(_groups(d), cap):
        e = oracle.enum_connecting(d, res.connecting, cap)
        checks["oracle: delta independent of lifts"] = e.independent
        checks["oracle: delta domain"] = e.domain_matches
        checks["oracle: delta table"] = e.matches
        checks["oracle: exactness verdicts"] = oracle.sequence_agrees(seq, cap)
        checks["oracle: term orders"] = (
            oracle.enum_snake_orders(d, cap) == [t.order for t in seq.terms])
    return checks


def check_ring(p: RingPair, cap: int = oracle.DEFAULT_CAP) -> Dict[str, bool]:
    checks = {}
    full = ring_lemma_full(p.alpha, p.beta)
    seq = full.sequence
    checks["ring lemma exact"] = seq.is_exact
    ring = exact_ring(p.alpha, p.beta)
    checks["exact ring nodes"] = all(ring.exactness)
    checks["exact ring factorizations"] = all(ring.factorizations.values())
    checks["exact ring matches ring lemma"] = ring.matches_ring_lemma
    alt = alternating_orders_agree(seq)
    if alt is not None:
        checks["alternating order product"] = alt
    checks["round trip"] = round_trips(p)
    groups = [p.alpha.source, p.alpha.target, p.beta.target]
    if oracle.all_finite(groups, cap):
        try:
            checks["oracle: exactness verdicts"] = oracle.sequence_agrees(seq, cap)
        except CapExceeded:
            pass
    return checks


def check_four(d: FourDiagram, cap: int = oracle.DEFAULT_CAP) -> Dict[str, bool]:
    checks = {}
    d = validate_four(d)
    res = four_lemma(d)
    checks["es1 exact"] = res.es1.is_exact
    checks["es2 exact"] = res.es2.is_exact
    checks["esr exact"] = res.esr.is_exact
    for name, ok in res.checks.items():
        checks[name] = ok
    # restate the two lattice equalities independently of four_lemma
    checks["ker gamma == g(ker beta) (recomputed)"] = (
        image_of(d.g, kernel(d.beta).subgroup) == kernel(d.gamma).subgroup)
    checks["im beta == g1^-1(im gamma) (recomputed)"] = (
        preimage(d.g1, image(d.gamma)) == image(d.beta))
    checks["round trip"] = round_trips(d)
    if oracle.all_finite(_groups(d), cap):
        for name, seq in (("es1", res.es1), ("es2", res.es2), ("esr", res.esr)):
            checks[f"oracle: {name} verdicts"] = oracle.sequence_agrees(seq, cap)
        checks["oracle: |ker beta| == |ker beta & ker g| |ker gamma|"] = (
            oracle.four_kernel_count(d, cap))
    return checks


def check_any(d, cap: int = oracle.DEFAULT_CAP, rng: Optional[random.Random] = None):
    if isinstance(d, SnakeDiagram):
        return check_snake(d, cap, rng=rng)
    if isinstance(d, FourDiagram):
        return check_four(d, cap)
    return check_ring(d, cap)

