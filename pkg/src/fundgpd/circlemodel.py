"""Exact rational model of the fundamental groupoid of the circle group.

A homotopy class of circle paths is determined by its start point and the
displacement of its lift, so ``(start mod 1, disp)`` is a faithful model.
Arrows compose right to left: ``a ∘ b`` runs ``b`` first.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedBasic, NotComposable

Q = Fraction
HALF = Fraction(1, 2)


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CircleGroupPoint:
    value: Fraction

    def __post_init__(self):
        v = _q(self.value)
        if not 0 <= v < 1:
            object.__setattr__(self, "value", v - math.floor(v))
        elif v is not self.value:
            object.__setattr__(self, "value", v)

    def __add__(self, other: "CircleGroupPoint") -> "CircleGroupPoint":
        return CircleGroupPoint(self.value + other.value)

    def __neg__(self) -> "CircleGroupPoint":
        return CircleGroupPoint(-self.value)


def P(x) -> CircleGroupPoint:
    return CircleGroupPoint(_q(x))


@dataclass(frozen=True)
class CirclePathClass:
    start: CircleGroupPoint
    disp: Fraction

    def __post_init__(self):
        if not isinstance(self.start, CircleGroupPoint):
            object.__setattr__(self, "start", P(self.start))
        object.__setattr__(self, "disp", _q(self.disp))

    @property
    def end(self) -> CircleGroupPoint:
        return P(self.start.value + self.disp)

    @property
    def inverse(self) -> "CirclePathClass":
        return CirclePathClass(self.end, -self.disp)

    @staticmethod
    def unit(x: CircleGroupPoint) -> "CirclePathClass":
        return CirclePathClass(x, Q(0))


@dataclass(frozen=True)
class TransfArrow:
    """``(lift, g)`` in the transformation groupoid; source ``g``, range ``g + p(lift)``."""

    lift: Fraction
    g: CircleGroupPoint

    def __post_init__(self):
        object.__setattr__(self, "lift", _q(self.lift))
        if not isinstance(self.g, CircleGroupPoint):
            object.__setattr__(self, "g", P(self.g))

    @property
    def source(self) -> CircleGroupPoint:
        return self.g

    @property
    def range(self) -> CircleGroupPoint:
        return P(self.lift + self.g.value)


def covering(lift: Fraction) -> CircleGroupPoint:
    return P(lift)


def transf_compose(a: TransfArrow, b: TransfArrow) -> TransfArrow:
    if a.g != b.range:
        raise NotComposable(f"{a} after {b}")
    return TransfArrow(a.lift + b.lift, b.g)


def transf_inverse(a: TransfArrow) -> TransfArrow:
    return TransfArrow(-a.lift, a.range)


@dataclass(frozen=True)
class Arc:
    """Open arc centred at ``anchor`` of total length ``length``."""

    anchor: CircleGroupPoint
    length: Fraction

    def __post_init__(self):
        if not isinstance(self.anchor, CircleGroupPoint):
            object.__setattr__(self, "anchor", P(self.anchor))
        object.__setattr__(self, "length", _q(self.length))
        if not 0 < self.length < 1:
            raise MalformedBasic(f"arc length {self.length} outside (0, 1)")

    def offset(self, p: CircleGroupPoint) -> Fraction:
        """Signed position of ``p`` relative to the anchor, in [-1/2, 1/2)."""
        x = p.value - self.anchor.value
        return x - math.floor(x + HALF)

    def __contains__(self, p: CircleGroupPoint) -> bool:
        return abs(self.offset(p)) < self.length / 2

    def slack(self, p: CircleGroupPoint) -> Fraction:
        return self.length / 2 - abs(self.offset(p))

    def displacement(self, p: CircleGroupPoint, q: CircleGroupPoint) -> Fraction:
        """Lift displacement of a path inside the arc from ``p`` to ``q``."""
        return self.offset(q) - self.offset(p)


# --- groupoid operations --------------------------------------------------------

def class_compose(a: CirclePathClass, b: CirclePathClass) -> CirclePathClass:
    if b.end != a.start:
        raise NotComposable(f"end {b.end.value} of the first path is not start {a.start.value}")
    return CirclePathClass(b.start, a.disp + b.disp)


def class_translate(a: CirclePathClass, g: CircleGroupPoint) -> CirclePathClass:
    return CirclePathClass(a.start + g, a.disp)


def class_pointwise_product(a: CirclePathClass, b: CirclePathClass) -> CirclePathClass:
    return CirclePathClass(a.start + b.start, a.disp + b.disp)


def J_map(t: TransfArrow) -> tuple[CirclePathClass, CircleGroupPoint]:
    return CirclePathClass(t.g, t.lift), t.g


def J_inverse(c: CirclePathClass, g: CircleGroupPoint) -> TransfArrow:
    if c.start != g:
        raise NotComposable("fibre coordinate must equal the start of the class")
    return TransfArrow(c.disp, g)


# --- sampling -------------------------------------------------------------------

def _rand_q(rng: random.Random, lo: int, hi: int, den: int = 97) -> Fraction:
    d = rng.randint(1, den)
    return Fraction(rng.randint(lo * d, hi * d), d)


def _rand_point(rng: random.Random) -> CircleGroupPoint:
    return P(_rand_q(rng, 0, 1))


def _record(report: dict, key: str, ok: bool, witness) -> None:
    report["checks"][key] = report["checks"].get(key, 0) + ok
    if not ok:
        report["pass"] = False
        report["failures"] += 1
        report.setdefault("witness", {}).setdefault(key, witness)


def _new_report(samples: int) -> dict:
    if samples < 1:
        raise ValueError("samples must be positive")
    return {"pass": True, "samples": samples, "checks": {}, "failures": 0}


def verify_translation_lemmas(samples: int = 10_000, seed: int = 0) -> dict:
    """Joint-of-translated-path identity and the two translation identities."""
    rng = random.Random(seed)
    rep = _new_report(samples)
    zero = P(0)
    for _ in range(samples):
        eta = CirclePathClass(zero, _rand_q(rng, -3, 3))
        gamma = CirclePathClass(zero, _rand_q(rng, -3, 3))
        g = _rand_point(rng)
        w = [str(eta.disp), str(gamma.disp), str(g.value)]

        lhs = class_translate(class_compose(class_translate(eta, gamma.end), gamma), g)
        rhs = class_translate(class_pointwise_product(eta, gamma), g)
        _record(rep, "joint_of_translated_path", lhs == rhs, w)

        # g = identity: the concatenation realises the product in the cover group
        lhs0 = class_compose(class_translate(eta, gamma.end), gamma)
        _record(rep, "joint_at_identity", lhs0 == class_pointwise_product(eta, gamma), w)

        # arbitrary (not based) paths for the translation identities
        e2 = CirclePathClass(_rand_point(rng), _rand_q(rng, -3, 3))
        c2 = CirclePathClass(_rand_point(rng), _rand_q(rng, -3, 3))
        _record(rep, "product_with_translate",
                class_translate(class_pointwise_product(e2, c2), g)
                == class_pointwise_product(e2, class_translate(c2, g)), w)
        theta = c2
        delta = CirclePathClass(theta.end, _rand_q(rng, -3, 3))
        _record(rep, "concatenation_with_translate",
                class_translate(class_compose(delta, theta), g)
                == class_compose(class_translate(delta, g), class_translate(theta, g)), w)
    return rep


def verify_transformation_theorem(samples: int = 10_000, seed: int = 0) -> dict:
    """J is a bijective groupoid homomorphism preserving units and inverses."""
    rng = random.Random(seed)
    rep = _new_report(samples)
    for _ in range(samples):
        r_gamma, r_eta = _rand_q(rng, -3, 3), _rand_q(rng, -3, 3)
        g = _rand_point(rng)
        second = TransfArrow(r_gamma, g)
        first = TransfArrow(r_eta, covering(r_gamma) + g)
        w = [str(r_eta), str(r_gamma), str(g.value)]

        prod = transf_compose(first, second)
        _record(rep, "product_formula", prod == TransfArrow(r_eta + r_gamma, g), w)
        (c1, h1), (c2, _), (cp, gp) = J_map(first), J_map(second), J_map(prod)
        _record(rep, "homomorphism", class_compose(c1, c2) == cp and gp == g, w)
        _record(rep, "inverse_after_J", J_inverse(*J_map(first)) == first, w)
        _record(rep, "J_after_inverse", J_map(J_inverse(c1, h1)) == (c1, h1), w)
        unit = TransfArrow(Q(0), g)
        _record(rep, "units", J_map(unit)[0] == CirclePathClass.unit(g), w)
        _record(rep, "inverses", J_map(transf_inverse(second))[0] == c2.inverse, w)
        # the range and source maps correspond
        _record(rep, "range_source", c2.end == second.range and c2.start == second.source, w)
    return rep


# --- basic sets -----------------------------------------------------------------

def _check_basic(alpha: CirclePathClass, U: Arc, V: Arc) -> None:
    if alpha.end not in U or alpha.start not in V:
        raise MalformedBasic("alpha must start in V and end in U")


def uc_arc_membership(c: CirclePathClass, n: tuple[CirclePathClass, Arc, Arc]) -> bool:
    """Is ``c`` in N(alpha, U, V): alpha extended inside V at its start and U at its end."""
    alpha, U, V = n
    _check_basic(alpha, U, V)
    if c.start not in V or c.end not in U:
        return False
    return c.disp == alpha.disp + V.displacement(c.start, alpha.start) + U.displacement(alpha.end, c.end)


def cover_basic_interval(alpha: CirclePathClass, U: Arc) -> tuple[Fraction, Fraction]:
    """N(alpha, U) in the cover, as an open interval of lifts."""
    if alpha.start != P(0):
        raise MalformedBasic("cover classes start at the identity")
    if alpha.end not in U:
        raise MalformedBasic("alpha must end in U")
    centre = alpha.disp - U.offset(alpha.end)
    return centre - U.length / 2, centre + U.length / 2


def _box_around_image(lam: Fraction, g: CircleGroupPoint, lo: Fraction, hi: Fraction,
                      V: Arc) -> bool:
    """A basic set around J(lam, g) whose J-preimage lies in the box; exact."""
    eps = min(lam - lo, hi - lam, V.slack(g)) / 3
    if eps <= 0:
        return False
    # N(J(lam, g), U', V') with arcs of length 2 eps around the endpoints:
    # members have start within eps of g and lift within 2 eps of lam
    return lo <= lam - 2 * eps and lam + 2 * eps <= hi and V.slack(g) >= eps


def _box_inside_preimage(c: CirclePathClass, U: Arc, V: Arc) -> bool:
    """A product box around J^-1(c) mapping into N(alpha, U, V); exact."""
    su, sv = U.slack(c.end), V.slack(c.start)
    eps = min(su, sv) / 3
    # start moves < eps, end moves < 2 eps: both stay inside their arcs, where
    # offsets are affine with slope one, so the displacement identity persists
    return eps > 0 and sv > eps and su > 2 * eps


def J_basis_image(n_cover: tuple[CirclePathClass, Arc], V: Arc, samples: int = 1000,
                  seed: int = 0) -> dict:
    """Image of the product basic set N(alpha, U) x V under J.

    The image is the set of classes starting in V whose lift lies in the
    interval N(alpha, U); in (start, end) coordinates it is a parallelogram,
    which is open and a union of basic sets N(beta, U', V'). Both directions
    are verified by exact local containment at sampled points.
    """
    alpha, U = n_cover
    lo, hi = cover_basic_interval(alpha, U)
    rng = random.Random(seed)
    rep = _new_report(samples)
    rep["descriptor"] = {"start_arc": [str(V.anchor.value), str(V.length)],
                         "lift_interval": [str(lo), str(hi)]}
    candidate = (alpha, U, V) if alpha.start in V else None
    for _ in range(samples):
        # a point of the box, pushed forward
        t = Fraction(rng.randint(1, 999), 1000)
        lam = lo + (hi - lo) * t
        g = P(V.anchor.value + V.length * (Fraction(rng.randint(1, 999), 1000) - HALF))
        c, _ = J_map(TransfArrow(lam, g))
        w = [str(lam), str(g.value)]
        _record(rep, "image_open", _box_around_image(lam, g, lo, hi, V), w)
        # a point of the basic set N(alpha', U, V) around J(lam, g), pulled back
        beta = c
        Ub, Vb = Arc(beta.end, U.length), Arc(beta.start, V.length)
        s = P(beta.start.value + Vb.length * (Fraction(rng.randint(1, 999), 1000) - HALF))
        e = P(beta.end.value + Ub.length * (Fraction(rng.randint(1, 999), 1000) - HALF))
        d = beta.disp + Vb.displacement(s, beta.start) + Ub.displacement(beta.end, e)
        member = CirclePathClass(s, d)
        ok = uc_arc_membership(member, (beta, Ub, Vb))
        ok = ok and _box_inside_preimage(member, Ub, Vb)
        pre = J_inverse(member, member.start)
        ok = ok and J_map(pre)[0] == member
        _record(rep, "preimage_open", ok, [str(s.value), str(d)])
    rep["matches_single_basic_set"] = None
    if candidate is not None:
        rep["matches_single_basic_set"] = _literal_equality(alpha, U, V, lo, hi, rng, samples)
    return rep


def _literal_equality(alpha, U, V, lo, hi, rng, samples) -> bool:
    """Does the image coincide with N(alpha, U, V) on sampled classes?"""
    for _ in range(samples):
        g = P(V.anchor.value + V.length * (Fraction(rng.randint(1, 999), 1000) - HALF))
        lam = lo + (hi - lo) * Fraction(rng.randint(1, 999), 1000)
        if not uc_arc_membership(CirclePathClass(g, lam), (alpha, U, V)):
            return False
        e = P(U.anchor.value + U.length * (Fraction(rng.randint(1, 999), 1000) - HALF))
        d = alpha.disp + V.displacement(g, alpha.start) + U.displacement(alpha.end, e)
        if not lo < d < hi:
            return False
    return True


# --- torus ----------------------------------------------------------------------

def verify_torus(samples: int = 1000, seed: int = 0) -> dict:
    """The two-torus as a product of circle models, checked componentwise."""
    rng = random.Random(seed)
    rep = _new_report(samples)
    for _ in range(samples):
        ok = True
        pairs = []
        for _axis in range(2):
            r_gamma, r_eta = _rand_q(rng, -3, 3), _rand_q(rng, -3, 3)
            g = _rand_point(rng)
            second = TransfArrow(r_gamma, g)
            first = TransfArrow(r_eta, covering(r_gamma) + g)
            lhs = J_map(transf_compose(first, second))[0]
            rhs = class_compose(J_map(first)[0], J_map(second)[0])
            ok &= lhs == rhs
            pairs.append((lhs, rhs))
        prod_l = tuple(p[0] for p in pairs)
        prod_r = tuple(p[1] for p in pairs)
        _record(rep, "componentwise_homomorphism", ok and prod_l == prod_r, str(pairs))
    return rep


def circle_demo(samples: int = 10_000, seed: int = 0) -> dict:
    U = Arc(P(0), HALF)
    out = {
        "translation_lemmas": verify_translation_lemmas(samples, seed),
        "transformation_theorem": verify_transformation_theorem(samples, seed),
        "basis_image": J_basis_image((CirclePathClass(P(0), Q(0)), U), U, samples, seed),
        "basis_image_tiny_arcs": J_basis_image(
            (CirclePathClass(P(0), Q(1)), Arc(P(0), Fraction(1, 1000))),
            Arc(P(Fraction(1, 3)), Fraction(1, 1000)), max(1, samples // 10), seed),
        "torus": verify_torus(max(1, samples // 10), seed),
    }
    out["pass"] = all(v["pass"] for v in out.values() if isinstance(v, dict))
    return out
