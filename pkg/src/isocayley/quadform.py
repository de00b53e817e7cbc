"""Binary quadratic forms and exact class groups of quadratic orders.

Imaginary discriminants give the ordinary class group via unique reduced
representatives; positive (real) discriminants give the narrow class group
via reduction cycles of indefinite forms.  Composition is classical Gauss
composition; nothing here is asymptotically clever, everything is exact.

A class group is carried together with its invariant-factor structure and a
bijective dictionary between form classes and group elements, so that Cayley
graphs can be built on (subgroups of) it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Iterator, Optional, Sequence

from .abelian import (
    FiniteAbelianGroup,
    GroupElement,
    Subgroup,
    group_from_relations,
    op_mul,
    op_pow,
)
from .errors import InputError, InternalConsistencyError, PreconditionError
from .ntheory import fundamental_discriminant, is_prime, kronecker, primes_below, sqrt_mod_prime

__all__ = [
    "Discriminant",
    "QuadForm",
    "FormClass",
    "ClassGroup",
    "SBGenerator",
    "reduce_form",
    "form_class",
    "compose",
    "inverse",
    "principal_form",
    "class_group",
    "narrow_class_group",
    "prime_form",
    "generating_multiset",
]

DEFAULT_DISC_BOUND = 10**7


@dataclass(frozen=True)
class Discriminant:
    """A nonsquare integer D = 0 or 1 mod 4, split as D = f^2 * d_K."""

    value: int
    fundamental: int
    conductor: int

    @classmethod
    def of(cls, value: int) -> "Discriminant":
        d_k, f = fundamental_discriminant(value)
        return cls(value, d_k, f)

    @property
    def is_imaginary(self) -> bool:
        return self.value < 0

    def __int__(self) -> int:
        return self.value


def _as_disc(d: "Discriminant | int") -> Discriminant:
    return d if isinstance(d, Discriminant) else Discriminant.of(d)


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.discriminant < 0 and self.a <= 0:
            raise InputError(f"form {self.triple()} is not positive definite")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __repr__(self) -> str:
        return f"QuadForm{self.triple()}"


def principal_form(disc: "Discriminant | int") -> QuadForm:
    """The principal (identity) form (1, k, (k^2-D)/4) with k = D mod 2."""
    d = _as_disc(disc).value
    k = d % 2
    return QuadForm(1, k, (k * k - d) // 4)


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

def _normalize_definite(a: int, b: int, c: int) -> tuple[int, int, int]:
    # shift b into (-a, a]
    r = b % (2 * a)
    if r > a:
        r -= 2 * a
    c = c + (r * r - b * b) // (4 * a)
    return a, r, c


def _reduce_definite(f: QuadForm) -> QuadForm:
    a, b, c = f.triple()
    a, b, c = _normalize_definite(a, b, c)
    while a > c or b <= -a:
        if a > c:
            a, b, c = c, -b, a
        a, b, c = _normalize_definite(a, b, c)
    if (b < 0) and (-b == a or a == c):
        b = -b
    return QuadForm(a, b, c)


def _is_reduced_indefinite(a: int, b: int, c: int, d: int) -> bool:
    # 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, all exact
    if b <= 0 or b * b >= d:
        return False
    t = 2 * abs(a)
    if (t - b >= 0 and (t - b) * (t - b) >= d):  # 2|a| >= sqrt(D) + b fails
        return False
    if (t + b) * (t + b) <= d:  # 2|a| <= sqrt(D) - b fails
        return False
    return True


def _rho_indefinite(a: int, b: int, c: int, d: int) -> tuple[int, int, int]:
    """One reduction step (a,b,c) -> (c, b', c') for indefinite forms."""
    s = isqrt(d)
    m = 2 * abs(c)
    if abs(c) * abs(c) > d:
        # |c| beyond sqrt(D): center b' in (-|c|, |c|]
        bp = (-b) % m
        if bp > abs(c):
            bp -= m
    else:
        # largest b' = -b (mod 2|c|) below sqrt(D)
        bp = s - ((s + b) % m)
    cp = (bp * bp - d) // (4 * c)
    return c, bp, cp


def _reduce_indefinite_once(f: QuadForm) -> QuadForm:
    """Walk rho-steps until a reduced indefinite form is reached."""
    d = f.discriminant
    a, b, c = f.triple()
    guard = 0
    while not _is_reduced_indefinite(a, b, c, d):
        a, b, c = _rho_indefinite(a, b, c, d)
        guard += 1
        if guard > 10_000:
            raise InternalConsistencyError(f"reduction of {f} did not terminate")
    return QuadForm(a, b, c)


def _cycle_of(f: QuadForm) -> list[QuadForm]:
    """The full rho-cycle through a reduced indefinite form."""
    d = f.discriminant
    cycle = [f]
    a, b, c = _rho_indefinite(*f.triple(), d)
    while (a, b, c) != f.triple():
        g = QuadForm(a, b, c)
        if not _is_reduced_indefinite(a, b, c, d):
            raise InternalConsistencyError(f"rho left the reduced set at {g}")
        cycle.append(g)
        a, b, c = _rho_indefinite(a, b, c, d)
        if len(cycle) > 100_000:
            raise InternalConsistencyError("rho-cycle did not close")
    return cycle


def reduce_form(f: QuadForm) -> QuadForm:
    """The canonical reduced representative equivalent to f.

    For D < 0 this is the unique reduced form (|b| <= a <= c, b >= 0 on
    ties); for D > 0 it is the lexicographically least (a, b, c) on the
    reduction cycle of f.
    """
    d = f.discriminant
    if d == 0 or d % 4 not in (0, 1) or (d > 0 and isqrt(d) ** 2 == d):
        raise InputError(f"form {f.triple()} has degenerate discriminant {d}")
    if d < 0:
        return _reduce_definite(f)
    start = _reduce_indefinite_once(f)
    return min(_cycle_of(start), key=lambda g: g.triple())


@dataclass(frozen=True)
class FormClass:
    """A proper equivalence class, held by its canonical reduced representative."""

    rep: QuadForm

    @property
    def discriminant(self) -> int:
        return self.rep.discriminant

    def triple(self) -> tuple[int, int, int]:
        return self.rep.triple()

    def __repr__(self) -> str:
        return f"FormClass{self.rep.triple()}"


def form_class(f: QuadForm) -> FormClass:
    return FormClass(reduce_form(f))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(x: FormClass, y: FormClass) -> FormClass:
    """Gauss composition of form classes (classical algorithm, no shortcuts)."""
    if x.discriminant != y.discriminant:
        raise InputError(
            f"discriminant mismatch: {x.discriminant} vs {y.discriminant}"
        )
    a1, b1, c1 = x.rep.triple()
    a2, b2, c2 = y.rep.triple()
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = _xgcd(s, d)
        x2, y2 = u, -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    a3 = v1 * v2
    b3 = b2 + 2 * v2 * r
    num = c2 * d1 + r * (b2 + v2 * r)
    if num % v1:
        raise InternalConsistencyError(f"composition failed on {x} * {y}")
    c3 = num // v1
    out = QuadForm(a3, b3, c3)
    if out.discriminant != x.discriminant:
        raise InternalConsistencyError(f"composition broke the discriminant on {x} * {y}")
    return form_class(out)


def inverse(x: FormClass) -> FormClass:
    a, b, c = x.rep.triple()
    return form_class(QuadForm(a, -b, c))


# ---------------------------------------------------------------------------
# Enumeration of reduced forms
# ---------------------------------------------------------------------------

def _reduced_definite_forms(d: int) -> Iterator[QuadForm]:
    """All primitive reduced forms of discriminant d < 0 (ascending a)."""
    bound = isqrt(-d // 3)
    for a in range(1, bound + 1):
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            yield QuadForm(a, b, c)


def _divisors(n: int) -> Iterator[int]:
    i = 1
    while i * i <= n:
        if n % i == 0:
            yield i
            if i != n // i:
                yield n // i
        i += 1


def _reduced_indefinite_forms(d: int) -> Iterator[QuadForm]:
    """All primitive reduced indefinite forms of discriminant d > 0."""
    s = isqrt(d)
    for b in range(1, s + 1):
        if (b - d) % 2:
            continue
        m = (d - b * b) // 4
        for u in _divisors(m):
            if not _is_reduced_indefinite(u, b, -(m // u), d):
                continue
            cc = m // u
            if gcd(gcd(u, b), cc) != 1:
                continue
            yield QuadForm(u, b, -cc)
            yield QuadForm(-u, b, cc)


# ---------------------------------------------------------------------------
# Class groups
# ---------------------------------------------------------------------------

class ClassGroup:
    """A (narrow, when D > 0) form class group with explicit abelian structure.

    ``classes`` is sorted by representative triple; ``to_element`` /
    ``from_element`` form the bijective dictionary with the invariant-factor
    group.  Construction checks bijectivity and the order; the exhaustive
    homomorphism check lives in the test suite.
    """

    def __init__(self, disc: Discriminant, classes: Sequence[FormClass]):
        self.discriminant = disc
        self.classes = tuple(sorted(classes, key=lambda c: c.triple()))
        self.identity = form_class(principal_form(disc))
        group, to_elem = self._structure()
        self.group = group
        self.to_element = to_elem
        self.from_element = {e: c for c, e in to_elem.items()}
        if len(self.from_element) != len(self.classes):
            raise InternalConsistencyError("class -> element dictionary not bijective")

    @property
    def order(self) -> int:
        return len(self.classes)

    def _structure(self) -> tuple[FiniteAbelianGroup, dict[FormClass, GroupElement]]:
        # Greedy generator hunt: each class not yet expressible adds a
        # generator; the minimal power landing in the known subgroup gives a
        # triangular relation row.  SNF turns the rows into invariants.
        gens: list[FormClass] = []
        reps: dict[FormClass, list[int]] = {self.identity: []}
        rows: list[list[int]] = []
        for cl in self.classes:
            if cl in reps:
                continue
            for vec in reps.values():
                vec.append(0)
            known = list(reps.items())
            gens.append(cl)
            r = len(gens)
            power = cl
            k = 1
            while power not in reps:
                # power = cl^k sits outside the subgroup built so far, so the
                # whole coset power * <old> is new.
                for base, vec in known:
                    prod = compose(power, base)
                    if prod in reps:
                        raise InternalConsistencyError("coset overlap during structure walk")
                    coeffs = list(vec)
                    coeffs[r - 1] = k
                    reps[prod] = coeffs
                k += 1
                power = compose(power, cl)
            base_vec = reps[power]
            row = [-x for x in base_vec] + [0] * (r - len(base_vec))
            row[r - 1] += k
            for existing in rows:
                existing.extend([0] * (r - len(existing)))
            rows.append(row)
        r = len(gens)
        for row in rows:
            row.extend([0] * (r - len(row)))
        group, images = group_from_relations(r, rows)
        if group.order != len(self.classes):
            raise InternalConsistencyError(
                f"structure of order {group.order} for {len(self.classes)} classes"
            )
        to_elem: dict[FormClass, GroupElement] = {}
        for cl, vec in reps.items():
            e = group.identity
            for c, img in zip(vec, images):
                e = op_mul(e, op_pow(img, c))
            to_elem[cl] = e
        if len(to_elem) != len(self.classes):
            raise InternalConsistencyError("structure walk missed classes")
        return group, to_elem

    def element_of(self, cl: FormClass) -> GroupElement:
        try:
            return self.to_element[cl]
        except KeyError:
            raise InputError(f"{cl} is not a class of discriminant {self.discriminant.value}") from None

    def class_of(self, e: GroupElement) -> FormClass:
        try:
            return self.from_element[e]
        except KeyError:
            raise InputError(f"{e} is not an element of {self.group}") from None

    def to_json(self) -> dict:
        return {
            "discriminant": self.discriminant.value,
            "conductor": self.discriminant.conductor,
            "fundamental": self.discriminant.fundamental,
            "order": self.order,
            "invariants": list(self.group.invariants),
            "classes": [
                {"form": list(c.triple()), "coords": list(self.to_element[c].coords)}
                for c in self.classes
            ],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def __repr__(self) -> str:
        return (
            f"ClassGroup(D={self.discriminant.value}, h={self.order}, "
            f"invariants={list(self.group.invariants)})"
        )


def class_group(disc: "Discriminant | int", bound: int = DEFAULT_DISC_BOUND) -> ClassGroup:
    """Class group for D < 0; delegates to narrow_class_group for D > 0."""
    d = _as_disc(disc)
    if abs(d.value) > bound:
        raise PreconditionError(f"|{d.value}| exceeds the configured bound {bound}")
    if d.value > 0:
        return narrow_class_group(d, bound)
    classes = [FormClass(f) for f in _reduced_definite_forms(d.value)]
    return ClassGroup(d, classes)


def narrow_class_group(disc: "Discriminant | int", bound: int = DEFAULT_DISC_BOUND) -> ClassGroup:
    """Narrow class group of a real quadratic discriminant via form cycles."""
    d = _as_disc(disc)
    if d.value < 0:
        raise InputError("narrow_class_group expects a positive discriminant")
    if d.value > bound:
        raise PreconditionError(f"{d.value} exceeds the configured bound {bound}")
    forms = {f.triple(): f for f in _reduced_indefinite_forms(d.value)}
    seen: set[tuple[int, int, int]] = set()
    classes = []
    for triple in sorted(forms):
        if triple in seen:
            continue
        cycle = _cycle_of(forms[triple])
        for g in cycle:
            if g.triple() not in forms:
                raise InternalConsistencyError(f"cycle left the reduced set at {g}")
            seen.add(g.triple())
        classes.append(FormClass(min(cycle, key=lambda g: g.triple())))
    return ClassGroup(d, classes)


# ---------------------------------------------------------------------------
# Prime forms and S_B
# ---------------------------------------------------------------------------

def prime_form(disc: "Discriminant | int", ell: int) -> Optional[tuple[FormClass, FormClass, int]]:
    """The form class(es) above the rational prime ell, if any.

    Returns None when ell is inert.  Otherwise returns (cls, cls_inverse, b)
    where (ell, b, .) is the prime form with 0 <= b < 2*ell; for ramified
    primes the two classes coincide.  Raises when ell divides the conductor.
    """
    d = _as_disc(disc)
    if not is_prime(ell):
        raise InputError(f"{ell} is not prime")
    if d.conductor % ell == 0:
        raise PreconditionError(
            f"prime {ell} divides the conductor {d.conductor}; the ideal is not invertible"
        )
    ds = d.value
    sym = kronecker(ds, ell)
    if sym == -1:
        return None
    if ell == 2:
        if sym == 1:  # ds = 1 mod 8
            b = 1
        else:  # ramified: ds = 0 or 4 mod 8
            b = 0 if ds % 8 == 0 else 2
    elif sym == 0:
        b = ell if ds % 2 else 0
    else:
        r = sqrt_mod_prime(ds % ell, ell)
        if r is None:
            raise InternalConsistencyError(f"split prime {ell} has no sqrt of {ds}")
        b = r if (r - ds) % 2 == 0 else r + ell
        b = min(b, 2 * ell - b)  # canonical root, so labels are deterministic
    num = b * b - ds
    if num % (4 * ell):
        raise InternalConsistencyError(f"prime form above {ell}: 4l does not divide b^2-D")
    f = QuadForm(ell, b, num // (4 * ell))
    cls = form_class(f)
    return cls, inverse(cls), b


@dataclass(frozen=True)
class SBGenerator:
    """One labeled member of the generating multiset S_B."""

    label: str
    ell: int
    b: int
    form_class: FormClass
    element: GroupElement


def generating_multiset(
    cls_group: ClassGroup,
    bound: int,
    subgroup: Subgroup,
    avoid: Iterable[int] = (),
) -> list[SBGenerator]:
    """Labeled prime-form generators with prime norm below ``bound``.

    For each prime ell < bound, not in ``avoid`` and coprime to the
    conductor, every prime form above ell whose class lies in ``subgroup``
    enters the multiset: both conjugates when ell splits (labels "ell:b" and
    "ell:2*ell-b"), one entry labeled "ell" when ell ramifies.  The result
    is closed under inversion as a multiset.
    """
    if subgroup.ambient != cls_group.group:
        raise InputError("subgroup does not live in the given class group")
    avoid_set = set(avoid)
    disc = cls_group.discriminant
    out: list[SBGenerator] = []
    for ell in primes_below(bound):
        if ell in avoid_set or disc.conductor % ell == 0:
            continue
        hit = prime_form(disc, ell)
        if hit is None:
            continue
        cls, cls_inv, b = hit
        elem = cls_group.element_of(cls)
        if elem not in subgroup:
            continue
        sym = kronecker(disc.value, ell)
        if sym == 0:
            out.append(SBGenerator(str(ell), ell, b, cls, elem))
        else:
            b_conj = (2 * ell - b) % (2 * ell)
            out.append(SBGenerator(f"{ell}:{b}", ell, b, cls, elem))
            out.append(
                SBGenerator(
                    f"{ell}:{b_conj}", ell, b_conj, cls_inv, cls_group.element_of(cls_inv)
                )
            )
    return out
