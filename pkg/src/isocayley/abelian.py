"""Exact finite abelian groups: presentations, characters, subgroups, homomorphisms.

Groups are kept in invariant-factor form ``Z/d_1 x ... x Z/d_k`` with
``d_1 | d_2 | ... | d_k``; elements are coordinate vectors reduced modulo the
invariants.  Characters carry exact rational angles (fractions of a full
turn), so orthogonality and restriction checks are exact; complex values only
appear when sums are actually evaluated.

Abstract groups can be loaded from a small text format::

    # comment lines and blank lines are ignored; '#' starts a comment anywhere
    invariants: 2 4
    subgroup H: 1,2 0,2
    hom f -> 2: 1 0

* the first significant line must be ``invariants: d_1 d_2 ... d_k``
  (an empty list after the colon denotes the trivial group);
* ``subgroup NAME: v1 v2 ...`` lists generators, one coordinate vector each,
  written as comma-separated integers with exactly k coordinates;
* ``hom NAME -> e_1 ... e_m: v1 ... vk`` gives the target's invariants and
  one image vector (m coordinates) per source invariant.

Parse failures raise :class:`~isocayley.errors.GroupFileError` with the
offending line number.
"""
from __future__ import annotations

import itertools
from bisect import bisect_left
from cmath import exp as _cexp
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, pi
from typing import Iterable, Iterator, Sequence, Union

from .errors import GroupFileError, InputError, InternalConsistencyError

__all__ = [
    "FiniteAbelianGroup",
    "GroupElement",
    "Character",
    "Subgroup",
    "Homomorphism",
    "GroupFile",
    "group_from_relations",
    "op_mul",
    "op_inv",
    "op_pow",
    "subgroup_generated",
    "full_subgroup",
    "characters_of",
    "extend_character",
    "hom_kernel_and_index",
    "filter_sum_check",
    "smith_normal_form",
    "load_group_file",
    "parse_group_text",
]

# Imaginary residue above which a "provably real" character sum is treated as
# an internal bug rather than rounded away.
_IMAG_TOL = 1e-9


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(
    rows: Sequence[Sequence[int]], ncols: int
) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Diagonalize an integer matrix by elementary row/column operations.

    Returns ``(diag, u, v)`` where ``diag`` has ``ncols`` nonnegative entries
    with ``diag[i]`` dividing ``diag[i+1]`` (zeros trailing), ``u`` is the
    unimodular row transform (``len(rows)`` square) and ``v`` the unimodular
    column transform (``ncols`` square), so that ``u @ A @ v`` is the diagonal
    matrix.  Plain Python integers throughout; no modular shortcuts.
    """
    m = len(rows)
    a = [list(map(int, r)) for r in rows]
    for r in a:
        if len(r) != ncols:
            raise InputError(f"relation row has {len(r)} entries, expected {ncols}")
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src: int, dst: int, q: int) -> None:
        asrc, adst = a[src], a[dst]
        for t in range(ncols):
            adst[t] += q * asrc[t]
        usrc, udst = u[src], u[dst]
        for t in range(m):
            udst[t] += q * usrc[t]

    def add_col(src: int, dst: int, q: int) -> None:
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    limit = min(m, ncols)
    while t < limit:
        # smallest-magnitude nonzero entry of the trailing block becomes the pivot
        piv = None
        best = 0
        for i in range(t, m):
            row = a[i]
            for j in range(t, ncols):
                e = row[j]
                if e and (piv is None or abs(e) < best):
                    piv, best = (i, j), abs(e)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])

        cleared = True
        for i in range(t + 1, m):
            if a[i][t]:
                add_row(t, i, -(a[i][t] // a[t][t]))
                if a[i][t]:
                    cleared = False
        for j in range(t + 1, ncols):
            if a[t][j]:
                add_col(t, j, -(a[t][j] // a[t][t]))
                if a[t][j]:
                    cleared = False
        if not cleared:
            continue

        # the pivot must divide the whole trailing block for the chain d_i | d_{i+1}
        offender = None
        for i in range(t + 1, m):
            row = a[i]
            for j in range(t + 1, ncols):
                if row[j] % a[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue

        if a[t][t] < 0:
            # row negation keeps the row lattice and leaves v untouched
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    diag = [a[i][i] if i < limit else 0 for i in range(ncols)]
    for i in range(len(diag) - 1):
        if diag[i + 1] and diag[i] and diag[i + 1] % diag[i]:
            raise InternalConsistencyError("SNF divisibility chain violated")
    return diag, u, v


def _integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of {x : x @ A == 0} for the matrix with the given rows."""
    diag, u, _ = smith_normal_form(rows, ncols)
    rank = sum(1 for d in diag if d)
    return [u[i] for i in range(rank, len(rows))]


# ---------------------------------------------------------------------------
# Groups and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant-factor presentation Z/d_1 x ... x Z/d_k with d_i | d_{i+1}."""

    invariants: tuple[int, ...]

    def __post_init__(self) -> None:
        inv = tuple(int(d) for d in self.invariants)
        for d in inv:
            if d < 1:
                raise InputError(f"invariant {d} is not positive")
        for i in range(len(inv) - 1):
            if inv[i + 1] % inv[i]:
                raise InputError(f"invariants {inv} violate d_i | d_(i+1)")
        # canonical form: factors of 1 carry nothing and are dropped
        object.__setattr__(self, "invariants", tuple(d for d in inv if d > 1))

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariants:
            n *= d
        return n

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.invariants))

    def element(self, coords: Iterable[int]) -> "GroupElement":
        """Element with the given coordinates, reduced modulo the invariants."""
        c = tuple(int(x) for x in coords)
        if len(c) != len(self.invariants):
            raise InputError(
                f"expected {len(self.invariants)} coordinates, got {len(c)}"
            )
        return GroupElement(self, tuple(x % d for x, d in zip(c, self.invariants)))

    def elements(self) -> Iterator["GroupElement"]:
        """All elements in lexicographic coordinate order."""
        for coords in itertools.product(*(range(d) for d in self.invariants)):
            yield GroupElement(self, coords)

    def generators(self) -> list["GroupElement"]:
        """The k standard generators (unit coordinate vectors)."""
        k = len(self.invariants)
        return [
            GroupElement(self, tuple(int(i == j) for j in range(k))) for i in range(k)
        ]

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.invariants)})"


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        inv = self.group.invariants
        if len(self.coords) != len(inv):
            raise InputError("coordinate length does not match the group rank")
        for c, d in zip(self.coords, inv):
            if not 0 <= c < d:
                raise InputError(f"coordinate {c} out of range for invariant {d}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return op_mul(self, other)

    def inverse(self) -> "GroupElement":
        return op_inv(self)

    def __pow__(self, e: int) -> "GroupElement":
        return op_pow(self, e)

    @property
    def order(self) -> int:
        return lcm(1, *(d // gcd(d, c) for c, d in zip(self.coords, self.group.invariants)))

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __repr__(self) -> str:
        return f"GroupElement{self.coords}"


def _same_group(g: GroupElement, h: GroupElement) -> FiniteAbelianGroup:
    if g.group != h.group:
        raise InputError(f"elements of mismatched groups: {g.group} vs {h.group}")
    return g.group


def op_mul(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group operation (coordinatewise addition modulo the invariants)."""
    grp = _same_group(g, h)
    return GroupElement(
        grp,
        tuple((x + y) % d for x, y, d in zip(g.coords, h.coords, grp.invariants)),
    )


def op_inv(g: GroupElement) -> GroupElement:
    return GroupElement(
        g.group, tuple((-x) % d for x, d in zip(g.coords, g.group.invariants))
    )


def op_pow(g: GroupElement, e: int) -> GroupElement:
    return GroupElement(
        g.group, tuple((x * e) % d for x, d in zip(g.coords, g.group.invariants))
    )


def group_from_relations(
    num_generators: int, relations: Sequence[Sequence[int]]
) -> tuple[FiniteAbelianGroup, list[GroupElement]]:
    """Quotient of Z^n by the row lattice of ``relations``, in invariant form.

    Returns the group together with the images of the n original generators.
    Raises :class:`PreconditionError`-flavoured :class:`InputError` when the
    quotient is infinite (relation lattice of rank < n).
    """
    if num_generators < 0:
        raise InputError("num_generators must be nonnegative")
    diag, _, v = smith_normal_form(relations, num_generators)
    if any(d == 0 for d in diag):
        raise InputError(
            "infinite quotient: relation lattice has rank "
            f"{sum(1 for d in diag if d)} < {num_generators}"
        )
    keep = [i for i, d in enumerate(diag) if d > 1]
    group = FiniteAbelianGroup(tuple(diag[i] for i in keep))
    images = [
        GroupElement(group, tuple(v[g][i] % diag[i] for i in keep))
        for g in range(num_generators)
    ]
    return group, images


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------

_MAX_SUBGROUP_ORDER = 10**6


class Subgroup:
    """A subgroup with an explicit sorted element list.

    Membership is a binary search over coordinate tuples.  The abstract
    invariant structure (needed for characters) is computed lazily and cached.
    """

    def __init__(
        self,
        ambient: FiniteAbelianGroup,
        elements: Sequence[GroupElement],
        generators: Sequence[GroupElement],
    ):
        self.ambient = ambient
        self.elements = tuple(sorted(elements, key=lambda g: g.coords))
        self.generators = tuple(generators)
        self._sorted_coords = [g.coords for g in self.elements]
        self._abstract: tuple[FiniteAbelianGroup, dict[tuple[int, ...], tuple[int, ...]]] | None = None
        self._reduced_gens: list[GroupElement] | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.ambient.order // self.order

    def __contains__(self, g: GroupElement) -> bool:
        if not isinstance(g, GroupElement) or g.group != self.ambient:
            return False
        i = bisect_left(self._sorted_coords, g.coords)
        return i < len(self._sorted_coords) and self._sorted_coords[i] == g.coords

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.ambient == other.ambient
            and self._sorted_coords == other._sorted_coords
        )

    def __hash__(self) -> int:
        return hash((self.ambient, tuple(self._sorted_coords)))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.ambient})"

    def reduced_generators(self) -> list[GroupElement]:
        """A small generating sublist of ``generators`` (greedy closure)."""
        if self._reduced_gens is None:
            kept: list[GroupElement] = []
            closure = {self.ambient.identity.coords}
            for g in self.generators:
                if g.coords in closure:
                    continue
                kept.append(g)
                closure = _close_under(self.ambient, closure, kept)
            self._reduced_gens = kept
        return self._reduced_gens

    def abstract_structure(
        self,
    ) -> tuple[FiniteAbelianGroup, dict[tuple[int, ...], tuple[int, ...]]]:
        """The subgroup as an abstract group, plus ambient-coords -> abstract-coords.

        The map is a group isomorphism onto the returned group; it is what
        lets characters of the subgroup be evaluated on ambient elements.
        """
        if self._abstract is not None:
            return self._abstract
        gens = self.reduced_generators()
        amb_inv = self.ambient.invariants
        k, r = len(amb_inv), len(gens)
        if r == 0:
            trivial = FiniteAbelianGroup(())
            self._abstract = (trivial, {self.ambient.identity.coords: ()})
            return self._abstract
        # relation lattice of the generator map Z^r -> ambient: project the
        # integer kernel of  (z, w) |-> M z + diag(d) w  onto the z block
        a_rows = [
            [(gens[j].coords[i] if j < r else amb_inv[i] * (j - r == i)) for j in range(r + k)]
            for i in range(k)
        ]
        transpose = [[a_rows[i][j] for i in range(k)] for j in range(r + k)]
        kernel = _integer_kernel(transpose, k)
        relations = [row[:r] for row in kernel]
        abstract, images = group_from_relations(r, relations)
        if abstract.order != self.order:
            raise InternalConsistencyError(
                f"subgroup presentation of order {abstract.order} != {self.order}"
            )
        # BFS over the closure, tracking abstract coordinates additively
        coords_map = {self.ambient.identity.coords: abstract.identity.coords}
        frontier = [self.ambient.identity]
        abs_of = {self.ambient.identity.coords: abstract.identity}
        while frontier:
            nxt = []
            for elem in frontier:
                for g, img in zip(gens, images):
                    prod = op_mul(elem, g)
                    if prod.coords not in coords_map:
                        a = op_mul(abs_of[elem.coords], img)
                        coords_map[prod.coords] = a.coords
                        abs_of[prod.coords] = a
                        nxt.append(prod)
            frontier = nxt
        if len(coords_map) != self.order:
            raise InternalConsistencyError("closure walk missed subgroup elements")
        self._abstract = (abstract, coords_map)
        return self._abstract


def _close_under(
    group: FiniteAbelianGroup,
    seed: set[tuple[int, ...]],
    gens: Sequence[GroupElement],
) -> set[tuple[int, ...]]:
    inv = group.invariants
    closure = set(seed)
    frontier = list(seed)
    while frontier:
        nxt = []
        for coords in frontier:
            for g in gens:
                prod = tuple((x + y) % d for x, y, d in zip(coords, g.coords, inv))
                if prod not in closure:
                    closure.add(prod)
                    nxt.append(prod)
                    if len(closure) > _MAX_SUBGROUP_ORDER:
                        raise InputError(
                            f"subgroup closure exceeds {_MAX_SUBGROUP_ORDER} elements"
                        )
        frontier = nxt
    return closure


def subgroup_generated(
    group: FiniteAbelianGroup, gens: Sequence[GroupElement]
) -> Subgroup:
    """Closure of ``gens`` inside ``group`` (empty list gives the trivial subgroup)."""
    for g in gens:
        if g.group != group:
            raise InputError("generator does not belong to the ambient group")
    closure = _close_under(group, {group.identity.coords}, list(gens))
    elements = [GroupElement(group, c) for c in closure]
    return Subgroup(group, elements, gens)


def full_subgroup(group: FiniteAbelianGroup) -> Subgroup:
    """The whole group, as a Subgroup (handy for Cayley graphs on all of G)."""
    return subgroup_generated(group, group.generators())


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------

class Character:
    """A character of a group or of a subgroup, with exact rational angles.

    ``angle(g)`` returns the fraction of a full turn in [0, 1); ``value(g)``
    is the corresponding unit complex number.  For subgroup characters the
    argument is an *ambient* element that must lie in the subgroup.
    """

    def __init__(
        self,
        domain: Union[FiniteAbelianGroup, Subgroup],
        invariants: tuple[int, ...],
        coords: tuple[int, ...],
    ):
        self.domain = domain
        self.invariants = invariants
        self.coords = coords

    @property
    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _domain_coords(self, g: GroupElement) -> tuple[int, ...]:
        if isinstance(self.domain, FiniteAbelianGroup):
            if g.group != self.domain:
                raise InputError("element does not belong to the character's group")
            return g.coords
        if g not in self.domain:
            raise InputError("element lies outside the character's subgroup")
        _, coords_map = self.domain.abstract_structure()
        return coords_map[g.coords]

    def angle(self, g: GroupElement) -> Fraction:
        """Exact angle at g, as a fraction of a full turn in [0, 1)."""
        c = self._domain_coords(g)
        total = Fraction(0)
        for x, y, d in zip(self.coords, c, self.invariants):
            total += Fraction(x * y, d)
        return total % 1

    def value(self, g: GroupElement) -> complex:
        return _cexp(2j * pi * float(self.angle(g)))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Character)
            and self.coords == other.coords
            and self.invariants == other.invariants
            and self.domain == other.domain
        )

    def __hash__(self) -> int:
        return hash((self.invariants, self.coords))

    def __repr__(self) -> str:
        return f"Character{self.coords}"


def _group_characters(group: FiniteAbelianGroup) -> Iterator[Character]:
    """All characters of the group, lexicographic by coordinate vector."""
    inv = group.invariants
    for coords in itertools.product(*(range(d) for d in inv)):
        yield Character(group, inv, coords)


def characters_of(subgroup: Subgroup) -> list[Character]:
    """All |H| characters of the subgroup, lexicographic in abstract coordinates."""
    abstract, _ = subgroup.abstract_structure()
    inv = abstract.invariants
    chars = [
        Character(subgroup, inv, coords)
        for coords in itertools.product(*(range(d) for d in inv))
    ]
    if len(chars) != subgroup.order:
        raise InternalConsistencyError("character count != subgroup order")
    return chars


def extend_character(chi: Character, group: FiniteAbelianGroup) -> Character:
    """Extend a subgroup character to the ambient group.

    Among all valid extensions, the one with the lexicographically smallest
    coordinate vector is returned (a fixed, deterministic choice).
    """
    if not isinstance(chi.domain, Subgroup):
        raise InputError("extend_character expects a subgroup character")
    sub = chi.domain
    if sub.ambient != group:
        raise InputError("subgroup does not sit inside the given group")
    gens = sub.reduced_generators()
    targets = [chi.angle(g) for g in gens]
    for cand in _group_characters(group):
        if all(cand.angle(g) == t for g, t in zip(gens, targets)):
            return cand
    raise InternalConsistencyError("no extension found; character machinery broken")


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

class Homomorphism:
    """Map between invariant-form groups, given by generator images."""

    def __init__(
        self,
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        images: Sequence[GroupElement],
    ):
        if len(images) != len(source.invariants):
            raise InputError(
                f"need {len(source.invariants)} images, got {len(images)}"
            )
        for d, img in zip(source.invariants, images):
            if img.group != target:
                raise InputError("image does not belong to the target group")
            if d % img.order:
                raise InputError(
                    f"image of order {img.order} breaks well-definedness for Z/{d}"
                )
        self.source = source
        self.target = target
        self.images = tuple(images)

    def __call__(self, g: GroupElement) -> GroupElement:
        if g.group != self.source:
            raise InputError("argument does not belong to the source group")
        out = self.target.identity
        for c, img in zip(g.coords, self.images):
            out = op_mul(out, op_pow(img, c))
        return out

    def __repr__(self) -> str:
        return f"Homomorphism({self.source} -> {self.target})"


def hom_kernel_and_index(f: Homomorphism) -> tuple[Subgroup, int]:
    """Kernel of f (as a Subgroup of the source) and the index of its image."""
    image = subgroup_generated(f.target, list(f.images))
    index = f.target.order // image.order
    kernel_elems = [g for g in f.source.elements() if f(g).is_identity()]
    kernel = Subgroup(f.source, kernel_elems, kernel_elems)
    if kernel.order * image.order != f.source.order:
        raise InternalConsistencyError("first isomorphism theorem violated")
    return kernel, index


# ---------------------------------------------------------------------------
# Character filter
# ---------------------------------------------------------------------------

def filter_sum_check(
    group: FiniteAbelianGroup, subgroup: Subgroup, g: GroupElement
) -> int:
    """Sum of quotient-character values at g: [G:H] if g in H, else 0.

    The sum is evaluated in floating complex arithmetic and rounded, as a
    self-test of the character machinery; a nonreal or nonintegral result
    raises :class:`InternalConsistencyError`.
    """
    if subgroup.ambient != group:
        raise InputError("subgroup does not sit inside the given group")
    if g.group != group:
        raise InputError("element does not belong to the given group")
    gens = subgroup.reduced_generators()
    total = 0j
    matched = 0
    for chi in _group_characters(group):
        if all(chi.angle(h) == 0 for h in gens):
            total += chi.value(g)
            matched += 1
    if matched != subgroup.index:
        raise InternalConsistencyError(
            f"{matched} quotient characters found, expected index {subgroup.index}"
        )
    if abs(total.imag) > _IMAG_TOL:
        raise InternalConsistencyError(f"filter sum has imaginary part {total.imag}")
    nearest = round(total.real)
    if abs(total.real - nearest) > _IMAG_TOL:
        raise InternalConsistencyError(f"filter sum {total.real} is not integral")
    return nearest


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

@dataclass
class GroupFile:
    group: FiniteAbelianGroup
    subgroups: dict[str, Subgroup]
    homs: dict[str, Homomorphism]


def _parse_vector(token: str, rank: int, lineno: int) -> tuple[int, ...]:
    parts = token.split(",") if token else []
    if token == "" and rank == 0:
        parts = []
    try:
        coords = tuple(int(p) for p in parts)
    except ValueError:
        raise GroupFileError(lineno, f"bad coordinate vector {token!r}") from None
    if len(coords) != rank:
        raise GroupFileError(
            lineno, f"vector {token!r} has {len(coords)} coordinates, expected {rank}"
        )
    return coords


def parse_group_text(text: str) -> GroupFile:
    group: FiniteAbelianGroup | None = None
    subgroups: dict[str, Subgroup] = {}
    homs: dict[str, Homomorphism] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if group is None:
            if not line.startswith("invariants:"):
                raise GroupFileError(lineno, "first line must be 'invariants: ...'")
            body = line[len("invariants:"):].split()
            try:
                inv = [int(x) for x in body]
            except ValueError:
                raise GroupFileError(lineno, f"bad invariant list {body}") from None
            try:
                group = FiniteAbelianGroup(tuple(inv))
            except InputError as e:
                raise GroupFileError(lineno, str(e)) from None
            continue
        if line.startswith("subgroup "):
            head, _, body = line.partition(":")
            if not _:
                raise GroupFileError(lineno, "subgroup line needs ':'")
            name = head[len("subgroup "):].strip()
            if not name:
                raise GroupFileError(lineno, "subgroup needs a name")
            if name in subgroups:
                raise GroupFileError(lineno, f"duplicate subgroup {name!r}")
            rank = len(group.invariants)
            try:
                gens = [
                    group.element(_parse_vector(tok, rank, lineno))
                    for tok in body.split()
                ]
            except InputError as e:
                raise GroupFileError(lineno, str(e)) from None
            subgroups[name] = subgroup_generated(group, gens)
            continue
        if line.startswith("hom "):
            head, _, body = line.partition(":")
            if not _:
                raise GroupFileError(lineno, "hom line needs ':'")
            sig = head[len("hom "):]
            name, arrow, target_part = sig.partition("->")
            if not arrow:
                raise GroupFileError(lineno, "hom line needs '-> target invariants'")
            name = name.strip()
            if not name:
                raise GroupFileError(lineno, "hom needs a name")
            if name in homs:
                raise GroupFileError(lineno, f"duplicate hom {name!r}")
            try:
                target_inv = [int(x) for x in target_part.split()]
            except ValueError:
                raise GroupFileError(
                    lineno, f"bad target invariants {target_part!r}"
                ) from None
            try:
                target = FiniteAbelianGroup(tuple(target_inv))
            except InputError as e:
                raise GroupFileError(lineno, str(e)) from None
            toks = body.split()
            if len(toks) != len(group.invariants):
                raise GroupFileError(
                    lineno,
                    f"hom needs {len(group.invariants)} image vectors, got {len(toks)}",
                )
            try:
                images = [
                    target.element(_parse_vector(tok, len(target.invariants), lineno))
                    for tok in toks
                ]
                homs[name] = Homomorphism(group, target, images)
            except InputError as e:
                raise GroupFileError(lineno, str(e)) from None
            continue
        raise GroupFileError(lineno, f"unrecognized line {line!r}")
    if group is None:
        raise GroupFileError(1, "empty file: missing 'invariants:' line")
    return GroupFile(group, subgroups, homs)


def load_group_file(path: str) -> GroupFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_group_text(fh.read())
