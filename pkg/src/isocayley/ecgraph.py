"""Ordinary elliptic-curve isogeny graphs over small prime fields.

Everything here is desk scale on purpose: point counts are naive O(p)
Legendre sums, kernels come from factoring division polynomials, and the
codomain of every computed isogeny is re-counted as a consistency check.
Vertices are j-invariants; for each j the unique twist with Frobenius
trace exactly +t is the working model.  Only fundamental Frobenius
discriminants t^2 - 4p are accepted, so the whole class sits at the
maximal order and every computed isogeny is horizontal.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, replace
from math import gcd, isqrt

import numpy as np

from . import fppoly as fp
from .errors import InputError, InternalConsistencyError, PreconditionError
from .ntheory import (
    factorize,
    fundamental_discriminant,
    is_prime,
    kronecker,
    sqrt_mod_prime,
)

__all__ = [
    "FIELD_CAP",
    "Curve",
    "curve",
    "point_count",
    "curve_with_j",
    "curves_from_csv",
    "enumerate_isogeny_class",
    "division_polys",
    "IsogenyEdge",
    "rational_l_isogenies",
    "velu_codomain",
    "isogeny_eval",
    "IsogenyGraph",
    "build_isogeny_graph",
    "ComparisonReport",
    "compare_to_cayley",
    "comparison_to_json",
    "ec_add",
    "ec_neg",
    "ec_mul",
    "is_on_curve",
    "transfer_dlp",
    "edges_along",
    "run_dlp_demo",
]

FIELD_CAP = 10**4


def _check_field(p: int) -> None:
    if p > FIELD_CAP:
        raise PreconditionError(f"p = {p} exceeds the naive-counting cap {FIELD_CAP}")
    if p < 3 or not is_prime(p) or p == 2:
        raise InputError(f"p = {p} is not an odd prime")


@functools.lru_cache(maxsize=16)
def _square_table(p: int) -> np.ndarray:
    xs = np.arange(p, dtype=np.int64)
    table = np.zeros(p, dtype=bool)
    table[(xs * xs) % p] = True
    return table


def _count(p: int, a: int, b: int) -> tuple[int, int]:
    xs = np.arange(p, dtype=np.int64)
    rhs = ((xs * xs % p) * xs + a * xs + b) % p
    sq = _square_table(p)
    chi = np.where(rhs == 0, 0, np.where(sq[rhs], 1, -1))
    order = int(p + 1 + chi.sum())
    t = p + 1 - order
    if t * t > 4 * p:
        raise InternalConsistencyError(f"trace {t} violates the Hasse bound at p = {p}")
    return order, t


def _j_invariant(p: int, a: int, b: int) -> int:
    num = 4 * pow(a, 3, p) % p
    den = (num + 27 * b * b) % p
    return 1728 * num * pow(den, -1, p) % p


@dataclass(frozen=True)
class Curve:
    """Short Weierstrass model y^2 = x^3 + ax + b over F_p."""

    p: int
    a: int
    b: int
    j: int
    t: int

    @property
    def ordinary(self) -> bool:
        return self.t % self.p != 0

    @property
    def order(self) -> int:
        return self.p + 1 - self.t

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Curve(p={self.p}, a={self.a}, b={self.b}, j={self.j}, t={self.t})"


def curve(p: int, a: int, b: int) -> Curve:
    _check_field(p)
    a, b = a % p, b % p
    if (4 * pow(a, 3, p) + 27 * b * b) % p == 0:
        raise InputError(f"singular model a = {a}, b = {b} over F_{p}")
    _, t = _count(p, a, b)
    return Curve(p, a, b, _j_invariant(p, a, b), t)


def point_count(c: Curve) -> tuple[int, int]:
    """Recount |E(F_p)| and the trace directly from the model."""
    return _count(c.p, c.a, c.b)


def curve_with_j(p: int, j: int) -> tuple[int, int]:
    """Some model (a, b) with the requested j-invariant."""
    j %= p
    if j == 0:
        return 0, 1
    if j == 1728 % p:
        return 1, 0
    k = j * pow((1728 - j) % p, -1, p) % p
    return 3 * k % p, 2 * k % p


def _non_residue(p: int) -> int:
    for n in range(2, p):
        if kronecker(n, p) == -1:
            return n
    raise InternalConsistencyError(f"no quadratic non-residue found modulo {p}")


def _twist_with_trace(p: int, j: int, t: int) -> Curve | None:
    base = curve(p, *curve_with_j(p, j))
    if base.t == t:
        return base
    if base.t == -t and t != 0:
        n = _non_residue(p)
        return curve(p, base.a * n * n % p, base.b * pow(n, 3, p) % p)
    if j % p == 0 or j % p == 1728 % p:
        # quartic/sextic twist families: scan the whole fiber
        for c in range(1, p):
            cand = curve(p, c if j % p == 1728 % p else 0, 0 if j % p == 1728 % p else c)
            if cand.t == t:
                return cand
    return None


def curves_from_csv(text: str) -> list[Curve]:
    """Parse `p,a,b` lines (blank lines, comments, and a header row allowed)."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.replace(" ", "") == "p,a,b":
            continue
        parts = [part.strip() for part in line.split(",")]
        if len(parts) != 3:
            raise InputError(f"line {lineno}: expected p,a,b but got {raw!r}")
        try:
            p, a, b = (int(part) for part in parts)
        except ValueError:
            raise InputError(f"line {lineno}: non-integer field in {raw!r}") from None
        out.append(curve(p, a, b))
    return out


def _frobenius_disc(p: int, t: int) -> int:
    if t % p == 0:
        raise PreconditionError(
            f"t = {t} vanishes mod p = {p}: supersingular classes are out of scope"
        )
    d = t * t - 4 * p
    if d >= 0:
        raise PreconditionError(f"t = {t} is outside the Hasse range for p = {p}")
    _, conductor = fundamental_discriminant(d)
    if conductor != 1:
        raise PreconditionError(
            f"Frobenius discriminant {d} has conductor {conductor}; only fundamental "
            f"discriminants are supported (vertical structure is out of scope)"
        )
    return d


def enumerate_isogeny_class(p: int, t: int) -> list[int]:
    """All j-invariants over F_p admitting a twist with trace exactly t."""
    _check_field(p)
    if p < 5:
        raise InputError("isogeny classes need p >= 5")
    _frobenius_disc(p, t)
    return [j for j in range(p) if _twist_with_trace(p, j, t) is not None]


def _cube(u, p):
    return fp.poly_mul(fp.poly_mul(u, u, p), u, p)


def division_polys(p: int, a: int, b: int, upto: int) -> list[np.ndarray]:
    """w[0..upto] with psi_m = w_m for odd m and psi_m = y*w_m for even m."""
    if upto < 4:
        upto = 4
    w: list[np.ndarray] = [fp.poly([], p) for _ in range(upto + 1)]
    w[1] = fp.ONE
    w[2] = fp.poly([2], p)
    w[3] = fp.poly([-a * a, 12 * b, 6 * a, 0, 3], p)
    w[4] = fp.poly(
        [
            -4 * (8 * b * b + a**3),
            -16 * a * b,
            -20 * a * a,
            80 * b,
            20 * a,
            0,
            4,
        ],
        p,
    )
    f_cubic = fp.poly([b, a, 0, 1], p)
    f_sq = fp.poly_mul(f_cubic, f_cubic, p)
    inv2 = pow(2, -1, p)
    for n in range(5, upto + 1):
        m = n // 2
        if n % 2:
            left = fp.poly_mul(w[m + 2], _cube(w[m], p), p)
            right = fp.poly_mul(w[m - 1], _cube(w[m + 1], p), p)
            if m % 2 == 0:
                w[n] = fp.poly_sub(fp.poly_mul(f_sq, left, p), right, p)
            else:
                w[n] = fp.poly_sub(left, fp.poly_mul(f_sq, right, p), p)
        else:
            inner = fp.poly_sub(
                fp.poly_mul(w[m + 2], fp.poly_mul(w[m - 1], w[m - 1], p), p),
                fp.poly_mul(w[m - 2], fp.poly_mul(w[m + 1], w[m + 1], p), p),
                p,
            )
            w[n] = fp.poly_scale(fp.poly_mul(w[m], inner, p), inv2, p)
    return w


@dataclass(frozen=True)
class IsogenyEdge:
    """One rational cyclic ell-isogeny, with enough data to push points."""

    p: int
    ell: int
    source_j: int
    target_j: int
    kernel: tuple[int, ...]  # monic, degree (ell-1)/2, lowest degree first
    eigenvalue: int  # Frobenius eigenvalue on the kernel, mod ell
    source_model: tuple[int, int]
    velu_model: tuple[int, int]
    target_model: tuple[int, int]
    scale: int  # u with (x, y) -> (u^2 x, u^3 y) : velu model -> target model


class _Fq:
    """F_p[x] modulo a fixed irreducible g: just enough field arithmetic."""

    def __init__(self, g: np.ndarray, p: int):
        self.g = g
        self.p = p
        self.alpha = fp.poly_mod(fp.X, g, p)
        self.one = fp.ONE

    def red(self, u):
        return fp.poly_mod(u, self.g, self.p)

    def mul(self, u, v):
        return fp.poly_mod(fp.poly_mul(u, v, self.p), self.g, self.p)

    def inv(self, u):
        gg, s, _ = fp.poly_xgcd(u, self.g, self.p)
        if fp.degree(gg) != 0:
            raise InternalConsistencyError("non-invertible element in F_q arithmetic")
        return self.red(fp.poly_scale(s, pow(int(gg[0]), -1, self.p), self.p))

    def pow(self, u, e):
        return fp.poly_powmod(u, e, self.g, self.p)

    def neg(self, u):
        return fp.poly_scale(u, -1, self.p)

    def eq(self, u, v):
        return np.array_equal(fp.trim(u), fp.trim(v))


def _x_of_multiple(field: _Fq, wa: list[np.ndarray], f_alpha, m: int):
    """x([m]P) where x(P) is the residue class alpha, as an F_q element."""
    if m == 1:
        return field.alpha
    num = field.mul(wa[m - 1], wa[m + 1])
    den = field.mul(wa[m], wa[m])
    if m % 2:
        num = field.mul(f_alpha, num)
    else:
        den = field.mul(f_alpha, den)
    return fp.poly_sub(field.alpha, field.mul(num, field.inv(den)), field.p)


def _y_factor_of_multiple(field: _Fq, wa: list[np.ndarray], f_alpha, m: int):
    """G_m with y([m]P) = y * G_m, as an F_q element."""
    if m == 1:
        return field.one
    den = field.mul(wa[m], wa[m])
    den = fp.poly_scale(field.mul(den, den), 2, field.p)
    if m % 2 == 0:
        den = field.mul(den, field.mul(f_alpha, f_alpha))
    return field.mul(wa[2 * m], field.inv(den))


def _eigenvalue_of_kernel(field: _Fq, wa, f_alpha, ell: int, p: int, t: int) -> int:
    roots = [z for z in range(1, ell) if (z * z - t * z + p) % ell == 0]
    if not roots:
        raise InternalConsistencyError(
            f"rational kernel found although x^2 - {t}x + {p} has no root mod {ell}"
        )
    frob_x = field.pow(field.alpha, p)
    frob_y = field.pow(f_alpha, (p - 1) // 2)
    for lam in roots:
        m = min(lam, ell - lam)
        if not field.eq(frob_x, _x_of_multiple(field, wa, f_alpha, m)):
            continue
        g_m = _y_factor_of_multiple(field, wa, f_alpha, m)
        if lam != m:
            g_m = field.neg(g_m)
        if field.eq(frob_y, g_m):
            return lam
    raise InternalConsistencyError("no Frobenius eigenvalue matched the kernel")


def _kernel_from_factor(field: _Fq, wa, f_alpha, ell: int) -> np.ndarray | None:
    """The kernel polynomial over F_p if the subgroup through alpha is rational."""
    d = (ell - 1) // 2
    p = field.p
    coeffs = [field.one]  # monic polynomial over F_q, built up linear factor by factor
    for m in range(1, d + 1):
        xi = _x_of_multiple(field, wa, f_alpha, m)
        nxt = [fp.poly([], p) for _ in range(len(coeffs) + 1)]
        for i, c in enumerate(coeffs):
            nxt[i + 1] = fp.poly_add(nxt[i + 1], c, p)
            nxt[i] = fp.poly_sub(nxt[i], field.mul(xi, c), p)
        coeffs = nxt
    flat = []
    for c in coeffs:
        if fp.degree(c) > 0:
            return None
        flat.append(int(c[0]) if len(c) else 0)
    return fp.poly(flat, p)


def velu_codomain(c: Curve, kernel: np.ndarray) -> tuple[int, int]:
    """Codomain model of the isogeny with the given odd kernel polynomial."""
    p = c.p
    d = fp.degree(kernel)
    e1 = (-int(kernel[d - 1])) % p if d >= 1 else 0
    e2 = int(kernel[d - 2]) % p if d >= 2 else 0
    e3 = (-int(kernel[d - 3])) % p if d >= 3 else 0
    p1 = e1
    p2 = (e1 * p1 - 2 * e2) % p
    p3 = (e1 * p2 - e2 * p1 + 3 * e3) % p
    t_tot = (6 * p2 + 2 * c.a * d) % p
    w_tot = (10 * p3 + 6 * c.a * p1 + 4 * c.b * d) % p
    return (c.a - 5 * t_tot) % p, (c.b - 7 * w_tot) % p


def _splitter_seed(p: int, a: int, b: int, ell: int) -> int:
    return ((p * FIELD_CAP + a) * FIELD_CAP + b) * 10**6 + ell


def rational_l_isogenies(c: Curve, ell: int) -> list[IsogenyEdge]:
    """All F_p-rational cyclic ell-isogenies from c (0, 1, or 2 of them)."""
    if ell == 2 or not is_prime(ell):
        raise PreconditionError(f"degree {ell} is not an odd prime")
    if ell == c.p:
        raise PreconditionError(f"degree {ell} equals the field characteristic")
    if not c.ordinary:
        raise PreconditionError("supersingular curves are out of scope")
    p, a, b, t = c.p, c.a, c.b, c.t
    disc = t * t - 4 * p
    d = (ell - 1) // 2
    w = division_polys(p, a, b, max(ell, 2 * d))
    psi = fp.make_monic(w[ell], p)
    factors = fp.low_degree_factors(psi, p, d, _splitter_seed(p, a, b, ell))
    edges = []
    seen_kernels: set[tuple[int, ...]] = set()
    for g in factors:
        if any(
            len(fp.poly_mod(fp.poly(known, p), g, p)) == 0 for known in seen_kernels
        ):
            continue  # factor already accounted for by a found kernel
        field = _Fq(g, p)
        f_alpha = field.red(fp.poly([b, a, 0, 1], p))
        wa = [field.red(poly) for poly in w]
        kernel = _kernel_from_factor(field, wa, f_alpha, ell)
        if kernel is None:
            continue
        seen_kernels.add(tuple(int(x) for x in kernel))
        lam = _eigenvalue_of_kernel(field, wa, f_alpha, ell, p, t)
        va, vb = velu_codomain(c, kernel)
        _, vt = _count(p, va, vb)
        if vt != t:
            raise InternalConsistencyError(
                f"Velu codomain recounts to trace {vt}, expected {t}"
            )
        edges.append(
            IsogenyEdge(
                p=p,
                ell=ell,
                source_j=c.j,
                target_j=_j_invariant(p, va, vb),
                kernel=tuple(int(x) for x in kernel),
                eigenvalue=lam,
                source_model=(a, b),
                velu_model=(va, vb),
                target_model=(va, vb),
                scale=1,
            )
        )
    expected = 1 + kronecker(disc, ell)
    if len(edges) != expected:
        raise InternalConsistencyError(
            f"found {len(edges)} rational {ell}-kernels, splitting predicts {expected}"
        )
    edges.sort(key=lambda e: (e.target_j, e.kernel))
    return edges


def _model_scale(p: int, src: tuple[int, int], dst: tuple[int, int]) -> int:
    """u with (u^4 src_a, u^6 src_b) = dst, i.e. the twist-free isomorphism."""
    sa, sb = src
    da, db = dst
    if sa and sb and da and db:
        u2 = db * sa % p * pow(sb * da % p, -1, p) % p
        u = sqrt_mod_prime(u2, p)
        if u is not None and (pow(u, 4, p) * sa - da) % p == 0:
            if (pow(u, 6, p) * sb - db) % p == 0:
                return u
    for u in range(1, p):
        if (pow(u, 4, p) * sa - da) % p == 0 and (pow(u, 6, p) * sb - db) % p == 0:
            return u
    raise InternalConsistencyError(
        f"models {src} and {dst} over F_{p} are not isomorphic"
    )


def _kernel_poly(edge: IsogenyEdge) -> np.ndarray:
    return fp.poly(edge.kernel, edge.p)


def isogeny_eval(edge: IsogenyEdge, point):
    """Image of a point under the edge's isogeny, landing on target_model."""
    if point is None:
        return None
    p = edge.p
    a, b = edge.source_model
    x0, y0 = point[0] % p, point[1] % p
    if (y0 * y0 - (pow(x0, 3, p) + a * x0 + b)) % p:
        raise InputError(f"({x0}, {y0}) is not on the source curve")
    h = _kernel_poly(edge)
    if fp.poly_eval(h, x0, p) == 0:
        return None
    hp = fp.poly_deriv(h, p)
    f_t = fp.poly([2 * a, 0, 6], p)
    f_u = fp.poly([4 * b, 4 * a, 0, 4], p)
    t_poly = fp.poly_mod(fp.poly_mul(f_t, hp, p), h, p)
    u_poly = fp.poly_mod(fp.poly_mul(f_u, hp, p), h, p)
    h_sq = fp.poly_mul(h, h, p)
    num = fp.poly_add(
        fp.poly_add(
            fp.poly_mul(fp.X, h_sq, p),
            fp.poly_mul(t_poly, h, p),
            p,
        ),
        fp.poly_sub(
            fp.poly_mul(u_poly, hp, p),
            fp.poly_mul(fp.poly_deriv(u_poly, p), h, p),
            p,
        ),
        p,
    )
    hv = fp.poly_eval(h, x0, p)
    nv = fp.poly_eval(num, x0, p)
    x1 = nv * pow(hv * hv % p, -1, p) % p
    dnum = (
        fp.poly_eval(fp.poly_deriv(num, p), x0, p) * hv
        - 2 * nv * fp.poly_eval(hp, x0, p)
    ) % p
    y1 = y0 * dnum % p * pow(pow(hv, 3, p), -1, p) % p
    u = edge.scale
    x1, y1 = pow(u, 2, p) * x1 % p, pow(u, 3, p) * y1 % p
    ta, tb = edge.target_model
    if (y1 * y1 - (pow(x1, 3, p) + ta * x1 + tb)) % p:
        raise InternalConsistencyError("isogeny image left the target curve")
    return (x1, y1)


class IsogenyGraph:
    """The ell-isogeny multigraph of one ordinary class, walk-ready.

    Exposes the same interface the random-walk and path-finding code uses
    for Cayley graphs: `vertices`, `vertex_index`, `step_table`,
    `inverse_slot`, `generators`.  Slots are (ell, Frobenius eigenvalue)
    pairs, which is exactly the ideal-class action, so stepping is globally
    consistent and a slot's inverse is the conjugate eigenvalue.
    """

    def __init__(self, p, t, disc, vertices, curves, edges, ells):
        self.p = p
        self.t = t
        self.disc = disc
        self.vertices = list(vertices)
        self.curves = dict(curves)
        self.edges = list(edges)
        self.ells = tuple(sorted(ells))
        self._index = {j: i for i, j in enumerate(self.vertices)}
        self._edge_by = {}
        for e in self.edges:
            key = (e.source_j, e.ell, e.eigenvalue)
            if key in self._edge_by:
                raise InternalConsistencyError(f"duplicate edge slot {key}")
            self._edge_by[key] = e
        self.generators = self._make_slots()
        self.step_table = self._make_table()
        self.inverse_slot = self._make_inverses()

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return len(self.generators)

    def vertex_index(self, j) -> int:
        try:
            return self._index[j]
        except KeyError:
            raise InputError(f"j = {j} is not a vertex of this graph") from None

    def edge_at(self, j: int, ell: int, eigenvalue: int) -> IsogenyEdge:
        try:
            return self._edge_by[(j, ell, eigenvalue)]
        except KeyError:
            raise InputError(
                f"no ({ell}, {eigenvalue}) edge at vertex j = {j}"
            ) from None

    def _make_slots(self):
        slots = []
        for ell in self.ells:
            lams = sorted({e.eigenvalue for e in self.edges if e.ell == ell})
            if not lams:
                continue  # inert prime: contributes nothing
            if len(lams) == 1:
                slots.append((str(ell), (ell, lams[0])))
            else:
                for lam in lams:
                    slots.append((f"{ell}:{lam}", (ell, lam)))
        return tuple(slots)

    def _make_table(self):
        table = np.zeros((len(self.generators), self.order), dtype=np.int64)
        for s, (_, (ell, lam)) in enumerate(self.generators):
            for i, j in enumerate(self.vertices):
                table[s, i] = self._index[self.edge_at(j, ell, lam).target_j]
        return table

    def _make_inverses(self):
        inv = np.zeros(len(self.generators), dtype=np.int64)
        slot_of = {key: s for s, (_, key) in enumerate(self.generators)}
        for s, (_, (ell, lam)) in enumerate(self.generators):
            partner = (ell, (self.t - lam) % ell)
            if partner not in slot_of:
                partner = (ell, lam)  # ramified: self-paired
            inv[s] = slot_of[partner]
        for s in range(len(self.generators)):
            if inv[inv[s]] != s:
                raise InternalConsistencyError("eigenvalue slots do not pair up")
        # stepping by a slot and then its partner must return home
        for s in range(len(self.generators)):
            back = self.step_table[inv[s], self.step_table[s]]
            if not np.array_equal(back, np.arange(self.order)):
                raise InternalConsistencyError("dual edges do not invert each step")
        return inv

    def adjacency(self) -> np.ndarray:
        mat = np.zeros((self.order, self.order), dtype=np.int64)
        for e in self.edges:
            mat[self._index[e.source_j], self._index[e.target_j]] += 1
        return mat


def build_isogeny_graph(p: int, t: int, ells) -> IsogenyGraph:
    ells = tuple(sorted(set(int(x) for x in ells)))
    disc = _frobenius_disc(p, t)
    js = enumerate_isogeny_class(p, t)
    if not js:
        raise InternalConsistencyError(f"empty isogeny class for p = {p}, t = {t}")
    curves = {}
    for j in js:
        c = _twist_with_trace(p, j, t)
        if c is None or c.j != j:
            raise InternalConsistencyError(f"lost the trace-{t} twist at j = {j}")
        curves[j] = c
    edges = []
    for j in js:
        for ell in ells:
            for e in rational_l_isogenies(curves[j], ell):
                if e.target_j not in curves:
                    raise InternalConsistencyError(
                        f"edge from j = {j} leaves the class (target {e.target_j})"
                    )
                target = curves[e.target_j]
                u = _model_scale(p, e.velu_model, (target.a, target.b))
                edges.append(
                    replace(e, target_model=(target.a, target.b), scale=u)
                )
    directed = {}
    for e in edges:
        key = (e.source_j, e.target_j, e.ell)
        directed[key] = directed.get(key, 0) + 1
    for (src, tgt, ell), count in directed.items():
        if directed.get((tgt, src, ell), 0) != count:
            raise InternalConsistencyError(
                f"missing dual of the {ell}-isogeny {src} -> {tgt}"
            )
    edges.sort(key=lambda e: (e.source_j, e.ell, e.target_j, e.kernel))
    return IsogenyGraph(p, t, disc, js, curves, edges, ells)


@dataclass(frozen=True)
class ComparisonReport:
    vertices_ok: bool
    spectrum_ok: bool
    degrees_ok: bool
    verdict: str
    failed: tuple[str, ...]
    isogeny_order: int
    cayley_order: int
    spectrum_gap: float


def compare_to_cayley(graph: IsogenyGraph, tol: float = 1e-6) -> ComparisonReport:
    """Check the isogeny graph against Cay(Cl(D), prime forms above L).

    Three checks: equal vertex counts, equal sorted adjacency spectra
    (within tol), and the per-ell local degree law 1 + Kronecker(D, ell)
    together with dual-edge symmetry.
    """
    from .abelian import full_subgroup
    from .cayley import build as build_cayley
    from .quadform import Discriminant, class_group, prime_form

    disc = Discriminant.of(graph.disc)
    cl = class_group(disc)
    gens = []
    for ell in graph.ells:
        found = prime_form(disc, ell)
        if found is None:
            continue
        cls_a, cls_b, b = found
        if graph.disc % ell == 0:
            gens.append((str(ell), cl.element_of(cls_a)))
        else:
            gens.append((f"{ell}:{b}", cl.element_of(cls_a)))
            gens.append((f"{ell}:{2 * ell - b}", cl.element_of(cls_b)))
    cayley_order = cl.order
    if gens:
        cg = build_cayley(full_subgroup(cl.group), gens)
        cayley_spec = np.sort(np.linalg.eigvalsh(cg.adjacency().astype(float)))
    else:
        cayley_spec = np.zeros(cayley_order)

    failed = []
    vertices_ok = graph.order == cayley_order
    if not vertices_ok:
        failed.append("vertices")

    mat = graph.adjacency()
    symmetric = bool((mat == mat.T).all())
    iso_spec = np.sort(np.linalg.eigvalsh(((mat + mat.T) / 2).astype(float)))
    if vertices_ok:
        gap = float(np.max(np.abs(iso_spec - cayley_spec))) if graph.order else 0.0
    else:
        gap = float("inf")
    spectrum_ok = gap <= tol
    if not spectrum_ok:
        failed.append("spectrum")

    degrees_ok = symmetric
    for i, j in enumerate(graph.vertices):
        for ell in graph.ells:
            want = 1 + kronecker(graph.disc, ell)
            got = sum(1 for e in graph.edges if e.source_j == j and e.ell == ell)
            if got != want:
                degrees_ok = False
    if not degrees_ok:
        failed.append("degrees")

    verdict = "PASS" if not failed else "FAIL"
    return ComparisonReport(
        vertices_ok=vertices_ok,
        spectrum_ok=spectrum_ok,
        degrees_ok=degrees_ok,
        verdict=verdict,
        failed=tuple(failed),
        isogeny_order=graph.order,
        cayley_order=cayley_order,
        spectrum_gap=gap,
    )


def comparison_to_json(report: ComparisonReport) -> dict:
    return {
        "verdict": report.verdict,
        "failed_checks": list(report.failed),
        "vertices": {
            "ok": report.vertices_ok,
            "isogeny": report.isogeny_order,
            "cayley": report.cayley_order,
        },
        "spectrum": {"ok": report.spectrum_ok, "max_gap": report.spectrum_gap},
        "degrees": {"ok": report.degrees_ok},
    }


# ---------------------------------------------------------------------------
# affine point arithmetic and the DLP transfer


def is_on_curve(point, a: int, b: int, p: int) -> bool:
    if point is None:
        return True
    x, y = point
    return (y * y - (pow(x, 3, p) + a * x + b)) % p == 0


def ec_neg(point, p: int):
    if point is None:
        return None
    return (point[0], (-point[1]) % p)


def ec_add(q1, q2, a: int, p: int):
    if q1 is None:
        return q2
    if q2 is None:
        return q1
    x1, y1 = q1
    x2, y2 = q2
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if q1 == q2:
        lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def ec_mul(k: int, point, a: int, p: int):
    if k < 0:
        return ec_mul(-k, ec_neg(point, p), a, p)
    acc = None
    addend = point
    while k:
        if k & 1:
            acc = ec_add(acc, addend, a, p)
        addend = ec_add(addend, addend, a, p)
        k >>= 1
    return acc


def _bsgs(point_p, point_q, n: int, a: int, p: int):
    """r in [0, n) with Q = rP in the cyclic group generated by P, or None."""
    m = isqrt(n - 1) + 1
    baby = {}
    step = None
    for jj in range(m):
        baby.setdefault(step, jj)
        step = ec_add(step, point_p, a, p)
    giant = ec_neg(ec_mul(m, point_p, a, p), p)
    cur = point_q
    for i in range(m + 1):
        if cur in baby:
            r = (i * m + baby[cur]) % n
            if ec_mul(r, point_p, a, p) == point_q:
                return r
        cur = ec_add(cur, giant, a, p)
    return None


def transfer_dlp(path, point_p, point_q, n: int, source: Curve | None = None) -> int:
    """Push (P, Q = rP) through a chain of isogenies and read off r there.

    The degree of every edge must be coprime to n = ord(P); the recovered
    exponent is verified back on the source curve before being returned.
    """
    if n < 1:
        raise InputError(f"order n = {n} must be positive")
    if path:
        p = path[0].p
        a, b = path[0].source_model
    elif source is not None:
        p, a, b = source.p, source.a, source.b
    else:
        raise InputError("an empty path needs an explicit source curve")
    for e in path:
        if gcd(e.ell, n) != 1:
            raise PreconditionError(
                f"isogeny degree {e.ell} divides the point order {n}"
            )
    if not is_on_curve(point_p, a, b, p) or not is_on_curve(point_q, a, b, p):
        raise InputError("P and Q must lie on the source curve")
    cur_p, cur_q = point_p, point_q
    for e in path:
        cur_p = isogeny_eval(e, cur_p)
        cur_q = isogeny_eval(e, cur_q)
    if path:
        ta, _ = path[-1].target_model
    else:
        ta = a
    if cur_p is None:
        raise InputError("P died along the path; its order was not coprime after all")
    r = _bsgs(cur_p, cur_q, n, ta, p)
    if r is None:
        raise InputError("no discrete log found at the far end: inconsistent inputs")
    if ec_mul(r, point_p, a, p) != point_q:
        raise InternalConsistencyError("recovered exponent fails on the source curve")
    return r


def edges_along(graph: IsogenyGraph, cert) -> list[IsogenyEdge]:
    """Resolve a path certificate into the actual isogeny edges it crossed."""
    slot_of = {label: s for s, (label, _) in enumerate(graph.generators)}
    idx = graph.vertex_index(cert.start)
    out = []
    for step in cert.steps:
        try:
            s = slot_of[step.label]
        except KeyError:
            raise InputError(f"unknown step label {step.label!r}") from None
        if step.inverted:
            s = int(graph.inverse_slot[s])
        ell, lam = graph.generators[s][1]
        edge = graph.edge_at(graph.vertices[idx], ell, lam)
        out.append(edge)
        idx = graph.vertex_index(edge.target_j)
    if graph.vertices[idx] != cert.end:
        raise InternalConsistencyError("certificate does not replay to its endpoint")
    return out


def _random_point(c: Curve, rng) -> tuple[int, int]:
    p = c.p
    while True:
        x = int(rng.integers(0, p))
        rhs = (pow(x, 3, p) + c.a * x + c.b) % p
        y = sqrt_mod_prime(rhs, p)
        if y is None:
            continue
        if y and rng.integers(0, 2):
            y = p - y
        return (x, y)


def _point_of_prime_order(c: Curve, n: int, rng):
    cof = c.order // n
    for _ in range(256):
        pt = ec_mul(cof, _random_point(c, rng), c.a, c.p)
        if pt is not None:
            return pt
    raise InternalConsistencyError(f"no point of order {n} found on {c}")


def run_dlp_demo(
    p: int,
    t: int,
    ells,
    seed: int,
    planted: int | None = None,
    graph: IsogenyGraph | None = None,
) -> dict:
    """Plant Q = rP on one curve, walk to another, and recover r there."""
    from .pathfind import exhaustive_path, find_path

    if graph is None:
        graph = build_isogeny_graph(p, t, ells)
    elif (graph.p, graph.t) != (p, t):
        raise InputError("prebuilt graph does not match the requested (p, t)")
    rng = np.random.Generator(np.random.Philox(seed))
    if graph.degree == 0:
        raise PreconditionError(
            "the chosen primes give an edgeless graph; pick split primes"
        )
    if graph.order >= 2:
        pick = rng.choice(graph.order, size=2, replace=False)
        start, end = graph.vertices[int(pick[0])], graph.vertices[int(pick[1])]
    else:
        start = end = graph.vertices[0]
    if graph.order >= 9:
        cert, _stats = find_path(graph, start, end, seed)
        method = "random-walk"
    else:
        cert = exhaustive_path(graph, start, end)
        method = "exhaustive"
    path = edges_along(graph, cert)

    source = graph.curves[start]
    group_order = source.order
    choices = [q for q in sorted(factorize(group_order), reverse=True)
               if all(q != e for e in graph.ells)]
    if not choices:
        raise PreconditionError(
            f"every prime factor of |E(F_p)| = {group_order} occurs among the degrees"
        )
    n = choices[0]
    point_p = _point_of_prime_order(source, n, rng)
    r = int(rng.integers(0, n)) if planted is None else planted % n
    point_q = ec_mul(r, point_p, source.a, source.p)

    stages = []
    cur_p, cur_q, j_here = point_p, point_q, start
    stages.append({"j": j_here, "P": list(cur_p), "Q": list(cur_q) if cur_q else None})
    for e in path:
        cur_p = isogeny_eval(e, cur_p)
        cur_q = isogeny_eval(e, cur_q)
        j_here = e.target_j
        stages.append(
            {
                "j": j_here,
                "P": list(cur_p) if cur_p else None,
                "Q": list(cur_q) if cur_q else None,
            }
        )
    recovered = transfer_dlp(path, point_p, point_q, n, source=source)
    return {
        "p": p,
        "t": t,
        "L": list(graph.ells),
        "seed": seed,
        "discriminant": graph.disc,
        "class_number": graph.order,
        "start_j": start,
        "end_j": end,
        "method": method,
        "path": [[s.label, s.inverted] for s in cert.steps],
        "order": n,
        "planted_r": r,
        "stages": stages,
        "recovered_r": recovered,
        "verified": recovered == r,
    }
