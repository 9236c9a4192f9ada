"""Exact linear algebra over Q and Z.

Contents:

* Gaussian elimination: nullspaces, subspace projection (variable
  elimination);
* an exact rational phase-1 simplex with Bland's rule (no floating
  point, no epsilon anywhere);
* support computation for the nonnegative integer points of a rational
  subspace (one feasibility LP per coordinate; a rational point scales
  to an integer one by homogeneity);
* complete integer solution sets of A x = b via a column Hermite
  reduction with recorded transformation;
* small-scale integer feasibility with sign constraints, by
  branch-and-bound over the exact LP relaxation;
* finitely generated cones in Q^2: dimension of an intersection,
  interior vectors, separating functionals.

Everything operates on immutable inputs and returns fresh values; the
per-coordinate LPs of `support_nonneg` are independent and could run
concurrently, but are executed sequentially here.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Gaussian elimination


def _row_reduce(rows, ncols, pivot_order):
    """Row echelon reduction choosing pivot columns in the given order.

    Returns (reduced_rows, pivots) where pivots is a list of
    (row_index, col_index); each pivot entry is normalized to 1 and
    eliminated from every other row.
    """
    mat = [list(r) for r in rows]
    pivots = []
    used_rows = set()
    for col in pivot_order:
        pivot_row = None
        for i in range(len(mat)):
            if i not in used_rows and mat[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        inv = _ONE / mat[pivot_row][col]
        mat[pivot_row] = [x * inv for x in mat[pivot_row]]
        for i in range(len(mat)):
            if i != pivot_row and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[pivot_row])]
        used_rows.add(pivot_row)
        pivots.append((pivot_row, col))
    return mat, pivots


def nullspace(rows, ncols=None):
    """Basis of {x : row . x = 0 for all rows}, as a list of Fraction tuples."""
    rows = [tuple(Fraction(x) for x in r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required when there are no rows")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("inconsistent row lengths")
    mat, pivots = _row_reduce(rows, ncols, range(ncols))
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [_ZERO] * ncols
        vec[free] = _ONE
        for r, c in pivots:
            vec[c] = -mat[r][free]
        basis.append(tuple(vec))
    return basis


class LinearSubspace:
    """Q-linear subspace of Q^len(coords), given by homogeneous equations.

    `coords` are hashable names in a fixed order; `equations` are rows
    with row . x = 0.  A basis is computed on demand and cached.
    """

    __slots__ = ("coords", "equations", "_basis")

    def __init__(self, coords, equations=()):
        coords = tuple(coords)
        eqs = tuple(tuple(Fraction(x) for x in row) for row in equations)
        for row in eqs:
            if len(row) != len(coords):
                raise ValueError("equation length does not match coordinates")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "equations", eqs)
        object.__setattr__(self, "_basis", None)

    def __setattr__(self, name, value):
        raise AttributeError("LinearSubspace is immutable")

    def basis(self):
        if self._basis is None:
            object.__setattr__(
                self, "_basis", tuple(nullspace(self.equations, len(self.coords)))
            )
        return self._basis

    def dim(self) -> int:
        return len(self.basis())

    def contains(self, point) -> bool:
        point = [Fraction(x) for x in point]
        if len(point) != len(self.coords):
            raise ValueError("point has wrong length")
        return all(
            sum(a * x for a, x in zip(row, point)) == 0 for row in self.equations
        )

    def __repr__(self):
        return (
            f"<subspace of Q^{len(self.coords)}, {len(self.equations)} equations>"
        )


def eliminate(space: LinearSubspace, keep) -> LinearSubspace:
    """Exact projection of the subspace onto the `keep` coordinates.

    A vector over `keep` lies in the result iff it extends to a vector of
    the input space.  Implemented by Gaussian elimination pivoting on the
    dropped columns first: the rows left untouched then carry zero
    coefficients on every dropped column and are exactly the equations of
    the projection.
    """
    keep = list(keep)
    keep_set = set(keep)
    if not keep_set.issubset(space.coords):
        raise ValueError("keep must be a subset of the coordinates")
    index = {name: i for i, name in enumerate(space.coords)}
    keep_idx = [index[name] for name in keep]
    drop_idx = [i for i, name in enumerate(space.coords) if name not in keep_set]

    mat, pivots = _row_reduce(space.equations, len(space.coords), drop_idx)
    pivot_rows = {r for r, _ in pivots}
    projected = []
    for i, row in enumerate(mat):
        if i in pivot_rows:
            continue
        new_row = tuple(row[j] for j in keep_idx)
        if any(new_row):
            projected.append(new_row)
    # normalize the output representation
    reduced, pivs = _row_reduce(projected, len(keep), range(len(keep)))
    rows = [tuple(reduced[r]) for r, _ in pivs]
    return LinearSubspace(keep, rows)


# ---------------------------------------------------------------------------
# Exact simplex (phase-1 feasibility)


def _phase1(A, b, n):
    """Point of {A u = b, u >= 0}, or None, by phase-1 simplex, Bland's rule."""
    m = len(A)
    if m == 0:
        return [_ZERO] * n
    T = []
    for i in range(m):
        row = list(A[i])
        r = Fraction(b[i])
        if r < 0:
            row = [-x for x in row]
            r = -r
        art = [_ZERO] * m
        art[i] = _ONE
        T.append(row + art + [r])
    total = n + m
    basis = list(range(n, n + m))
    # reduced costs for min sum(artificials); artificial columns start at 0
    z = [_ZERO] * (total + 1)
    for i in range(m):
        for j in range(n):
            z[j] -= T[i][j]
        z[total] -= T[i][total]

    while True:
        enter = None
        for j in range(total):
            if z[j] < 0:  # Bland: smallest improving index
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = T[i][enter]
            if coef > 0:
                ratio = T[i][total] / coef
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            raise AssertionError("phase-1 objective unbounded (impossible)")
        piv = T[leave][enter]
        if piv != 1:
            T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [a - f * p for a, p in zip(T[i], T[leave])]
        if z[enter]:
            f = z[enter]
            z = [a - f * p for a, p in zip(z, T[leave])]
        basis[leave] = enter

    if z[total] != 0:  # -(objective); nonzero means artificials stuck
        return None
    u = [_ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            u[var] = T[i][total]
    return u


def _simplex_feasible(rows, rhs, nvars, lower, upper):
    """Feasible x for {rows . x = rhs, lower_j <= x_j <= upper_j}, or None.

    lower/upper are per-variable bound lists (None entries = unbounded).
    Lower-bounded variables are shifted to nonnegative ones; free
    variables are split into differences; upper bounds become slack rows.
    """
    rows = [list(map(Fraction, r)) for r in rows]
    rhs = [Fraction(x) for x in rhs]
    eq_rows = [r[:] for r in rows]
    eq_rhs = rhs[:]
    upper_rows = []
    for j in range(nvars):
        u = upper[j] if upper else None
        if u is not None:
            extra = [_ZERO] * nvars
            extra[j] = _ONE
            eq_rows.append(extra)
            eq_rhs.append(Fraction(u))
            upper_rows.append(len(eq_rows) - 1)

    col_map = []  # per variable: ("pos", col) or ("split", col_p, col_q)
    shifts = []
    ncols = 0
    for j in range(nvars):
        lo = lower[j] if lower else None
        if lo is not None:
            col_map.append(("pos", ncols))
            shifts.append(Fraction(lo))
            ncols += 1
        else:
            col_map.append(("split", ncols, ncols + 1))
            shifts.append(_ZERO)
            ncols += 2
    slack_base = ncols
    ncols += len(upper_rows)

    m = len(eq_rows)
    A = [[_ZERO] * ncols for _ in range(m)]
    b = []
    for i in range(m):
        row = eq_rows[i]
        acc = eq_rhs[i]
        for j in range(nvars):
            coef = row[j]
            if not coef:
                continue
            acc -= coef * shifts[j]
            spec = col_map[j]
            if spec[0] == "pos":
                A[i][spec[1]] += coef
            else:
                A[i][spec[1]] += coef
                A[i][spec[2]] -= coef
        b.append(acc)
    for s, i in enumerate(upper_rows):
        A[i][slack_base + s] = _ONE

    u = _phase1(A, b, ncols)
    if u is None:
        return None
    x = []
    for j in range(nvars):
        spec = col_map[j]
        if spec[0] == "pos":
            x.append(shifts[j] + u[spec[1]])
        else:
            x.append(u[spec[1]] - u[spec[2]])
    return x


def lp_feasible(rows, rhs, nvars, *, nonneg=(), strict_lower=None):
    """Rational point satisfying rows . x = rhs with sign constraints, or None.

    `nonneg` lists variables constrained to x_j >= 0; `strict_lower` maps
    variables to rational lower bounds x_j >= value (for a homogeneous
    system, a lower bound of 1 expresses strict positivity up to
    scaling).  Variables in neither are free.  Exact arithmetic, no
    tolerances: the returned point satisfies everything exactly.
    """
    lower = [None] * nvars
    for j in nonneg:
        lower[j] = _ZERO
    if strict_lower:
        for j, v in strict_lower.items():
            lower[j] = Fraction(v)
    return _simplex_feasible(rows, rhs, nvars, lower, None)


def support_nonneg(space: LinearSubspace) -> frozenset:
    """Support of the nonnegative integer points of the subspace.

    Coordinate i belongs iff {x in space, x >= 0, x_i >= 1} has a
    rational point: by homogeneity, scaling such a point by its common
    denominator yields an integer point, and conversely.  One LP per
    coordinate.
    """
    k = len(space.coords)
    rows = space.equations
    rhs = [_ZERO] * len(rows)
    out = set()
    for i in range(k):
        point = lp_feasible(rows, rhs, k, nonneg=range(k), strict_lower={i: _ONE})
        if point is not None:
            out.add(i)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Integer linear systems


@dataclass(frozen=True)
class IntegerSolutionSet:
    """All integer solutions of A x = b: particular + integer span of basis.

    `particular` is None when the system has no integer solution; the
    lattice basis vectors span the integer kernel of A, so the full
    solution set is particular + Z-combinations of the basis.
    """

    particular: tuple | None
    lattice_basis: tuple

    @property
    def feasible(self) -> bool:
        return self.particular is not None


def _column_echelon(A, m, k):
    """Integer column echelon: returns (H, U, pivots) with A U = H, U unimodular.

    Scanning rows top to bottom, each row either gets a pivot column
    (the only nonzero among not-yet-pivoted columns, made positive by a
    sign flip) or is zero on all of them.
    """
    H = [list(r) for r in A]
    U = [[1 if i == j else 0 for j in range(k)] for i in range(k)]

    def col_op(dst, src, q):
        for i in range(m):
            H[i][dst] -= q * H[i][src]
        for i in range(k):
            U[i][dst] -= q * U[i][src]

    def col_swap(a, b):
        for i in range(m):
            H[i][a], H[i][b] = H[i][b], H[i][a]
        for i in range(k):
            U[i][a], U[i][b] = U[i][b], U[i][a]

    def col_neg(a):
        for i in range(m):
            H[i][a] = -H[i][a]
        for i in range(k):
            U[i][a] = -U[i][a]

    pivots = []
    col = 0
    for r in range(m):
        if col >= k:
            break
        while True:
            nz = [j for j in range(col, k) if H[r][j]]
            if not nz:
                break
            if len(nz) == 1:
                j0 = nz[0]
                col_swap(col, j0)
                if H[r][col] < 0:
                    col_neg(col)
                pivots.append((r, col))
                col += 1
                break
            j0 = min(nz, key=lambda j: abs(H[r][j]))
            for j in nz:
                if j != j0:
                    q = H[r][j] // H[r][j0]
                    if q:
                        col_op(j, j0, q)
    return H, U, pivots


def hnf_solve(A, b) -> IntegerSolutionSet:
    """Complete integer solution set of A x = b.

    Column-reduces A with a recorded unimodular transform U; the echelon
    system H y = b solves by forward substitution, requiring exact
    divisibility at every pivot.  Solutions are x = U y; kernel basis =
    columns of U over the pivot-free columns of H.
    """
    A = [[int(x) for x in row] for row in A]
    b = [int(x) for x in b]
    m = len(A)
    k = len(A[0]) if m else 0
    if any(len(row) != k for row in A):
        raise ValueError("ragged matrix")
    if len(b) != m:
        raise ValueError("rhs length mismatch")
    if k == 0:
        if any(b):
            return IntegerSolutionSet(None, ())
        return IntegerSolutionSet((), ())

    H, U, pivots = _column_echelon(A, m, k)
    pivot_by_row = {r: c for r, c in pivots}
    y = [0] * k
    for r in range(m):
        acc = b[r]
        for _, c in pivots:
            if y[c] and H[r][c]:
                acc -= H[r][c] * y[c]
        c = pivot_by_row.get(r)
        if c is None:
            if acc != 0:
                return IntegerSolutionSet(None, ())
        else:
            q, rem = divmod(acc, H[r][c])
            if rem:
                return IntegerSolutionSet(None, ())
            y[c] = q
    particular = tuple(
        sum(U[i][j] * y[j] for j in range(k) if y[j]) for i in range(k)
    )
    pivot_cols = {c for _, c in pivots}
    kernel = tuple(
        tuple(U[i][j] for i in range(k)) for j in range(k) if j not in pivot_cols
    )
    return IntegerSolutionSet(particular, kernel)


def _solution_box_bound(A, b, k):
    """B such that {Ax=b, x>=0} feasible implies a solution in [0, B]^k.

    Standard small-solution bound for equality-form integer programs,
    taken with generous constants; only used to prune branch-and-bound.
    """
    m = len(A)
    amax = max([2] + [abs(x) for row in A for x in row] + [abs(x) for x in b])
    return (k + 2) * ((m + 2) * amax) ** (2 * m + 3)


def ilp_feasible_nonneg(A, b, nonzero_groups=()):
    """Nonnegative integer point of A x = b honoring side conditions, or None.

    `nonzero_groups` is a list of index groups; each group must not be
    all-zero in the solution.  Groups are handled disjunctively: one
    branch per group member, requiring that member >= 1 (substituted
    away, keeping the base problem in pure nonnegative form).

    The base solver does a Hermite pre-reduction (no integer solutions at
    all, or a zero-dimensional kernel, settle immediately), then
    branch-and-bound over the exact LP relaxation, branching on the
    smallest-index fractional variable.  Branch bounds are clamped to a
    finite solution box, which makes the search complete.
    """
    A = [[int(x) for x in row] for row in A]
    b = [int(x) for x in b]
    k = len(A[0]) if A else 0
    if not nonzero_groups:
        return _ilp_base(A, b, k)
    groups = [list(g) for g in nonzero_groups]
    if any(not g for g in groups):
        return None  # an empty group can never be made nonzero

    for choice in itertools.product(*groups):
        shifted = list(b)
        bump = [0] * k
        for g in choice:
            for i in range(len(A)):
                shifted[i] -= A[i][g]
            bump[g] += 1
        sol = _ilp_base(A, shifted, k)
        if sol is not None:
            return tuple(s + extra for s, extra in zip(sol, bump))
    return None


def _ilp_base(A, b, k):
    """Nonnegative integer solution of A x = b, or None."""
    if k == 0:
        return () if not any(b) else None
    zsol = hnf_solve(A, b)
    if not zsol.feasible:
        return None
    if not zsol.lattice_basis:
        x = zsol.particular
        return x if all(v >= 0 for v in x) else None

    box = _solution_box_bound(A, b, k)
    rows = [list(map(Fraction, row)) for row in A]
    rhs = [Fraction(x) for x in b]

    def recurse(lower, upper):
        point = _simplex_feasible(rows, rhs, k, lower, upper)
        if point is None:
            return None
        frac = None
        for j in range(k):
            if point[j].denominator != 1:
                frac = j
                break
        if frac is None:
            return tuple(int(v) for v in point)
        v = point[frac]
        fl = v.numerator // v.denominator
        down = min(fl, box)
        up = fl + 1
        if down >= lower[frac]:
            u2 = list(upper)
            if u2[frac] is None or down < u2[frac]:
                u2[frac] = Fraction(down)
            found = recurse(lower, u2)
            if found is not None:
                return found
        if up <= box and (upper[frac] is None or up <= upper[frac]):
            l2 = list(lower)
            l2[frac] = Fraction(up)
            return recurse(l2, upper)
        return None

    return recurse([_ZERO] * k, [None] * k)


# ---------------------------------------------------------------------------
# Cones in Q^2


@dataclass(frozen=True)
class Cone2D:
    """Finitely generated cone in Q^2 (nonnegative rational combinations)."""

    generators: tuple

    def __init__(self, generators):
        gens = tuple((Fraction(a), Fraction(b)) for a, b in generators)
        object.__setattr__(self, "generators", gens)


@dataclass(frozen=True)
class ConeMeet:
    """Outcome of intersecting two plane cones."""

    dim: int
    interior_vector: tuple | None
    separating_functional: tuple | None


def _primitive(v):
    """Primitive integer vector in the same direction, or None for zero."""
    a, b = Fraction(v[0]), Fraction(v[1])
    if a == 0 and b == 0:
        return None
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    p, q = int(a * den), int(b * den)
    g = gcd(abs(p), abs(q))
    return (p // g, q // g)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _rot_ccw(v):
    return (-v[1], v[0])


def _rot_cw(v):
    return (v[1], -v[0])


def _angular_sort(dirs):
    """Sort primitive directions counterclockwise starting at (1, 0)."""

    def half(d):
        # 0 for polar angle in [0, pi), 1 for [pi, 2pi)
        return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        cr = _cross(a, b)
        if cr > 0:
            return -1
        if cr < 0:
            return 1
        return 0

    return sorted(dirs, key=functools.cmp_to_key(cmp))


def _cone_form(generators):
    """Canonical form of the cone generated by the given vectors.

    One of ("zero",), ("ray", d), ("line", d), ("wedge", r1, r2) running
    counterclockwise from r1 to r2 through an angle < pi,
    ("halfplane", n) with inward normal n, or ("plane",).
    """
    dirs = []
    seen = set()
    for g in generators:
        p = _primitive(g)
        if p is not None and p not in seen:
            seen.add(p)
            dirs.append(p)
    if not dirs:
        return ("zero",)
    if len(dirs) == 1:
        return ("ray", dirs[0])
    neg0 = (-dirs[0][0], -dirs[0][1])
    if all(d == dirs[0] or d == neg0 for d in dirs):
        return ("line", dirs[0])

    order = _angular_sort(dirs)
    n = len(order)
    # classify the cyclic gaps; at most one gap can be >= pi
    for idx in range(n):
        a = order[idx]
        b = order[(idx + 1) % n]
        if _cross(a, b) < 0:
            # ccw gap from a to b exceeds pi: cone is the wedge from b to a
            return ("wedge", b, a)
    for idx in range(n):
        a = order[idx]
        b = order[(idx + 1) % n]
        if _cross(a, b) == 0 and _dot(a, b) < 0:
            # a gap of exactly pi: the occupied side is a closed halfplane
            return ("halfplane", _rot_ccw(b))
    return ("plane",)


def _halfplanes(form):
    """Constraints n . x >= 0 whose intersection is exactly the cone."""
    kind = form[0]
    if kind == "zero":
        return [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if kind == "ray":
        d = form[1]
        return [_rot_ccw(d), _rot_cw(d), d]
    if kind == "line":
        d = form[1]
        return [_rot_ccw(d), _rot_cw(d)]
    if kind == "wedge":
        return [_rot_ccw(form[1]), _rot_cw(form[2])]
    if kind == "halfplane":
        return [form[1]]
    return []


def _form_dim(form):
    return {
        "zero": 0,
        "ray": 1,
        "line": 1,
        "wedge": 2,
        "halfplane": 2,
        "plane": 2,
    }[form[0]]


def _feasible_cone(constraints):
    """Canonical form of {x : n . x >= 0 for all n in constraints}.

    The extreme rays of such a cone lie on constraint boundaries, and a
    halfplane result additionally needs an interior representative; so it
    suffices to classify the cone generated by the feasible ones among
    the boundary directions and the normals themselves.
    """
    if not constraints:
        return ("plane",)
    candidates = []
    seen = set()
    for c in constraints:
        for cand in (_rot_ccw(c), _rot_cw(c), c):
            p = _primitive(cand)
            if p is not None and p not in seen:
                seen.add(p)
                candidates.append(p)
    feasible = [c for c in candidates if all(_dot(n, c) >= 0 for n in constraints)]
    return _cone_form(feasible)


def _interior_vector(form):
    """A rational vector interior to a 2-dimensional cone."""
    kind = form[0]
    if kind == "wedge":
        r1, r2 = form[1], form[2]
        # average of the extreme rays, denominators cleared
        return (r1[0] + r2[0], r1[1] + r2[1])
    if kind == "halfplane":
        return form[1]  # the inward normal points strictly inside
    if kind == "plane":
        return (1, 0)
    return None


def cone_intersect_dim(c1: Cone2D, c2: Cone2D) -> ConeMeet:
    """Dimension of the intersection cone, plus certificates.

    dim 2: also a rational vector strictly interior to both cones.
    dim <= 1: a nonzero functional n with n . g >= 0 on all generators of
    c1 and n . h <= 0 on all generators of c2 when one exists (classified
    exactly, no search), else absent.  Two zero cones report dim 0 with
    the conventional functional (1, 0).
    """
    f1 = _cone_form(c1.generators)
    f2 = _cone_form(c2.generators)
    meet = _feasible_cone(_halfplanes(f1) + _halfplanes(f2))
    dim = _form_dim(meet)
    if dim == 2:
        return ConeMeet(2, _interior_vector(meet), None)

    constraints = []
    for g in c1.generators:
        p = _primitive(g)
        if p is not None:
            constraints.append(p)
    for h in c2.generators:
        p = _primitive((-h[0], -h[1]))
        if p is not None:
            constraints.append(p)
    if not constraints:
        return ConeMeet(dim, None, (1, 0))
    form = _feasible_cone(constraints)
    if form[0] == "zero":
        return ConeMeet(dim, None, None)
    if form[0] == "plane":
        return ConeMeet(dim, None, (1, 0))
    if form[0] in ("ray", "line"):
        return ConeMeet(dim, None, form[1])
    if form[0] == "wedge":
        return ConeMeet(dim, None, min(form[1], form[2]))
    return ConeMeet(dim, None, _rot_ccw(form[1]))  # halfplane boundary direction
