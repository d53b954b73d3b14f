"""Exact sparse linear algebra over either scalar variant.

Vectors are dicts {coordinate index: Scalar} with no explicit zeros.
A Subspace keeps a reduced row-echelon basis (pivot entries 1, pivot
columns cleared from the other rows), so two subspaces are equal iff
their row lists are identical -- handy both for stabilization loops and
for counting distinct submodules.

Coordinate order matters to callers: the module layer indexes basis
elements in descending weight, so "low weight" coordinates always form
a suffix block and sections along that block fall out of the RREF for
free.
"""

from __future__ import annotations

import bisect

from .scalars import Scalar


def vec_add(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(u: dict, c: Scalar) -> dict:
    if c.is_zero():
        return {}
    return {k: v * c for k, v in u.items()}


def vec_axpy(u: dict, c: Scalar, v: dict) -> dict:
    """u + c*v without building an intermediate."""
    if c.is_zero():
        return dict(u)
    out = dict(u)
    for k, x in v.items():
        s = out.get(k)
        s = c * x if s is None else s + c * x
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


class Subspace:
    """Span of vectors inside an ambient coordinate space, kept in RREF."""

    __slots__ = ("ambient_dim", "rows", "pivots")

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.rows: list[dict] = []   # sorted by pivot column
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "Subspace":
        s = Subspace(self.ambient_dim)
        s.rows = [dict(r) for r in self.rows]
        s.pivots = list(self.pivots)
        return s

    def reduce(self, vec: dict) -> dict:
        """Residue of vec modulo the subspace."""
        out = dict(vec)
        for piv, row in zip(self.pivots, self.rows):
            c = out.get(piv)
            if c is not None:
                out = vec_axpy(out, -c, row)
        return out

    def insert(self, vec: dict) -> bool:
        """Add vec to the span; True iff the rank grew."""
        res = self.reduce(vec)
        if not res:
            return False
        piv = min(res)
        inv = res[piv].inverse()
        row = {k: v * inv for k, v in res.items()}
        # clear the new pivot column from existing rows
        for i, r in enumerate(self.rows):
            c = r.get(piv)
            if c is not None:
                self.rows[i] = vec_axpy(r, -c, row)
        at = bisect.bisect_left(self.pivots, piv)
        self.pivots.insert(at, piv)
        self.rows.insert(at, row)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash(self.signature())

    def signature(self) -> tuple:
        """Canonical hashable form (RREF is unique for a given span)."""
        return tuple(
            tuple(sorted((k, v.render()) for k, v in row.items()))
            for row in self.rows
        )

    def sum(self, other: "Subspace") -> "Subspace":
        out = self.copy()
        for r in other.rows:
            out.insert(r)
        return out

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: rows [u|u] and [w|0]; right block of left-zero rows."""
        n = self.ambient_dim
        tmp = Subspace(2 * n)
        for u in self.rows:
            both = dict(u)
            both.update({k + n: v for k, v in u.items()})
            tmp.insert(both)
        for w in other.rows:
            tmp.insert(dict(w))
        out = Subspace(n)
        for piv, row in zip(tmp.pivots, tmp.rows):
            if piv >= n:
                out.insert({k - n: v for k, v in row.items()})
        return out

    def section(self, allowed) -> "Subspace":
        """Intersection with span{e_i : i in allowed}.

        Exact when allowed is a suffix block of the coordinate order (the
        common case here); rows pivoting inside the block then have all
        their support inside it.  For general sets we fall back to
        intersecting with the coordinate subspace.
        """
        allowed = set(allowed)
        if allowed and min(allowed) + len(allowed) == self.ambient_dim:
            out = Subspace(self.ambient_dim)
            for piv, row in zip(self.pivots, self.rows):
                if piv in allowed and all(k in allowed for k in row):
                    out.insert(dict(row))
            return out
        coord = Subspace(self.ambient_dim)
        kind = self.rows[0][self.pivots[0]].kind if self.rows else None
        for i in sorted(allowed):
            coord.insert({i: Scalar.one(kind)} if kind else {})
        return self.intersect(coord) if kind else Subspace(self.ambient_dim)


def from_vectors(ambient_dim: int, vectors) -> Subspace:
    s = Subspace(ambient_dim)
    for v in vectors:
        s.insert(v)
    return s


def nullspace(equations: list[dict], nvars: int, kind: str) -> list[dict]:
    """Basis of {x : each equation row dotted with x vanishes}."""
    rref = from_vectors(nvars, equations)
    pivset = set(rref.pivots)
    basis = []
    for f in range(nvars):
        if f in pivset:
            continue
        sol = {f: Scalar.one(kind)}
        for piv, row in zip(rref.pivots, rref.rows):
            c = row.get(f)
            if c is not None:
                sol[piv] = -c
        basis.append(sol)
    return basis
