"""Sparse exact row reduction: Subspace closure laws and nullspace."""

from __future__ import annotations

import random

from monolith_forge.linalg import Subspace, from_vectors, nullspace, vec_axpy
from monolith_forge.scalars import RAT, RATFUN, Scalar


def rand_vec(rng, dim, kind=RAT, density=0.6) -> dict:
    v = {}
    for p in range(dim):
        if rng.random() < density:
            c = rng.randint(-6, 6)
            if c:
                v[p] = Scalar.of(kind, c)
    return v


def rand_space(rng, dim, nvecs, kind=RAT) -> Subspace:
    return from_vectors(dim, [rand_vec(rng, dim, kind) for _ in range(nvecs)])


def test_insert_reports_growth():
    S = Subspace(3)
    one = Scalar.one(RAT)
    assert S.insert({0: one})
    assert not S.insert({0: one + one})
    assert S.insert({0: one, 2: one})
    assert S.rank == 2


def test_reduce_is_idempotent_and_membership():
    rng = random.Random(2)
    for _ in range(25):
        S = rand_space(rng, 6, 3)
        v = rand_vec(rng, 6)
        r = S.reduce(dict(v))
        assert S.reduce(dict(r)) == r
        if not r:
            assert S.contains(v)
        # v - reduce(v) always lies in S
        diff = vec_axpy(dict(v), -Scalar.one(RAT), r)
        assert S.contains(diff)


def test_dimension_formula_sum_intersect():
    rng = random.Random(13)
    for _ in range(30):
        U = rand_space(rng, 7, rng.randint(1, 4))
        V = rand_space(rng, 7, rng.randint(1, 4))
        s, m = U.sum(V), U.intersect(V)
        assert s.rank + m.rank == U.rank + V.rank
        assert m.is_subspace_of(U) and m.is_subspace_of(V)
        assert U.is_subspace_of(s) and V.is_subspace_of(s)


def test_intersection_contains_common_vectors():
    rng = random.Random(29)
    for _ in range(20):
        W = rand_space(rng, 6, 2)
        U = W.copy()
        V = W.copy()
        U.insert(rand_vec(rng, 6))
        V.insert(rand_vec(rng, 6))
        m = U.intersect(V)
        assert W.is_subspace_of(m)


def test_section_restricts_support():
    rng = random.Random(31)
    for _ in range(20):
        S = rand_space(rng, 8, 4)
        allowed = [0, 1, 2]
        sec = S.section(allowed)
        for row in sec.rows:
            assert set(row) <= set(allowed)
        # vectors of S supported inside `allowed` survive into the section
        for row in S.rows:
            if set(row) <= set(allowed):
                assert sec.contains(row)


def test_equality_is_basis_independent():
    rng = random.Random(37)
    for _ in range(20):
        vecs = [rand_vec(rng, 5) for _ in range(4)]
        A = from_vectors(5, vecs)
        rng.shuffle(vecs)
        scaled = [{p: c * Scalar.rational(3) for p, c in v.items()} for v in vecs]
        B = from_vectors(5, scaled)
        assert A == B
        assert hash(A) == hash(B)


def test_nullspace_solves_the_system():
    rng = random.Random(41)
    for kind in (RAT, RATFUN):
        for _ in range(12):
            nvars = 5
            eqs = [rand_vec(rng, nvars, kind) for _ in range(3)]
            sols = nullspace(eqs, nvars, kind)
            rank = from_vectors(nvars, eqs).rank
            assert len(sols) == nvars - rank
            for s in sols:
                for eq in eqs:
                    acc = Scalar.zero(kind)
                    for p, c in eq.items():
                        if p in s:
                            acc = acc + c * s[p]
                    assert acc.is_zero()


def test_from_vectors_known_ranks():
    one = Scalar.one(RAT)
    two = Scalar.rational(2)
    assert from_vectors(3, [{0: one}, {1: one}, {0: one, 1: one}]).rank == 2
    assert from_vectors(2, [{0: one, 1: two},
                            {0: two, 1: two + two}]).rank == 1
    assert from_vectors(4, []).rank == 0
