"""Shared test helpers: naive oracles and a module direct-sum builder."""

from __future__ import annotations

from fractions import Fraction

from monolith_forge.linalg import Subspace, from_vectors
from monolith_forge.modules import TruncatedModule


def naive_poly_mul(a: list, b: list) -> list:
    """Schoolbook convolution over Fraction, the oracle for UniPoly.__mul__."""
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += Fraction(ca) * Fraction(cb)
    return out


def direct_sum(mod: TruncatedModule) -> TruncatedModule:
    """M + M with copies interleaved so basis weights stay non-increasing.

    Left copy lands on even positions, right copy on odd ones; the result
    is a bona fide module with no submodule meeting the left copy's socle
    from inside the right copy, which is what the negative controls need.
    """
    labels, weights = [], []
    for i, lab in enumerate(mod.labels):
        text = lab if isinstance(lab, str) else mod.render_label(i)
        labels += [f"{text}[left]", f"{text}[right]"]
        weights += [mod.weights[i], mod.weights[i]]
    actions = {}
    for g, rows in mod.actions.items():
        out = {}
        for p, col in rows.items():
            out[2 * p] = {2 * t: c for t, c in col.items()}
            out[2 * p + 1] = {2 * t + 1: c for t, c in col.items()}
        actions[g] = out
    cyclic = None
    if mod.cyclic:
        cyclic = {2 * p: c for p, c in mod.cyclic.items()}
    return TruncatedModule(mod.pres, mod.D, labels, weights, actions,
                           cyclic=cyclic, name=f"{mod.name}+{mod.name}")


def left_copy(sum_mod: TruncatedModule, sub: Subspace) -> Subspace:
    """Embed a subspace of the original module as (subspace, 0) in the sum."""
    rows = [{2 * p: c for p, c in row.items()} for row in sub.rows]
    return from_vectors(sum_mod.dim, rows)
