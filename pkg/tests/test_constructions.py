"""Family constructions: recurrences, monoliths, identities, controls.

Numeric oracles here were evaluated independently (by hand or straight
from the defining recurrences) and are frozen as literals.
"""

from __future__ import annotations

from dataclasses import replace

import pytest

from monolith_forge.algebra import InvalidParameter, build_presentation, power
from monolith_forge.constructions import (
    AssumptionFailed,
    DualityFailed,
    MuZero,
    build_monolith,
    check_assumptions,
    distinct_probe_submodules,
    down_up_duality_check,
    down_up_socle_comparison,
    e101_identity_check,
    filtration_checks,
    lowest_weight_module,
    make_spec,
    ore_e1_identity,
    ore_nonisomorphism,
    ore_submodule_classification,
    singular_weights,
    verma_module,
    weight_sequence,
    weyl_closed_form_check,
)
from monolith_forge.modules import (
    ProbeConfig,
    build_cyclic_module,
    generated_submodule,
    is_simple_truncated,
    project_poly,
)
from monolith_forge.scalars import Scalar


def rat(n, d=1):
    return Scalar.rational(n, d)


# ---------------------------------------------------------------------------
# weight recurrences


def test_verma_weight_sequence_oracle():
    seq = weight_sequence(2, 1, 4, "verma")
    assert seq == [rat(1), rat(4), rat(11), rat(26), rat(57)]


def test_lowest_weight_sequence_oracle():
    seq = weight_sequence(2, 2, 3, "lowest")
    assert seq == [rat(2), rat(7, 2), rat(19, 4), rat(47, 8)]


def test_initial_condition_convention():
    # lambda_{-1} = 0: lambda_1 depends only on lambda_0 and the +1 term
    seq = weight_sequence(2, 5, 1, "verma")
    assert seq[1] == rat(3 * 5 + 1)


def test_weight_sequence_rejects_zero_eta():
    with pytest.raises(InvalidParameter):
        weight_sequence(0, 1, 3, "verma")


# ---------------------------------------------------------------------------
# explicit modules


def test_verma_module_actions():
    V = verma_module(2, 1, 6)
    pres = V.pres
    u_i, d_i = pres.gen_index("u"), pres.gen_index("d")
    p0, p1 = V.pos["v0"], V.pos["v1"]
    assert V.actions[d_i][p0] == {}          # d.v_0 = 0
    assert V.actions[u_i][p0] == {p1: Scalar.one(V.kind)}
    assert V.actions[d_i][p1] == {p0: rat(1)}  # lambda_0 = 1


def test_lowest_weight_module_actions():
    W = lowest_weight_module(2, 2, 6)
    pres = W.pres
    u_i, w_i = pres.gen_index("u"), pres.gen_index("w")
    p0, p1 = W.pos["a0"], W.pos["a1"]
    assert W.actions[u_i][p1] == {p0: rat(2)}   # u.a_1 = kappa a_0
    # w.a_0 = (eps - kappa) a_0 = (1 - 2) a_0
    assert W.actions[w_i][p0] == {p0: rat(-1)}


def test_singular_weight_and_informational_mismatch():
    recs = singular_weights(2, 4)
    rec1 = next(r for r in recs if r["n"] == 1)
    assert rec1["lambda"] == rat(-1, 3)
    # the shifted closed form disagrees; that is recorded, not judged
    assert rec1["agrees"] is False
    assert rec1["closed_form_shifted"] == rat(-5, 7)


def test_truncated_simplicity_verdicts():
    bad = is_simple_truncated(verma_module(2, "-1/3", 8),
                              ProbeConfig(seed=3, probes=10))
    assert not bad.ok
    assert bad.witnesses and "v2" in bad.witnesses[0]
    good = is_simple_truncated(verma_module(2, 1, 8),
                               ProbeConfig(seed=3, probes=10))
    assert good.ok


def test_verma_nonvanishing_long_run():
    seq = weight_sequence(2, 1, 500, "verma")
    assert all(not s.is_zero() for s in seq)


# ---------------------------------------------------------------------------
# assumptions and the monolith


def test_assumptions_pass_quantum_plane():
    chk = check_assumptions(make_spec("quantum-plane", parameter=2), 6,
                            m_max=2, cfg=ProbeConfig(seed=5, probes=8))
    assert chk.ok
    assert chk.require() is chk


def test_assumptions_corrupted_mu_fails_third():
    spec = make_spec("quantum-plane", parameter=2)
    broken = replace(spec, mu=rat(2))
    chk = check_assumptions(broken, 6, m_max=2,
                            cfg=ProbeConfig(seed=5, probes=8))
    with pytest.raises(AssumptionFailed) as err:
        chk.require()
    assert err.value.assumption == 3


def test_muzero_configuration():
    with pytest.raises(MuZero):
        make_spec("down-up", parameter=2, kappa=1)


def test_monolith_dimensions_quantum_plane():
    res = build_monolith(make_spec("quantum-plane", parameter=2), 8,
                         ProbeConfig(seed=5, probes=10))
    assert res.ok
    assert (res.L.rank, res.M.dim, res.N.dim) == (15, 24, 9)
    assert res.L.rank + res.N.dim == res.M.dim


def test_monolith_tolerates_degenerate_x():
    # x = 1 collapses N to zero and makes L all of M; the sequence is
    # still exact and essentiality is vacuous, so nothing should raise
    spec = make_spec("quantum-plane", parameter=2)
    degen = replace(spec, x=spec.presentation.one())
    res = build_monolith(degen, 6, ProbeConfig(seed=5, probes=6))
    assert res.ok and res.N.dim == 0 and res.L.rank == res.M.dim


def test_socle_carries_lowest_weight_action():
    rep = down_up_socle_comparison(2, 2, D=10)
    assert rep.ok
    assert rep.dimensions[0] == 10


# ---------------------------------------------------------------------------
# family identity oracles


def test_ore_morphism_dimensions():
    rep, ms = ore_nonisomorphism(2, 0, 1, 8)
    assert rep.ok and ms.dimension == 0
    rep, ms = ore_nonisomorphism(2, 2, 2, 8)
    assert rep.ok and ms.dimension == 1
    rep, ms = ore_nonisomorphism(2, 1, 0, 8, expect=0)
    assert rep.ok


def test_ore_e1_factorial_identity():
    rep = ore_e1_identity(2, 3)
    assert rep.ok
    assert "n!" in " ".join(rep.notes)


def test_ore_classification_spec_example():
    pres = build_presentation("ore", r=2)
    b, a = pres.gen("b"), pres.gen("a")
    N = build_cyclic_module(pres, [b - pres.one()], 8)
    probe = generated_submodule(
        N, [project_poly(N, power(pres, a, 2) + power(pres, a, 3))])
    tail = generated_submodule(N, [project_poly(N, power(pres, a, 2))])
    assert probe == tail
    assert tail.rank == 7  # a^2..a^8
    whole = generated_submodule(N, [project_poly(N, pres.one())])
    assert whole.rank == N.dim


@pytest.mark.parametrize("r", [1, 2, 3])
def test_ore_classification_probes(r):
    rep = ore_submodule_classification(r, 8, ProbeConfig(seed=5, probes=15))
    assert rep.ok
    assert rep.dimensions == list(range(9, 0, -1))


def test_duality_passes_and_detects_bad_images():
    assert down_up_duality_check(2).ok
    assert down_up_duality_check("t").ok
    dst = build_presentation("down_up", rat(1, 2))
    wrong = [dst.gen("u"), dst.gen("w"), dst.gen("d")]
    with pytest.raises(DualityFailed):
        down_up_duality_check(2, images=wrong)


def test_filtration_twist():
    rep = filtration_checks(2, D=8)
    assert rep.ok


def test_weyl_closed_form_matches_truncation():
    rep = weyl_closed_form_check("t", 8)
    assert rep.ok


@pytest.mark.parametrize("family,kw", [
    ("quantum-plane", {"parameter": 2}),
    ("ore", {"r": 2}),
])
def test_e101_membership(family, kw):
    spec = make_spec(family, **kw)
    rep = e101_identity_check(spec, m_max=2, cfg=ProbeConfig(seed=5, probes=6),
                              D=6)
    assert rep.ok


def test_distinct_submodules_grow_with_degree():
    spec = make_spec("ore", r=2)
    n6, _ = distinct_probe_submodules(spec, 6, ProbeConfig(seed=9))
    n8, ranks = distinct_probe_submodules(spec, 8, ProbeConfig(seed=9))
    assert n6 < n8
    assert len(ranks) >= 4
