"""Acceptance suite: one check per shipped guarantee, one verdict line each.

Every criterion is exact (rational or rational-function arithmetic);
there are no tolerances.  Runs in a few minutes at the stated degrees.
"""

from __future__ import annotations

import json
from itertools import product

import pytest

from conftest import direct_sum, left_copy
from monolith_forge import cli
from monolith_forge.algebra import build_presentation, multiply, verify_normal_element, \
    verify_presentation_consistency
from monolith_forge.constructions import (
    build_monolith,
    check_assumptions,
    distinct_probe_submodules,
    down_up_duality_check,
    e101_identity_check,
    filtration_checks,
    make_spec,
    ore_e1_identity,
    ore_nonisomorphism,
    singular_weights,
    verma_module,
    weight_sequence,
    weyl_closed_form_check,
)
from monolith_forge.modules import ProbeConfig, essentiality_check, is_simple_truncated
from monolith_forge.scalars import Scalar

T = Scalar.t()


@pytest.fixture
def outcome(capsys):
    """Print one AC verdict line, then fail the test if the check failed."""

    def _report(n: int, description: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"AC{n:02d} {'PASS' if ok else 'FAIL'}  {description}")
        assert ok, f"AC{n}: {description}" + (f" [{detail}]" if detail else "")

    return _report


DEFAULT_SPECS = [
    ("quantum-plane", {}),
    ("weyl", {}),
    ("ore", {"r": 2}),
    ("down-up", {"parameter": 2, "kappa": 2}),
]


def test_ac01_presentation_consistency(outcome):
    presentations = [
        build_presentation("quantum_plane", T),
        build_presentation("quantum_plane", Scalar.rational(2)),
        build_presentation("weyl", T),
        build_presentation("weyl", Scalar.rational(2)),
        build_presentation("down_up", T),
        build_presentation("down_up", Scalar.rational(2)),
    ] + [build_presentation("ore", r=r) for r in (1, 2, 3)]
    bad = []
    for pres in presentations:
        rep = verify_presentation_consistency(pres, strict=False)
        if not rep.ok:
            bad.append(f"{pres.family}: {rep.witnesses}")
        if pres.family == "down_up" and "5 relations" not in rep.notes[0]:
            bad.append("down-up relation list incomplete")
    outcome(1, "diamond checks and family relations reduce to zero",
            not bad, "; ".join(bad))


def test_ac02_displayed_formula_suite(outcome):
    from monolith_forge.algebra import verify_du_formulas

    bad = []
    du = verify_du_formulas(build_presentation("down_up", T), 5, strict=False)
    if not du.ok:
        bad.append("d*u^n straightening")
    for r in (1, 2, 3):
        if not ore_e1_identity(r, 5).ok:
            bad.append(f"(a-1)^n b^n identity at r={r}")
    if not filtration_checks(2, D=10).ok:
        bad.append("w^k twist congruences")
    outcome(2, "displayed identities hold for n <= 5 (twists to depth 10)",
            not bad, "; ".join(bad))


def test_ac03_normality(outcome):
    bad = []
    for family, kw in DEFAULT_SPECS + [("ore", {"r": 1}), ("ore", {"r": 3})]:
        spec = make_spec(family, **kw)
        rep = verify_normal_element(spec.presentation, spec.w_elem,
                                    spec.sigma, strict=False)
        if not rep.ok:
            bad.append(f"{family}{kw}: {rep.witnesses}")
    for r in (1, 2, 3):
        spec = make_spec("ore", r=r)
        pres = spec.presentation
        b_i, a_i = pres.gen_index("b"), pres.gen_index("a")
        shift = pres.word_poly((a_i,) * (r - 1))
        if spec.sigma.images[b_i] != pres.gen("b") + shift:
            bad.append(f"ore r={r}: twist is not b -> b + a^(r-1)")
    pres = build_presentation("down_up", Scalar.rational(2))
    d, u, w = pres.gen("d"), pres.gen("u"), pres.gen("w")
    eta = pres.parameter
    if multiply(pres, d, w) != multiply(pres, w, d).scale(eta):
        bad.append("dw != eta*wd")
    if multiply(pres, u, w) != multiply(pres, w, u).scale(eta.inverse()):
        bad.append("uw != eta^-1*wu")
    outcome(3, "w is normal with the stated twist in all four families",
            not bad, "; ".join(bad))


def test_ac04_assumption_battery(outcome):
    cfg = ProbeConfig(seed=7, probes=50)
    configs = [("quantum-plane", {}), ("weyl", {}), ("ore", {"r": 1}),
               ("ore", {"r": 2}), ("ore", {"r": 3}),
               ("down-up", {"parameter": 2, "kappa": 2})]
    bad = []
    for family, kw in configs:
        for D in (8, 10):
            chk = check_assumptions(make_spec(family, **kw), D, m_max=4,
                                    cfg=cfg)
            for rep in chk.reports:
                if not rep.ok:
                    bad.append(f"{family}{kw} D={D}: {rep.name}")
    outcome(4, "assumptions (1)-(6) hold for 6 configurations at D in {8,10}",
            not bad, "; ".join(bad))


def test_ac05_essential_socle(outcome):
    cfg = ProbeConfig(seed=13, probes=100)
    bad = []
    down_up_reports = None
    for family, kw in DEFAULT_SPECS:
        spec = make_spec(family, **kw)
        res = build_monolith(spec, 8, cfg)
        for rep in res.reports:
            if not rep.ok:
                bad.append(f"{family}: {rep.name}")
        if family == "down-up":
            down_up_reports = [r.to_dict() for r in res.reports]
            doubled = direct_sum(res.M)
            control = essentiality_check(doubled, left_copy(doubled, res.L),
                                         cfg)
            if control.ok:
                bad.append("direct-sum control not rejected")
    rerun = build_monolith(make_spec("down-up", parameter=2, kappa=2), 8, cfg)
    if [r.to_dict() for r in rerun.reports] != down_up_reports:
        bad.append("rerun with the same seed differs")
    outcome(5, "socle is essential with 100 probes; direct sum fails; "
            "seed-reproducible", not bad, "; ".join(bad))


def test_ac06_highest_weight_recurrence(outcome):
    bad = []
    seq = weight_sequence(2, 1, 500, "verma")
    if any(s.is_zero() for s in seq):
        bad.append("lambda_n vanished for some n <= 500")
    recs = singular_weights(2, 4)
    rec1 = next(r for r in recs if r["n"] == 1)
    if rec1["lambda"] != Scalar.rational(-1, 3):
        bad.append(f"singular weight at n=1 is {rec1['lambda'].render()}")
    if rec1["agrees"] or "closed_form_shifted" not in rec1:
        bad.append("shifted closed form unexpectedly agrees (should be "
                   "reported as a discrepancy, informationally)")
    probe = is_simple_truncated(verma_module(2, "-1/3", 8),
                                ProbeConfig(seed=3, probes=20))
    if probe.ok:
        bad.append("V(-1/3) truncation not flagged")
    elif not any("v2" in w for w in probe.witnesses):
        bad.append(f"witness is not v_2: {probe.witnesses}")
    outcome(6, "weights never vanish at lambda=1; V(-1/3) breaks at v_2",
            not bad, "; ".join(bad))


def test_ac07_weyl_closed_form(outcome):
    bad = []
    for D in (4, 6, 8, 10):
        rep = weyl_closed_form_check(T, D)
        if not rep.ok:
            bad.append(f"D={D}: {rep.witnesses}")
    outcome(7, "closed-form Weyl quotient matches the truncated build, D <= 10",
            not bad, "; ".join(bad))


def test_ac08_ore_nonisomorphism(outcome):
    bad = []
    for m, m1 in product(range(4), repeat=2):
        rep, space = ore_nonisomorphism(2, m, m1, 8)
        want = 1 if m == m1 else 0
        if not rep.ok or space.dimension != want:
            bad.append(f"(m,m1)=({m},{m1}): dim {space.dimension} != {want}")
    outcome(8, "graded morphism space is 0 off-diagonal, 1 on it (r=2, D=8)",
            not bad, "; ".join(bad))


def test_ac09_duality(outcome):
    bad = []
    for eta in (2, "t"):
        rep = down_up_duality_check(eta)
        if not rep.ok:
            bad.append(f"eta={eta}")
    outcome(9, "u<->d exchange maps relations of A(eta) into A(1/eta)",
            not bad, "; ".join(bad))


def test_ac10_ideal_membership(outcome):
    cfg = ProbeConfig(seed=17, probes=20)
    bad = []
    for family, kw in DEFAULT_SPECS:
        rep = e101_identity_check(make_spec(family, **kw), m_max=3, cfg=cfg)
        if not rep.ok:
            bad.append(f"{family}: {rep.witnesses}")
    outcome(10, "w^m * a lands in the stated ideal slice, m <= 3, 20 probes",
            not bad, "; ".join(bad))


def test_ac11_descending_chain_evidence(outcome):
    bad = []
    for family, kw in DEFAULT_SPECS:
        spec = make_spec(family, **kw)
        counts = [distinct_probe_submodules(spec, D, ProbeConfig(seed=9))[0]
                  for D in (6, 8, 10)]
        if not (counts[0] < counts[1] < counts[2]):
            bad.append(f"{family}: counts {counts} do not grow")
        if counts[-1] < 5:
            bad.append(f"{family}: only {counts[-1]} distinct submodules")
    outcome(11, "distinct probe submodules strictly grow over D in {6,8,10}",
            not bad, "; ".join(bad))


def test_ac12_deterministic_reports(outcome, tmp_path):
    payloads = []
    for name in ("first.json", "second.json"):
        sink = tmp_path / name
        rc = cli.main(["verify", "ore", "--r", "2", "--degree", "8",
                       "--seed", "2024", "--quiet", "--json", str(sink)])
        lines = [ln for ln in sink.read_text().splitlines()
                 if '"timestamp"' not in ln]
        payloads.append((rc, "\n".join(lines)))
    ok = payloads[0] == payloads[1] and payloads[0][0] == 0
    parsed = json.loads((tmp_path / "first.json").read_text())
    ok = ok and parsed["overall"] == "pass"
    outcome(12, "repeated runs emit byte-identical reports minus timestamp",
            ok)
