"""The four worked constructions and their verification battery.

Each family bundles a presentation with the data of one extension
0 -> Ax/Jx -> A/Jx -> A/Ax -> 0: a normal element w and its twist
sigma, a maximal left ideal J containing w - mu (mu nonzero), and a
non-unit x.  check_assumptions runs the six structural requirements at
a weight cap; build_monolith assembles the extension and probes the
quotient's submodules for essentiality of the socle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .algebra import (
    DOWN_UP,
    FAMILIES,
    GeneratorMap,
    InvalidParameter,
    NcPoly,
    ORE,
    QUANTUM_PLANE,
    SolvablePresentation,
    UnsupportedFamily,
    WEYL,
    apply_map_power,
    build_presentation,
    multiply,
    normal_form,
    power,
    verify_generator_map,
    verify_normal_element,
    verify_presentation_consistency,
)
from .linalg import Subspace, from_vectors, vec_axpy, vec_scale
from .modules import (
    ProbeConfig,
    TruncatedModule,
    act,
    assemble_module,
    build_cyclic_module,
    essentiality_check,
    generated_submodule,
    is_simple_truncated,
    project_poly,
    random_module_vector,
    solve_module_morphism,
    submodule_chain_check,
    truncate_ideal,
)
from .reports import FAIL, INFO, PASS, CheckReport
from .scalars import RAT, RATFUN, Scalar, UniPoly, parse_scalar


class ConstructionError(Exception):
    pass


class MuZero(ConstructionError):
    """w is congruent to 0 modulo J; the construction needs mu != 0."""


class AssumptionFailed(ConstructionError):
    def __init__(self, assumption: int, report=None):
        self.assumption = assumption
        self.report = report
        detail = ""
        if report is not None and report.witnesses:
            detail = f": {report.witnesses[0]}"
        super().__init__(f"assumption ({assumption}) failed{detail}")


class ExactnessMismatch(ConstructionError):
    pass


class DegenerateLinearCoefficient(ConstructionError):
    pass


class IdentityFailed(ConstructionError):
    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class DualityFailed(ConstructionError):
    pass


class FiltrationViolation(ConstructionError):
    pass


# ---------------------------------------------------------------------------
# family specifications


def _canon_family(name: str) -> str:
    key = name.strip().lower().replace("-", "_").replace(" ", "_")
    if key not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {name!r}")
    return key


def _coerce_scalar(value, like: Scalar = None):
    """Lift ints, Fractions and flag strings into a Scalar."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        text = value.strip()
        if like is not None and like.kind == RATFUN:
            return parse_scalar(text, RATFUN)
        if "t" in text:
            return parse_scalar(text, RATFUN)
        return parse_scalar(text, RAT)
    frac = Fraction(value)
    if like is not None and like.kind == RATFUN:
        return Scalar.one(RATFUN) * frac
    return Scalar.rational(frac)


FAMILY_DEFAULTS = {
    QUANTUM_PLANE: {"parameter": "t"},
    WEYL: {"parameter": "t"},
    ORE: {"r": 2},
    DOWN_UP: {"parameter": 2, "kappa": 2},
}


@dataclass
class MonolithSpec:
    """All data one construction needs, with the twist already verified."""

    family: str
    presentation: SolvablePresentation
    w_elem: NcPoly
    mu: Scalar
    sigma: GeneratorMap
    J_gens: list
    x: NcPoly
    complement_name: str
    complement_of_m: object  # m -> NcPoly spanning the candidate complement
    full_complement: bool
    margin_hint: int = None  # probe margin when the config leaves it open
    extras: dict = field(default_factory=dict)

    def tune(self, cfg):
        """Fill in the family's probe margin unless the caller fixed one."""
        if cfg.margin is None and self.margin_hint is not None:
            return replace(cfg, margin=self.margin_hint)
        return cfg

    def describe(self) -> dict:
        pres = self.presentation
        out = {
            "family": self.family,
            "w": pres.render_poly(self.w_elem),
            "mu": self.mu.render(),
            "x": pres.render_poly(self.x),
            "J_gens": [pres.render_poly(g) for g in self.J_gens],
            "complement": self.complement_name,
        }
        if pres.parameter is not None:
            out["parameter"] = pres.parameter.render()
        if pres.r is not None:
            out["r"] = pres.r
        if "kappa" in self.extras:
            out["kappa"] = self.extras["kappa"].render()
        return out


def make_spec(family: str, parameter=None, kappa=None, r=None) -> MonolithSpec:
    family = _canon_family(family)
    pres = None
    if family == QUANTUM_PLANE:
        q = _coerce_scalar(parameter if parameter is not None else "t")
        pres = build_presentation(QUANTUM_PLANE, q)
        a, b = pres.gen("a"), pres.gen("b")
        one = pres.one()
        w = multiply(pres, a, b)
        sigma = GeneratorMap([a.scale(q.inverse()), b.scale(q)])
        spec = MonolithSpec(
            family, pres, w, Scalar.one(pres.kind), sigma,
            [w - one], a - one, "K[a]", lambda m: a, False,
            # no relation here drops weight, so a three-component probe
            # needs an extra step of headroom to separate before it stalls
            margin_hint=3,
        )
    elif family == WEYL:
        q = _coerce_scalar(parameter if parameter is not None else "t")
        pres = build_presentation(WEYL, q)
        a, b = pres.gen("a"), pres.gen("b")
        one = pres.one()
        w = multiply(pres, a, b) - multiply(pres, b, a)
        sigma = GeneratorMap([a.scale(q.inverse()), b.scale(q)])
        x = b.scale(Scalar.one(pres.kind) - q) - one
        spec = MonolithSpec(
            family, pres, w, Scalar.one(pres.kind), sigma,
            [a], x, "K[b]", lambda m: b, True,
        )
    elif family == ORE:
        r = int(r if r is not None else FAMILY_DEFAULTS[ORE]["r"])
        pres = build_presentation(ORE, r=r)
        b, a = pres.gen("b"), pres.gen("a")
        one = pres.one()
        a_idx = pres.gen_index("a")
        sigma = GeneratorMap([b + pres.word_poly((a_idx,) * (r - 1)), a])
        x = b - one
        spec = MonolithSpec(
            family, pres, a, Scalar.one(pres.kind), sigma,
            [a - one], x, "K[sigma^m(x)]",
            lambda m: apply_map_power(pres, sigma, m, x), True,
            extras={"r": r},
        )
    elif family == DOWN_UP:
        eta = _coerce_scalar(
            parameter if parameter is not None else FAMILY_DEFAULTS[DOWN_UP]["parameter"]
        )
        pres = build_presentation(DOWN_UP, eta)
        consts = pres.constants
        if not (consts["alpha"] + consts["beta"]).is_one():
            raise InvalidParameter("down-up constants must satisfy alpha + beta = 1")
        kap = _coerce_scalar(
            kappa if kappa is not None else FAMILY_DEFAULTS[DOWN_UP]["kappa"], like=eta
        )
        mu = consts["eps"] - kap
        if mu.is_zero():
            raise MuZero(
                f"kappa = eps = {consts['eps'].render()} makes w lie in J; "
                "pick a different lowest weight"
            )
        u, w, d = pres.gen("u"), pres.gen("w"), pres.gen("d")
        one = pres.one()
        sigma = GeneratorMap([u.scale(eta), w, d.scale(eta.inverse())])
        ud = multiply(pres, u, d)
        spec = MonolithSpec(
            family, pres, w, mu, sigma,
            [u, ud - pres.const(kap)], d - one, "K[d]", lambda m: d, True,
            # descent through d u -> u d + w - eps needs extra headroom
            margin_hint=6,
            extras={"kappa": kap, "constants": consts},
        )
    else:  # pragma: no cover - _canon_family already screens
        raise UnsupportedFamily(family)

    if spec.presentation.poly_weight(spec.x) < 1:
        raise InvalidParameter("x must have positive weight (it may not be a unit)")
    verify_generator_map(spec.presentation, spec.sigma, strict=True)
    verify_normal_element(spec.presentation, spec.w_elem, spec.sigma, strict=True)
    return spec


# ---------------------------------------------------------------------------
# assumption battery


def _poly_coords(pres, idx, p: NcPoly) -> dict:
    return {idx.pos[w]: c for w, c in p.terms.items()}


def _random_poly(pres, rng, bound, max_weight) -> NcPoly:
    words = pres.monomial_index(max_weight).words
    for _ in range(64):
        terms = {}
        for w in rng.sample(words, min(3, len(words))):
            c = rng.randint(-bound, bound)
            if c:
                terms[w] = pres.scalar(c)
        if terms:
            return NcPoly(terms)
    return pres.one()


def _graded_product_check(pres, cfg: ProbeConfig, family: str) -> CheckReport:
    """No top-degree cancellation in products: domain evidence."""
    rng = cfg.rng(f"domain/{family}")
    trials = max(cfg.probes, 8)
    for i in range(trials):
        f = _random_poly(pres, rng, cfg.coefficient_bound, 3)
        g = _random_poly(pres, rng, cfg.coefficient_bound, 3)
        prod = multiply(pres, f, g)
        if pres.poly_weight(prod) != pres.poly_weight(f) + pres.poly_weight(g):
            return CheckReport(
                "graded_product", FAIL,
                parameters={"family": family, "trial": i},
                witnesses=[f"deg({pres.render_poly(f)} * {pres.render_poly(g)}) "
                           "dropped below the sum of degrees"],
            )
    return CheckReport(
        "graded_product", PASS,
        parameters={"family": family, "trials": trials, "seed": cfg.seed},
        notes=["leading weights add, so no zero divisors were visible"],
    )


def _assumption_four(spec, J_t, D, m_max, cfg) -> CheckReport:
    """No a solves sigma^m(x) a = 1 mod J; plus complement evidence.

    The direct probe spans {sigma^m(x) * monomial} + J at the cap and
    asks whether 1 fell in.  The complement checks follow the usual
    reduction (sigma^m(x) inside a sigma-stable complement B of J), with
    the fill-the-slice half skipped for families whose stated B is a
    proper subspace of a complement.
    """
    pres = spec.presentation
    idx = pres.monomial_index(D)
    one_vec = _poly_coords(pres, idx, pres.one())
    witnesses = []
    per_m = []
    for m in range(m_max + 1):
        y = apply_map_power(pres, spec.sigma, m, spec.x)
        wy = pres.poly_weight(y)
        if wy > D:
            witnesses.append(f"m={m}: sigma^m(x) already heavier than D")
            break
        reach = J_t.copy()
        for word in pres.monomial_index(D - wy).words:
            prod = multiply(pres, y, pres.word_poly(word))
            reach.insert(_poly_coords(pres, idx, prod))
        solvable = reach.contains(one_vec)
        if solvable:
            witnesses.append(
                f"m={m}: sigma^m(x)*a = 1 has a solution within weight {D - wy}"
            )

        bgen = normal_form(pres, spec.complement_of_m(m))
        pows = [pres.one()]
        while pres.poly_weight(multiply(pres, pows[-1], bgen)) <= D:
            pows.append(multiply(pres, pows[-1], bgen))
        span = from_vectors(idx.dim, [_poly_coords(pres, idx, p) for p in pows])
        entry = {
            "m": m,
            "reach_rank": reach.rank,
            "span_rank": span.rank,
            "in_span": span.contains(_poly_coords(pres, idx, y)),
            "meets_J": span.intersect(J_t).rank,
        }
        if not entry["in_span"]:
            witnesses.append(f"m={m}: sigma^m(x) is outside {spec.complement_name}")
        if entry["meets_J"]:
            witnesses.append(f"m={m}: complement span meets J nontrivially")
        closed = True
        wts = [pres.poly_weight(p) for p in pows]
        for i in range(len(pows)):
            for j in range(len(pows)):
                # weights add in a domain, so heavy pairs cannot land in the window
                if wts[i] + wts[j] > D:
                    continue
                prod = multiply(pres, pows[i], pows[j])
                if not span.contains(_poly_coords(pres, idx, prod)):
                    closed = False
        if not closed:
            witnesses.append(f"m={m}: complement span not closed under products")
        if spec.full_complement:
            entry["fills_slice"] = span.sum(J_t).rank == idx.dim
            if not entry["fills_slice"]:
                witnesses.append(f"m={m}: span + J misses part of the slice")
        per_m.append(entry)
    notes = []
    if not spec.full_complement:
        notes.append(
            f"{spec.complement_name} + J does not fill the slice for this family; "
            "the direct no-solution probe above carries the check instead"
        )
    return CheckReport(
        "no_unit_solution", FAIL if witnesses else PASS,
        parameters={
            "family": spec.family, "D": D, "m_max": m_max,
            "full_complement": spec.full_complement,
        },
        witnesses=witnesses,
        dimensions=[e["reach_rank"] for e in per_m],
        notes=notes + [
            f"m={e['m']}: reach rank {e['reach_rank']}, span rank {e['span_rank']}"
            for e in per_m
        ],
    )


@dataclass
class AssumptionChecklist:
    spec: MonolithSpec
    D: int
    entries: list  # (assumption number, CheckReport)

    @property
    def reports(self) -> list:
        return [rep for _, rep in self.entries]

    @property
    def ok(self) -> bool:
        return all(rep.ok for rep in self.reports)

    def require(self) -> "AssumptionChecklist":
        for k, rep in self.entries:
            if not rep.ok:
                raise AssumptionFailed(k, rep)
        return self


def check_assumptions(spec: MonolithSpec, D=8, m_max=3, cfg=None,
                      slack=2, slack_cap=None) -> AssumptionChecklist:
    """Run the six structural requirements at weight cap D.

    (1) consistent presentation of a graded domain, (2) w normal with
    twist sigma, (3) w - mu inside J with A/J simple, (4) no unit
    solution against sigma^m(x), (5)+(6) strict descent and cofinality
    of the chain w^m N inside N = A/Ax.
    """
    cfg = spec.tune(cfg or ProbeConfig())
    pres = spec.presentation
    entries = []
    entries.append((1, verify_presentation_consistency(pres, strict=False)))
    entries.append((1, _graded_product_check(pres, cfg, spec.family)))
    entries.append((2, verify_normal_element(pres, spec.w_elem, spec.sigma,
                                             strict=False)))

    J_t, slack_used = truncate_ideal(pres, spec.J_gens, D, slack, slack_cap)
    idx = pres.monomial_index(D)
    wmu = spec.w_elem - pres.const(spec.mu)
    member = J_t.contains(_poly_coords(pres, idx, wmu))
    entries.append((3, CheckReport(
        "ideal_contains_w_minus_mu", PASS if member else FAIL,
        parameters={"family": spec.family, "D": D, "slack": slack_used,
                    "mu": spec.mu.render()},
        witnesses=[] if member else
        [f"w - mu = {pres.render_poly(wmu)} escaped the truncated ideal"],
        dimensions=[J_t.rank],
    )))
    AJ = build_cyclic_module(pres, spec.J_gens, D, slack, slack_cap,
                             name=f"{spec.family}:A/J")
    entries.append((3, is_simple_truncated(AJ, cfg)))

    entries.append((4, _assumption_four(spec, J_t, D, m_max, cfg)))

    N = build_cyclic_module(pres, [spec.x], D, slack, slack_cap,
                            name=f"{spec.family}:N")
    chain = submodule_chain_check(N, spec.w_elem, m_max, cfg)
    k = 5
    if not chain.ok and chain.witnesses and all(
            w.startswith("probe") for w in chain.witnesses):
        k = 6
    entries.append((k, chain))
    return AssumptionChecklist(spec, D, entries)


# ---------------------------------------------------------------------------
# the extension itself


@dataclass
class MonolithResult:
    spec: MonolithSpec
    D: int
    M: TruncatedModule
    N: TruncatedModule
    L: Subspace
    reports: list

    @property
    def ok(self) -> bool:
        return all(rep.ok for rep in self.reports)


def build_monolith(spec: MonolithSpec, D=8, cfg=None,
                   slack=2, slack_cap=None) -> MonolithResult:
    """Assemble M = A/Jx with socle L = Ax/Jx and quotient N = A/Ax.

    Verifies the truncated exact sequence on dimensions and on the
    projection kernel, then probes essentiality of L in M.
    """
    cfg = spec.tune(cfg or ProbeConfig())
    pres = spec.presentation
    Jx = [multiply(pres, g, spec.x) for g in spec.J_gens]
    M = build_cyclic_module(pres, Jx, D, slack, slack_cap,
                            name=f"{spec.family}:M")
    N = build_cyclic_module(pres, [spec.x], D, slack, slack_cap,
                            name=f"{spec.family}:N")
    Ax_t, _ = truncate_ideal(pres, [spec.x], D, slack, slack_cap)
    idx = pres.monomial_index(D)
    dim_Jx = idx.dim - M.dim
    expected_L = Ax_t.rank - dim_Jx
    L = generated_submodule(M, [project_poly(M, spec.x)])

    # the natural surjection M -> N, column by column on coset labels
    pi = [project_poly(N, pres.word_poly(word)) for word in M.labels]
    kernel_ok = True
    for row in L.rows:
        image: dict = {}
        for p, c in row.items():
            image = vec_axpy(image, c, pi[p])
        if image:
            kernel_ok = False
            break
    surjective = from_vectors(N.dim, pi).rank == N.dim
    problems = []
    if expected_L <= 0:
        problems.append(f"socle slice has dimension {expected_L}")
    if L.rank != expected_L:
        problems.append(f"closure of x has rank {L.rank}, slice says {expected_L}")
    if M.dim != expected_L + N.dim:
        problems.append(f"dim M = {M.dim} != {expected_L} + {N.dim}")
    if not kernel_ok:
        problems.append("L does not map to zero in N")
    if not surjective:
        problems.append("M does not surject onto N")
    if problems:
        raise ExactnessMismatch("; ".join(problems))
    rep_exact = CheckReport(
        "exact_sequence", PASS,
        parameters={"family": spec.family, "D": D},
        dimensions=[L.rank, M.dim, N.dim],
        notes=["dim M = dim L + dim N and the projection kills exactly L"],
    )
    rep_ess = essentiality_check(M, L, cfg)
    signature = bool(rep_ess.parameters.get("monolith_signature"))
    rep_sig = CheckReport(
        "monolith_signature", PASS if (rep_ess.ok and signature) else FAIL,
        parameters={"family": spec.family, "D": D, "signature": signature},
        notes=["intersection of all probe closures is exactly the socle slice"]
        if signature else
        ["probe closures do not intersect down to the socle"],
    )
    return MonolithResult(spec, D, M, N, L, [rep_exact, rep_ess, rep_sig])


def distinct_probe_submodules(spec: MonolithSpec, D, cfg=None,
                              per_layer=2) -> tuple:
    """Count distinct probe-generated submodules of N = A/Ax.

    Probes are stratified: random low-weight vectors pushed down by
    powers of w, so deeper chain members stay visible.  Returns
    (count, sorted ranks).
    """
    cfg = spec.tune(cfg or ProbeConfig())
    pres = spec.presentation
    N = build_cyclic_module(pres, [spec.x], D, name=f"{spec.family}:N")
    wt_w = pres.poly_weight(spec.w_elem)
    seen = set()
    layer = 0
    while True:
        room = D - layer * wt_w
        if room < 0:
            break
        found = False
        for t in range(per_layer):
            rng = cfg.rng(f"distinct/{spec.family}/{layer}/{t}")
            v = random_module_vector(N, rng, cfg.coefficient_bound,
                                     min(2, room))
            if not v:
                continue
            for _ in range(layer):
                v = act(N, spec.w_elem, v)
            if not v:
                continue
            seen.add(generated_submodule(N, [v]))
            found = True
        if not found:
            break
        layer += 1
    ranks = sorted({s.rank for s in seen})
    return len(seen), ranks


# ---------------------------------------------------------------------------
# highest / lowest weight modules


def weight_sequence(eta, initial, n_max, flavor="verma") -> list:
    """lambda_0..lambda_n for V(lambda), or kappa_0..kappa_n for W(kappa)."""
    eta = _coerce_scalar(eta)
    if eta.is_zero():
        raise InvalidParameter("eta must be nonzero")
    initial = _coerce_scalar(initial, like=eta)
    one = Scalar.one(eta.kind)
    alpha = one + eta
    prev2, prev = Scalar.zero(eta.kind), initial
    seq = [initial]
    for _ in range(n_max):
        if flavor == "verma":
            nxt = alpha * prev - eta * prev2 + one
        elif flavor == "lowest":
            nxt = eta.inverse() * (alpha * prev - prev2 + one)
        else:
            raise InvalidParameter(f"unknown weight flavor {flavor!r}")
        seq.append(nxt)
        prev2, prev = prev, nxt
    return seq


def verma_module(eta, lam, D) -> TruncatedModule:
    """V(lambda) truncated at weight D: u raises, d lowers by lambda_n."""
    eta = _coerce_scalar(eta)
    pres = build_presentation(DOWN_UP, eta)
    eps = pres.constants["eps"]
    lams = weight_sequence(eta, lam, D, "verma")
    one = Scalar.one(pres.kind)
    zero = Scalar.zero(pres.kind)
    u_i, d_i = pres.gen_index("u"), pres.gen_index("d")

    def action(g, label):
        n = int(label[1:])
        if g == u_i:
            return {f"v{n + 1}": one} if n < D else None
        if g == d_i:
            return {} if n == 0 else {f"v{n - 1}": lams[n - 1]}
        if n >= D:  # w = du - ud + eps needs u defined at n
            return None
        below = lams[n - 1] if n else zero
        return {label: lams[n] - below + eps}

    return assemble_module(pres, D, [(f"v{n}", n) for n in range(D + 1)],
                           action, cyclic_label="v0",
                           name=f"V({lams[0].render()})")


def lowest_weight_module(eta, kappa, D) -> TruncatedModule:
    """W(kappa) truncated at weight D: d raises, u lowers by kappa_n."""
    eta = _coerce_scalar(eta)
    pres = build_presentation(DOWN_UP, eta)
    eps = pres.constants["eps"]
    kaps = weight_sequence(eta, kappa, D, "lowest")
    one = Scalar.one(pres.kind)
    zero = Scalar.zero(pres.kind)
    u_i, d_i = pres.gen_index("u"), pres.gen_index("d")

    def action(g, label):
        n = int(label[1:])
        if g == d_i:
            return {f"a{n + 1}": one} if n < D else None
        if g == u_i:
            return {} if n == 0 else {f"a{n - 1}": kaps[n - 1]}
        if n >= D:  # w = -ud + du + eps needs d defined at n
            return None
        below = kaps[n - 1] if n else zero
        return {label: eps + below - kaps[n]}

    return assemble_module(pres, D, [(f"a{n}", n) for n in range(D + 1)],
                           action, cyclic_label="a0",
                           name=f"W({kaps[0].render()})")


def singular_weights(eta, n_max) -> list:
    """Solve lambda_n = 0 for the highest weight, one record per n.

    lambda_n is linear in lambda: A_n * lambda + B_n with the same
    two-term recurrence.  Each record also evaluates the shifted
    closed-form candidate for comparison; disagreement is recorded, not
    judged.
    """
    eta = _coerce_scalar(eta)
    if eta.is_zero():
        raise InvalidParameter("eta must be nonzero")
    one = Scalar.one(eta.kind)
    zero = Scalar.zero(eta.kind)
    alpha = one + eta
    A2, A1 = zero, one          # A_{-1}, A_0
    B2, B1 = zero, zero         # B_{-1}, B_0
    geo = one                   # sum of eta^i for i <= n
    eta_pow = one
    records = []
    for n in range(n_max + 1):
        if n > 0:
            A1, A2 = alpha * A1 - eta * A2, A1
            B1, B2 = alpha * B1 - eta * B2 + one, B1
            eta_pow = eta_pow * eta
            geo = geo + eta_pow
        if A1 != geo:  # closed form of the linear part; exact identity
            raise ConstructionError(f"linear coefficient drifted at n={n}")
        if A1.is_zero():
            raise DegenerateLinearCoefficient(
                f"lambda_{n} does not depend invertibly on lambda"
            )
        lam = -(B1 / A1)
        # the printed closed form indexes the same root one step later
        shifted_sum = geo + eta_pow * eta
        candidate = -(one - shifted_sum.inverse() * Fraction(n + 1)) \
            / (eta - one)
        records.append({
            "n": n,
            "lambda": lam,
            "closed_form_shifted": candidate,
            "agrees": lam == candidate,
        })
    return records


# ---------------------------------------------------------------------------
# family-specific identities and oracles


def weyl_N_closed_form(q, D) -> TruncatedModule:
    """N = A/Ax in the eigenbasis u_n: b scales, a mixes two steps."""
    q = _coerce_scalar(q)
    pres = build_presentation(WEYL, q)
    one = Scalar.one(pres.kind)
    s = (one - q).inverse()
    a_i = pres.gen_index("a")

    def action(g, label):
        n = int(label[1:])
        if g == a_i:
            if n >= D:
                return None
            qn = q ** n
            return {label: qn, f"u{n + 1}": qn}
        return {label: (q ** (-n)) * s}

    return assemble_module(pres, D, [(f"u{n}", n) for n in range(D + 1)],
                           action, cyclic_label="u0",
                           name=f"weyl:N-closed(q={q.render()})")


def weyl_closed_form_check(q, D, slack=2, slack_cap=None) -> CheckReport:
    """Truncated A/Ax must match the closed form under u_{n+1} = (q^-n a - 1) u_n."""
    q = _coerce_scalar(q)
    pres = build_presentation(WEYL, q)
    one_s = Scalar.one(pres.kind)
    a, b = pres.gen("a"), pres.gen("b")
    x = b.scale(one_s - q) - pres.one()
    Nt = build_cyclic_module(pres, [x], D, slack, slack_cap, name="weyl:N")
    s = (one_s - q).inverse()
    T = [project_poly(Nt, pres.one())]
    cur = pres.one()
    for n in range(D):
        cur = multiply(pres, a.scale(q ** (-n)) - pres.one(), cur)
        T.append(project_poly(Nt, cur))
    if from_vectors(Nt.dim, T).rank != D + 1 or Nt.dim != D + 1:
        return CheckReport(
            "weyl_closed_form", FAIL,
            parameters={"q": q.render(), "D": D},
            witnesses=["u_n do not form a basis of the truncated module"],
            dimensions=[Nt.dim, from_vectors(Nt.dim, T).rank],
        )
    witnesses = []
    for n in range(D):
        qn = q ** n
        want_a = vec_axpy(vec_scale(T[n], qn), qn, T[n + 1])
        if act(Nt, a, T[n]) != want_a:
            witnesses.append(f"a*u_{n} disagrees with q^n(u_{n} + u_{n+1})")
        want_b = vec_scale(T[n], (q ** (-n)) * s)
        if act(Nt, b, T[n]) != want_b:
            witnesses.append(f"b*u_{n} disagrees with q^-n/(1-q) u_{n}")
    return CheckReport(
        "weyl_closed_form", FAIL if witnesses else PASS,
        parameters={"q": q.render(), "D": D},
        witnesses=witnesses, dimensions=[Nt.dim],
        notes=["basis change u_{n+1} = (q^-n a - 1) u_n against A/Ax"],
    )


def ore_submodule_classification(r, D, cfg=None) -> CheckReport:
    """Probe closures in N = A/A(b-1): each one is A times a power of a.

    A probe of a-order k0 (lowest surviving power of a) must generate
    exactly the closure of the a^k0 coset, and those closures must
    descend strictly: the submodules of N form a single chain.
    """
    cfg = cfg or ProbeConfig()
    pres = build_presentation(ORE, r=r)
    b, a = pres.gen("b"), pres.gen("a")
    N = build_cyclic_module(pres, [b - pres.one()], D, name=f"ore(r={r}):N")
    tails = [generated_submodule(N, [project_poly(N, power(pres, a, k))])
             for k in range(D + 1)]
    witnesses = []
    for k in range(D):
        if not tails[k + 1].is_subspace_of(tails[k]) \
                or tails[k + 1].rank >= tails[k].rank:
            witnesses.append(f"a^{k + 1} tail does not descend strictly")
    # probes stay below the window top: a vector supported at weight D is
    # outside every generator's recorded action and its closure stalls
    cap = max(1, D - cfg.resolve_margin(pres))
    degrees = []
    for i in range(cfg.probes):
        rng = cfg.rng(f"ore-class/{r}/{i}")
        k0 = rng.randrange(cap + 1)
        coeffs = {k0: 1}
        for k in range(k0 + 1, cap + 1):
            c = rng.randint(-cfg.coefficient_bound, cfg.coefficient_bound)
            if c:
                coeffs[k] = c
        p = NcPoly.zero()
        for k, c in coeffs.items():
            p = p + power(pres, a, k).scale(pres.scalar(c))
        sub = generated_submodule(N, [project_poly(N, p)])
        degrees.append(k0)
        if sub != tails[k0]:
            witnesses.append(
                f"closure of the coset of {pres.render_poly(p)} is not "
                f"the a^{k0} tail"
            )
        witnesses.extend(_monomial_if_stable(coeffs, r))
    # the powers of a themselves are the stable generators: d(a^k) lands in
    # a^k K[a], and the inspection must accept every one of them
    for k in range(D + 1):
        witnesses.extend(_monomial_if_stable({k: 1}, r))
    return CheckReport(
        "ore_submodule_classification", FAIL if witnesses else PASS,
        parameters={"r": r, "D": D, "probes": cfg.probes, "seed": cfg.seed},
        witnesses=witnesses,
        dimensions=[t.rank for t in tails],
        notes=["every probed submodule is generated by a power of a",
               f"lowest degrees probed: {sorted(set(degrees))}"],
    )


def _monomial_if_stable(coeffs: dict, r: int) -> list:
    """Witness list for: d(p) in pK[a] forces p = (scalar) * a^k.

    d(p) = p'(a) a^r for p in K[a], so stability under the derivation is a
    plain divisibility test; stable probes must be monomials.
    """
    top = max(coeffs)
    p = UniPoly([Fraction(coeffs.get(i, 0)) for i in range(top + 1)])
    dp = UniPoly([Fraction(0)] * r + [i * coeffs.get(i, 0)
                                      for i in range(1, top + 1)])
    _, rem = divmod(dp, p)
    if not rem.is_zero():
        return []
    if len(coeffs) == 1:
        return []
    return [f"derivation-stable probe {p.render()} is not a power of a"]


def ore_slice_module(r, m, D, pres=None) -> TruncatedModule:
    """The submodule a^m K[a] of N = A/A(b-1), on its own basis."""
    if m > D:
        raise InvalidParameter(f"slice a^{m} is empty at cap {D}")
    if pres is None:
        pres = build_presentation(ORE, r=r)
    one = Scalar.one(pres.kind)
    wt_b = pres.weights[pres.gen_index("b")]
    a_i = pres.gen_index("a")

    def action(g, label):
        k = int(label[1:])
        if g == a_i:
            return {f"a{k + 1}": one} if k < D else None
        if k + wt_b > D:
            return None
        col = {label: one}
        hi = f"a{k + r - 1}"
        col[hi] = col.get(hi, Scalar.zero(pres.kind)) - pres.scalar(k)
        return col

    return assemble_module(pres, D, [(f"a{k}", k) for k in range(m, D + 1)],
                           action, cyclic_label=f"a{m}",
                           name=f"ore(r={r}):a^{m}N")


def ore_nonisomorphism(r, m, m1, D, expect=None):
    """Graded morphism space a^m N -> a^m1 N; 0 unless the slices agree."""
    if m > D or m1 > D:
        rep = CheckReport(
            "ore_nonisomorphism", INFO,
            parameters={"r": r, "m": m, "m1": m1, "D": D},
            notes=["slice empty at this cap; no claim"],
        )
        return rep, None
    pres = build_presentation(ORE, r=r)
    src = ore_slice_module(r, m, D, pres)
    dst = ore_slice_module(r, m1, D, pres)
    ms = solve_module_morphism(src, dst, shift=m1 - m)
    if expect is None:
        expect = 1 if m == m1 else 0
    status = PASS if ms.dimension == expect else FAIL
    return CheckReport(
        "ore_nonisomorphism", status,
        parameters={"r": r, "m": m, "m1": m1, "D": D, "shift": m1 - m,
                    "skipped_equations": ms.skipped},
        dimensions=[ms.dimension],
        witnesses=[] if status == PASS else
        [f"morphism space has dimension {ms.dimension}, expected {expect}"],
    ), ms


def ore_e1_identity(r, n_max, D=None) -> CheckReport:
    """(a-1)^n b^n = n! holds in A/A(a-1); raises IdentityFailed."""
    pres = build_presentation(ORE, r=r)
    one = pres.one()
    a = pres.gen("a")
    b_i = pres.gen_index("b")
    wt_b = pres.weights[b_i]
    if D is None:
        D = n_max * (1 + wt_b)
    Q = build_cyclic_module(pres, [a - one], D, name=f"ore(r={r}):A/J")
    v0 = project_poly(Q, one)
    for n in range(n_max + 1):
        vn = project_poly(Q, pres.word_poly((b_i,) * n))
        lhs = act(Q, power(pres, a - one, n), vn)
        rhs = vec_scale(v0, pres.scalar(math.factorial(n)))
        if lhs != rhs:
            raise IdentityFailed(
                f"(a-1)^{n} b^{n} = {math.factorial(n)} fails in A/A(a-1) "
                f"at r={r}: got {Q.render_vector(lhs)}", n=n)
    return CheckReport(
        "ore_e1_identity", PASS,
        parameters={"r": r, "n_max": n_max, "D": D},
        notes=[f"(a-1)^n b^n = n! verified for n <= {n_max}"],
    )


def down_up_duality_check(eta, images=None) -> CheckReport:
    """The u <-> d swap lands in the eta^-1 algebra; raises DualityFailed.

    Sends u -> eta^-1 d', w -> -eta^-1 w', d -> u' and pushes the
    defining relations through; all three must reduce to zero on the
    other side.
    """
    eta = _coerce_scalar(eta)
    src = build_presentation(DOWN_UP, eta)
    dst = build_presentation(DOWN_UP, eta.inverse())
    if images is None:
        images = [dst.gen("d").scale(eta.inverse()),
                  dst.gen("w").scale(-eta.inverse()),
                  dst.gen("u")]
    one = Scalar.one(src.kind)
    c = src.constants
    relations = [
        ("R1", NcPoly({(2, 2, 0): one, (2, 0, 2): -c["alpha"],
                       (0, 2, 2): -c["beta"], (2,): -c["gamma"]})),
        ("R2", NcPoly({(2, 0, 0): one, (0, 2, 0): -c["alpha"],
                       (0, 0, 2): -c["beta"], (0,): -c["gamma"]})),
        ("w-def", NcPoly({(1,): one, (2, 0): -one, (0, 2): one,
                          (): -c["eps"]})),
    ]
    bad = []
    for name, rel in relations:
        out = NcPoly()
        for word, coeff in rel.terms.items():
            acc = dst.one()
            for g in word:
                acc = multiply(dst, acc, images[g])
            out = out + acc.scale(coeff)
        out = normal_form(dst, out)
        if not out.is_zero():
            bad.append(f"{name} maps to {dst.render_poly(out)}")
    if bad:
        raise DualityFailed("; ".join(bad))
    return CheckReport(
        "down_up_duality", PASS,
        parameters={"eta": eta.render(),
                    "images": [dst.render_poly(p) for p in images]},
        notes=["R1, R2 and the w relation all die in the eta^-1 algebra"],
    )


def down_up_socle_comparison(eta, kappa, D=10, slack=2,
                             slack_cap=None) -> CheckReport:
    """The socle of the down-up monolith carries the W(kappa) action.

    Sending the class of x = d - 1 to a_0 matches d^n(class of x) with
    a_n; the u, w, d action matrices must then agree entrywise, and the
    matched vectors must exhaust the socle.  Raises IdentityFailed on a
    mismatch.
    """
    spec = make_spec(DOWN_UP, parameter=eta, kappa=kappa)
    pres = spec.presentation
    Jx = [multiply(pres, g, spec.x) for g in spec.J_gens]
    M = build_cyclic_module(pres, Jx, D, slack, slack_cap,
                            name="down-up:M")
    L = generated_submodule(M, [project_poly(M, spec.x)])
    W = lowest_weight_module(eta, kappa, D)
    kaps = weight_sequence(eta, kappa, D, "lowest")
    eps = pres.constants["eps"]
    u, w, d = pres.gen("u"), pres.gen("w"), pres.gen("d")
    minus = -Scalar.one(pres.kind)

    # e_n = d^n . class(x) plays a_n; weights shift by one but the
    # matrices must match wherever both windows define the action
    e = [project_poly(M, spec.x)]
    while M.vector_weight(e[-1]) + 1 <= D:
        e.append(act(M, d, e[-1]))
    bad = []
    if from_vectors(M.dim, e).rank != len(e):
        bad.append("the d-orbit of the class of x is linearly dependent")
    if L.rank != len(e):
        bad.append(f"socle rank {L.rank} != {len(e)} matched vectors")
    zero = Scalar.zero(pres.kind)
    for n in range(len(e)):
        expect = [
            (u, vec_scale(e[n - 1], kaps[n - 1]) if n else {}),
            (w, vec_scale(e[n], eps + (kaps[n - 1] if n else zero)
                          - kaps[n])),
        ]
        for g, rhs in expect:
            if M.vector_weight(e[n]) + pres.poly_weight(g) > D:
                continue
            diff = vec_axpy(act(M, g, e[n]), minus, rhs)
            if diff:
                name = pres.render_poly(g)
                bad.append(f"{name} on e_{n} disagrees with W({kappa})")
    if bad:
        raise IdentityFailed("; ".join(bad))
    return CheckReport(
        "down_up_socle_comparison", PASS,
        parameters={"eta": _coerce_scalar(eta).render(),
                    "kappa": str(kappa), "D": D},
        dimensions=[L.rank, W.dim],
        notes=[f"u, w, d matrices of the socle match W({kappa}) on "
               f"{len(e)} basis vectors under class(x) -> a_0"],
    )


def e101_identity_check(spec: MonolithSpec, m_max=3, cfg=None, D=None,
                        slack=2, slack_cap=None) -> CheckReport:
    """sigma^m(x)(w^m - a x) - (1 - sigma^m(x) a) x lies in Jx.

    w is normalized by mu first so that w - 1 sits in J; membership is
    then exact in the truncated ideal.  Raises IdentityFailed.
    """
    cfg = spec.tune(cfg or ProbeConfig())
    pres = spec.presentation
    one = pres.one()
    w_n = spec.w_elem.scale(spec.mu.inverse())
    probes = [("zero", NcPoly())]
    for i in range(cfg.probes):
        rng = cfg.rng(f"e101/{spec.family}/{i}")
        probes.append((f"probe {i}",
                       _random_poly(pres, rng, cfg.coefficient_bound, 2)))
    exprs = []
    for m in range(m_max + 1):
        y = apply_map_power(pres, spec.sigma, m, spec.x)
        wm = power(pres, w_n, m)
        for tag, a_poly in probes:
            inner = wm - multiply(pres, a_poly, spec.x)
            left = multiply(pres, y, inner)
            right = multiply(pres, one - multiply(pres, y, a_poly), spec.x)
            exprs.append((m, tag, left - right))
    need = max(pres.poly_weight(e) for _, _, e in exprs)
    D = need if D is None else max(D, need)
    Jx = [multiply(pres, g, spec.x) for g in spec.J_gens]
    Jx_t, _ = truncate_ideal(pres, Jx, D, slack, slack_cap)
    idx = pres.monomial_index(D)
    for m, tag, e in exprs:
        if e.is_zero():
            continue
        if not Jx_t.contains(_poly_coords(pres, idx, e)):
            raise IdentityFailed(
                f"membership fails at m={m} ({tag}): "
                f"{pres.render_poly(e)} escaped Jx", n=m)
    return CheckReport(
        "e101_membership", PASS,
        parameters={"family": spec.family, "m_max": m_max, "D": D,
                    "probes": cfg.probes, "seed": cfg.seed},
        notes=[f"{len(exprs)} membership instances verified",
               "w scaled by 1/mu before taking powers"],
    )


def filtration_checks(eta, D=10, slack=2, slack_cap=None) -> CheckReport:
    """d respects the u-degree filtration of N = A/A(d-1), twisting w.

    On the class of u^n w^k, applying d must give eta^k times the class
    plus terms of u-degree < n.  Raises FiltrationViolation.
    """
    eta = _coerce_scalar(eta)
    pres = build_presentation(DOWN_UP, eta)
    d = pres.gen("d")
    u_i, w_i, d_i = (pres.gen_index(n) for n in ("u", "w", "d"))
    N = build_cyclic_module(pres, [d - pres.one()], D + 1, slack, slack_cap,
                            name="down_up:N")
    if any(d_i in word for word in N.labels):
        raise FiltrationViolation("d survives in the basis of A/A(d-1)")
    one = Scalar.one(pres.kind)
    checked = 0
    for p, word in enumerate(N.labels):
        if N.weights[p] > D:
            continue
        n = word.count(u_i)
        k = word.count(w_i)
        img = act(N, d, {p: one})
        resid = vec_axpy(img, -(eta ** k), {p: one})
        for tp in resid:
            if N.labels[tp].count(u_i) > n - 1:
                raise FiltrationViolation(
                    f"d on {N.render_label(p)}: residue touches "
                    f"{N.render_label(tp)} at u-degree >= {n}")
        checked += 1
    return CheckReport(
        "filtration_stability", PASS,
        parameters={"eta": eta.render(), "D": D},
        notes=[f"{checked} basis classes checked",
               "d f(w) u^n = f(eta w) u^n modulo lower u-degree"],
    )
