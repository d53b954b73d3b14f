"""Solvable-type presentations and PBW normal forms.

An algebra here is given by an ordered tuple of generators g_0 < g_1 <
... with positive integer weights and straightening rules

    g_j * g_i  ->  c * g_i * g_j  +  tail        (j > i, c != 0)

where the tail is an already-ordered polynomial of weight at most
weight(g_i) + weight(g_j).  Reducing the leftmost descent repeatedly
terminates and, for the families built in, is confluent; the normal
monomials g_0^{e_0} g_1^{e_1} ... form a basis.

Four families are built in: the quantum plane (ab = q ba), the
quantized Weyl algebra (ab - q ba = 1), Ore extensions of K[a] by the
derivation a^r d/da, and the extended presentation of the noetherian
down-up algebras A(1+eta, -eta, 1) on generators u < w < d.

Words are tuples of generator indices; polynomials are dicts mapping
words to nonzero Scalars of one shared variant.
"""

from __future__ import annotations

from fractions import Fraction

from .reports import FAIL, PASS, CheckReport
from .scalars import RAT, RATFUN, MixedScalarVariants, Scalar

Word = tuple

_STEP_CAP = 10_000_000  # safety net; solvable-type reduction terminates


class AlgebraError(Exception):
    pass


class InvalidParameter(AlgebraError):
    pass


class UnsupportedFamily(AlgebraError):
    pass


class InconsistentPresentation(AlgebraError):
    pass


class NotNormal(AlgebraError):
    pass


class FormulaMismatch(AlgebraError):
    pass


class PolyParseError(AlgebraError):
    pass


QUANTUM_PLANE = "quantum_plane"
WEYL = "weyl"
ORE = "ore"
DOWN_UP = "down_up"

FAMILIES = (QUANTUM_PLANE, WEYL, ORE, DOWN_UP)


def _merge(terms: dict, word: Word, coeff: Scalar):
    cur = terms.get(word)
    cur = coeff if cur is None else cur + coeff
    if cur.is_zero():
        terms.pop(word, None)
    else:
        terms[word] = cur


class NcPoly:
    """Noncommutative polynomial: dict of word -> nonzero Scalar."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        if terms:
            kind = None
            for w, c in terms.items():
                if c.is_zero():
                    continue
                if kind is None:
                    kind = c.kind
                elif c.kind != kind:
                    raise MixedScalarVariants("mixed scalar variants in one polynomial")
                out[w] = c
        self.terms = out

    @classmethod
    def zero(cls) -> "NcPoly":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, NcPoly) and self.terms == other.terms

    def __neg__(self):
        return NcPoly({w: -c for w, c in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            _merge(out, w, c)
        return NcPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "NcPoly":
        if c.is_zero():
            return NcPoly()
        return NcPoly({w: x * c for w, x in self.terms.items()})

    def __repr__(self):
        return f"NcPoly({len(self.terms)} terms)"


class MonomialIndex:
    """Normal monomials of weight <= cap, indexed in descending order.

    Descending (weight, word) order puts high weight at coordinate 0, so
    a pivot in exact row reduction is a leading monomial and the low
    weight coordinates always form a suffix block.
    """

    __slots__ = ("words", "pos", "weights", "cap")

    def __init__(self, words, weights, cap):
        self.words = words
        self.pos = {w: i for i, w in enumerate(words)}
        self.weights = weights  # parallel to words
        self.cap = cap

    @property
    def dim(self) -> int:
        return len(self.words)


class SolvablePresentation:
    """Immutable presentation; carries caches for normal forms."""

    def __init__(self, names, weights, rules, parameter, family, r=None, kind=None):
        self.names = tuple(names)
        self.weights = tuple(int(w) for w in weights)
        self.rules = dict(rules)
        self.parameter = parameter
        self.family = family
        self.r = r
        if kind is None:
            kind = parameter.kind if parameter is not None else RAT
        self.kind = kind
        self._nf_cache: dict = {}
        self._mono_cache: dict = {}
        self._validate()

    def _validate(self):
        if len(self.names) != len(self.weights):
            raise InvalidParameter("names/weights length mismatch")
        if any(w < 1 for w in self.weights):
            raise InvalidParameter("generator weights must be positive")
        for (j, i), (coeff, tail) in self.rules.items():
            if not (0 <= i < j < len(self.names)):
                raise InvalidParameter(f"bad rule index pair {(j, i)}")
            if coeff.is_zero():
                raise InconsistentPresentation(f"rule {(j, i)} has zero coefficient")
            lhs_w = self.weights[i] + self.weights[j]
            for word, c in tail.items():
                if c.is_zero():
                    raise InconsistentPresentation(f"zero tail coefficient in {(j, i)}")
                if any(word[k] > word[k + 1] for k in range(len(word) - 1)):
                    raise InconsistentPresentation(f"unordered tail word in {(j, i)}")
                if self.weight_of(word) > lhs_w:
                    raise InconsistentPresentation(
                        f"tail of rule {(j, i)} exceeds weight {lhs_w}"
                    )

    # -- small constructors ------------------------------------------------

    def ngens(self) -> int:
        return len(self.names)

    def scalar(self, c) -> Scalar:
        return Scalar.of(self.kind, c)

    def gen_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidParameter(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> NcPoly:
        return NcPoly({(self.gen_index(name),): self.scalar(1)})

    def const(self, c) -> NcPoly:
        c = c if isinstance(c, Scalar) else self.scalar(c)
        return NcPoly({(): c})

    def word_poly(self, word: Word, c=1) -> NcPoly:
        c = c if isinstance(c, Scalar) else self.scalar(c)
        return NcPoly({tuple(word): c})

    def one(self) -> NcPoly:
        return self.const(1)

    def weight_of(self, word: Word) -> int:
        ws = self.weights
        return sum(ws[g] for g in word)

    def poly_weight(self, p: NcPoly) -> int:
        """Maximum weight of the support; -1 for the zero polynomial."""
        if p.is_zero():
            return -1
        return max(self.weight_of(w) for w in p.terms)

    def leading_term(self, p: NcPoly):
        word = max(p.terms, key=lambda w: (self.weight_of(w), w))
        return word, p.terms[word]

    def monomial_index(self, cap: int) -> MonomialIndex:
        idx = self._mono_cache.get(cap)
        if idx is None:
            words = []
            k = len(self.weights)

            def rec(g, prefix, wleft):
                if g == k:
                    words.append(tuple(prefix))
                    return
                rec(g + 1, prefix, wleft)
                taken = 0
                while taken + self.weights[g] <= wleft:
                    taken += self.weights[g]
                    prefix = prefix + [g]
                    rec(g + 1, prefix, wleft - taken)
                # prefix is rebound locally; nothing to undo

            rec(0, [], cap)
            words = sorted(set(words), key=lambda w: (self.weight_of(w), w), reverse=True)
            idx = MonomialIndex(words, [self.weight_of(w) for w in words], cap)
            self._mono_cache[cap] = idx
        return idx

    def render_word(self, word: Word) -> str:
        if not word:
            return "1"
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = self.names[word[i]]
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)

    def render_poly(self, p: NcPoly) -> str:
        if p.is_zero():
            return "0"
        items = sorted(
            p.terms.items(), key=lambda kv: (self.weight_of(kv[0]), kv[0]), reverse=True
        )
        parts = []
        for word, c in items:
            if word:
                parts.append(f"{c.render()}*{self.render_word(word)}")
            else:
                parts.append(c.render())
        return " + ".join(parts)

    def parse_poly(self, text: str) -> NcPoly:
        return _parse_poly(self, text)

    def __repr__(self):
        p = "" if self.parameter is None else f", parameter={self.parameter.render()}"
        rr = "" if self.r is None else f", r={self.r}"
        return f"SolvablePresentation({self.family}{p}{rr})"


# ---------------------------------------------------------------------------
# family constructors


def _check_unit_parameter(value: Scalar, what: str) -> Scalar:
    if value.is_zero():
        raise InvalidParameter(f"{what} must be nonzero")
    if value.kind == RAT:
        if value.value in (1, -1):
            raise InvalidParameter(f"{what} = {value.value} is a root of unity")
    else:
        rf = value.value
        if rf.numer.degree <= 0 and rf.denom.degree <= 0:
            c = rf.evaluate(Fraction(0))
            if c in (1, -1):
                raise InvalidParameter(f"{what} is the constant {c}, a root of unity")
    return value


def down_up_constants(eta: Scalar) -> dict:
    """alpha, beta, gamma, eps, phi for A(1+eta, -eta, 1)."""
    one = Scalar.one(eta.kind)
    alpha = one + eta
    beta = -eta
    eps = (eta - one).inverse()
    phi = one - alpha * eps  # equals -2*eps
    return {"alpha": alpha, "beta": beta, "gamma": one, "eps": eps, "phi": phi}


def build_presentation(family: str, parameter: Scalar = None, r: int = None):
    if family == QUANTUM_PLANE:
        if parameter is None:
            raise InvalidParameter("quantum plane needs a parameter q")
        q = _check_unit_parameter(parameter, "q")
        qinv = q.inverse()
        rules = {(1, 0): (qinv, {})}
        return SolvablePresentation(("a", "b"), (1, 1), rules, q, family)
    if family == WEYL:
        if parameter is None:
            raise InvalidParameter("quantized Weyl algebra needs a parameter q")
        q = _check_unit_parameter(parameter, "q")
        qinv = q.inverse()
        rules = {(1, 0): (qinv, {(): -qinv})}
        return SolvablePresentation(("a", "b"), (1, 1), rules, q, family)
    if family == ORE:
        if r is None or r < 1:
            raise InvalidParameter("ore extension needs an integer r >= 1")
        if parameter is not None:
            raise InvalidParameter("ore extension takes no scalar parameter")
        one = Scalar.rational(1)
        # order b < a, so the descent is a*b -> b*a + a^r
        rules = {(1, 0): (one, {(1,) * r: one})}
        return SolvablePresentation(
            ("b", "a"), (max(1, r - 1), 1), rules, None, family, r=r, kind=RAT
        )
    if family == DOWN_UP:
        if parameter is None:
            raise InvalidParameter("down-up algebra needs a parameter eta")
        eta = _check_unit_parameter(parameter, "eta")
        consts = down_up_constants(eta)
        one = Scalar.one(eta.kind)
        etainv = eta.inverse()
        rules = {
            # d*u -> u*d + w - eps
            (2, 0): (one, {(1,): one, (): -consts["eps"]}),
            # d*w -> eta*w*d
            (2, 1): (eta, {}),
            # w*u -> eta*u*w
            (1, 0): (eta, {}),
        }
        pres = SolvablePresentation(("u", "w", "d"), (1, 2, 1), rules, eta, family)
        pres.constants = consts
        return pres
    raise UnsupportedFamily(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# rewriting


def _leftmost_redex(word: Word):
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            return i
    return None


def _rightmost_redex(word: Word):
    for i in range(len(word) - 2, -1, -1):
        if word[i] > word[i + 1]:
            return i
    return None


def reduce_word(pres: SolvablePresentation, word: Word, strategy=None):
    """Normal form of a single word as a term dict; (dict, steps) if uncached.

    strategy None uses the leftmost descent with the presentation cache;
    'leftmost'/'rightmost' bypass the cache (used by the confluence and
    termination tests) and also return the rewrite step count.
    """
    cached = strategy is None
    if cached:
        hit = pres._nf_cache.get(word)
        if hit is not None:
            return hit
        find = _leftmost_redex
    else:
        find = _leftmost_redex if strategy == "leftmost" else _rightmost_redex
    one = Scalar.one(pres.kind)
    pending = {word: one}
    stack = [word]
    result: dict = {}
    steps = 0
    while stack:
        w = stack.pop()
        c = pending.pop(w, None)
        if c is None or c.is_zero():
            continue
        if cached:
            hit = pres._nf_cache.get(w)
            if hit is not None:
                for nw, nc in hit.items():
                    _merge(result, nw, nc * c)
                continue
        i = find(w)
        if i is None:
            _merge(result, w, c)
            continue
        steps += 1
        if steps > _STEP_CAP:
            raise RuntimeError("rewrite step cap exceeded; presentation broken?")
        coeff, tail = pres.rules[(w[i], w[i + 1])]
        pre, suf = w[:i], w[i + 2 :]
        swapped = pre + (w[i + 1], w[i]) + suf
        if swapped in pending:
            _merge(pending, swapped, c * coeff)
        else:
            pending[swapped] = c * coeff
            stack.append(swapped)
        for tw, tc in tail.items():
            nw = pre + tw + suf
            if nw in pending:
                _merge(pending, nw, c * tc)
            else:
                pending[nw] = c * tc
                stack.append(nw)
    if cached:
        pres._nf_cache[word] = result
        return result
    return result, steps


def normal_form(pres: SolvablePresentation, p: NcPoly, strategy=None) -> NcPoly:
    out: dict = {}
    for word, c in p.terms.items():
        red = reduce_word(pres, word, strategy)
        if strategy is not None:
            red = red[0]
        for nw, nc in red.items():
            _merge(out, nw, nc * c)
    return NcPoly(out)


def multiply(pres: SolvablePresentation, p: NcPoly, q: NcPoly) -> NcPoly:
    raw: dict = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in q.terms.items():
            _merge(raw, w1 + w2, c1 * c2)
    return normal_form(pres, NcPoly(raw))


def power(pres: SolvablePresentation, p: NcPoly, n: int) -> NcPoly:
    out = pres.one()
    for _ in range(n):
        out = multiply(pres, out, p)
    return out


# ---------------------------------------------------------------------------
# generator maps (graded endomorphisms like the sigma of a normal element)


class GeneratorMap:
    """K-linear algebra endomorphism given by generator images."""

    __slots__ = ("images", "_verified")

    def __init__(self, images):
        self.images = tuple(images)
        self._verified = False


def apply_map(pres: SolvablePresentation, sigma: GeneratorMap, p: NcPoly) -> NcPoly:
    out = NcPoly()
    for word, c in p.terms.items():
        acc = pres.one()
        for g in word:
            acc = multiply(pres, acc, sigma.images[g])
        out = out + acc.scale(c)
    return normal_form(pres, out)


def verify_generator_map(pres, sigma: GeneratorMap, strict=True) -> CheckReport:
    """Check the images preserve every straightening relation."""
    if len(sigma.images) != pres.ngens():
        raise InvalidParameter("generator map arity mismatch")
    bad = []
    for (j, i), (coeff, tail) in sorted(pres.rules.items()):
        lhs = multiply(pres, sigma.images[j], sigma.images[i])
        rhs = multiply(pres, sigma.images[i], sigma.images[j]).scale(coeff)
        rhs = rhs + apply_map(pres, sigma, NcPoly(tail))
        res = lhs - rhs
        if not res.is_zero():
            bad.append(((j, i), pres.render_poly(res)))
    if bad:
        msg = "; ".join(f"rule {ji}: residue {r}" for ji, r in bad)
        if strict:
            raise InconsistentPresentation(f"map does not preserve relations: {msg}")
        return CheckReport("generator_map", FAIL, witnesses=[msg])
    sigma._verified = True
    return CheckReport("generator_map", PASS)


def apply_map_power(pres, sigma: GeneratorMap, m: int, p: NcPoly) -> NcPoly:
    if m < 0:
        raise InvalidParameter("map power must be >= 0")
    if not sigma._verified:
        verify_generator_map(pres, sigma)
    out = normal_form(pres, p)
    for _ in range(m):
        out = apply_map(pres, sigma, out)
    return out


# ---------------------------------------------------------------------------
# verification


def _family_relations(pres) -> list:
    """(name, polynomial that must rewrite to zero) for the family axioms."""
    rel = []
    if pres.family == QUANTUM_PLANE:
        q = pres.parameter
        a, b = pres.gen("a"), pres.gen("b")
        rel.append(("ab=q*ba", multiply(pres, a, b) - multiply(pres, b, a).scale(q)))
    elif pres.family == WEYL:
        q = pres.parameter
        a, b = pres.gen("a"), pres.gen("b")
        rel.append(
            (
                "ab-q*ba=1",
                multiply(pres, a, b) - multiply(pres, b, a).scale(q) - pres.one(),
            )
        )
    elif pres.family == ORE:
        a, b = pres.gen("a"), pres.gen("b")
        ar = pres.word_poly((pres.gen_index("a"),) * pres.r)
        rel.append(("ab-ba=a^r", multiply(pres, a, b) - multiply(pres, b, a) - ar))
    elif pres.family == DOWN_UP:
        consts = down_up_constants(pres.parameter)
        alpha, beta, gamma = consts["alpha"], consts["beta"], consts["gamma"]
        u, w, d = pres.gen("u"), pres.gen("w"), pres.gen("d")

        def prod(*factors):
            out = pres.one()
            for f in factors:
                out = multiply(pres, out, f)
            return out

        r1 = (
            prod(d, d, u)
            - prod(d, u, d).scale(alpha)
            - prod(u, d, d).scale(beta)
            - d.scale(gamma)
        )
        r2 = (
            prod(d, u, u)
            - prod(u, d, u).scale(alpha)
            - prod(u, u, d).scale(beta)
            - u.scale(gamma)
        )
        wdef = w - (prod(d, u) - prod(u, d) + pres.const(consts["eps"]))
        wu = prod(u, w) - prod(w, u).scale(pres.parameter.inverse())
        wd = prod(d, w) - prod(w, d).scale(pres.parameter)
        rel += [("R1", r1), ("R2", r2), ("w=du-ud+eps", wdef), ("uw", wu), ("dw", wd)]
    return rel


def verify_presentation_consistency(pres, strict=True) -> CheckReport:
    """Diamond checks on all length-3 words plus the family relations."""
    n = pres.ngens()
    failures = []
    count = 0
    for x in range(n):
        for y in range(n):
            for z in range(n):
                word = (x, y, z)
                left, _ = reduce_word(pres, word, "leftmost")
                right, _ = reduce_word(pres, word, "rightmost")
                count += 1
                if left != right:
                    failures.append(f"diamond {pres.render_word(word)} disagrees")
    for name, residue in _family_relations(pres):
        if not residue.is_zero():
            failures.append(f"relation {name}: residue {pres.render_poly(residue)}")
    if failures:
        if strict:
            raise InconsistentPresentation("; ".join(failures))
        return CheckReport("presentation_consistency", FAIL, witnesses=failures)
    return CheckReport(
        "presentation_consistency",
        PASS,
        parameters={"family": pres.family},
        notes=[f"{count} diamonds, {len(_family_relations(pres))} relations"],
    )


def verify_normal_element(pres, w_elem: NcPoly, sigma: GeneratorMap, strict=True):
    """Check w*x = sigma(x)*w on generators (hence on all of A)."""
    if not sigma._verified:
        verify_generator_map(pres, sigma, strict=True)
    bad = []
    for g in range(pres.ngens()):
        gp = NcPoly({(g,): Scalar.one(pres.kind)})
        res = multiply(pres, w_elem, gp) - multiply(pres, sigma.images[g], w_elem)
        if not res.is_zero():
            bad.append(f"{pres.names[g]}: residue {pres.render_poly(res)}")
    if bad:
        if strict:
            raise NotNormal("; ".join(bad))
        return CheckReport("normal_element", FAIL, witnesses=bad)
    return CheckReport(
        "normal_element", PASS, parameters={"w": pres.render_poly(w_elem)}
    )


def verify_du_formulas(pres, n_max: int, strict=True) -> CheckReport:
    """Straightening identities for d*u^k in the down-up algebra.

    Checks, for n = 1..n_max (even case) and n = 0..n_max (odd case):

      d u^{2n}   = u^{2n} d + n*phi*u^{2n-1}
                   + alpha * sum_{i<n} eta^{-2i-1} * w u^{2n-1}
      d u^{2n+1} = u^{2n+1} d + u^{2n} w + (n*phi - eps) u^{2n}
                   + alpha * sum_{i<n} eta^{-1-2i} * w u^{2n}

    The n = 0 odd case is the defining relation d u = u d + w - eps.
    """
    if pres.family != DOWN_UP:
        raise UnsupportedFamily("du formulas only apply to the down-up family")
    consts = down_up_constants(pres.parameter)
    eta, alpha = pres.parameter, consts["alpha"]
    eps, phi = consts["eps"], consts["phi"]
    u, w, d = pres.gen_index("u"), pres.gen_index("w"), pres.gen_index("d")
    zero = Scalar.zero(pres.kind)
    bad = []
    for n in range(1, n_max + 1):
        lhs = pres.word_poly((d,) + (u,) * (2 * n))
        s = zero
        for i in range(n):
            s = s + eta ** (-2 * i - 1)
        rhs = NcPoly(
            {
                (u,) * (2 * n) + (d,): Scalar.one(pres.kind),
                (u,) * (2 * n - 1): phi * n,
                (w,) + (u,) * (2 * n - 1): alpha * s,
            }
        )
        res = normal_form(pres, lhs - rhs)
        if not res.is_zero():
            bad.append(f"even n={n}: residue {pres.render_poly(res)}")
    for n in range(0, n_max + 1):
        lhs = pres.word_poly((d,) + (u,) * (2 * n + 1))
        s = zero
        for i in range(n):
            s = s + eta ** (-1 - 2 * i)
        terms = {
            (u,) * (2 * n + 1) + (d,): Scalar.one(pres.kind),
            (u,) * (2 * n) + (w,): Scalar.one(pres.kind),
        }
        _merge(terms, (u,) * (2 * n), phi * n - eps)
        _merge(terms, (w,) + (u,) * (2 * n), alpha * s)
        res = normal_form(pres, lhs - NcPoly(terms))
        if not res.is_zero():
            bad.append(f"odd n={n}: residue {pres.render_poly(res)}")
    if bad:
        if strict:
            raise FormulaMismatch("; ".join(bad))
        return CheckReport("du_formulas", FAIL, witnesses=bad)
    return CheckReport(
        "du_formulas",
        PASS,
        parameters={"n_max": n_max, "eta": pres.parameter.render()},
        notes=["covers the defining relation as the odd n=0 case"],
    )


# ---------------------------------------------------------------------------
# text formats


def _split_top(text: str, seps) -> list:
    """Split on separator chars at paren depth zero, keeping sign marks."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps:
            parts.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch
    parts.append(cur)
    return [p for p in (s.strip() for s in parts) if p]


def _parse_poly(pres, text: str) -> NcPoly:
    out: dict = {}
    s = text.strip()
    if not s:
        raise PolyParseError("empty polynomial text")
    if s == "0":
        return NcPoly()
    for term in _split_top(s, "+-"):
        sign = Scalar.one(pres.kind)
        while term.startswith("-"):
            sign = -sign
            term = term[1:].strip()
        factors = _split_top(term, "*")
        coeff = sign
        word: list = []
        for f in factors:
            base, _, exp = f.partition("^")
            base = base.strip()
            if base in pres.names:
                g = pres.gen_index(base)
                word.extend([g] * (int(exp) if exp else 1))
            else:
                if exp:
                    raise PolyParseError(f"bad factor {f!r}")
                try:
                    from .scalars import parse_scalar

                    coeff = coeff * parse_scalar(f, pres.kind)
                except Exception as e:
                    raise PolyParseError(f"bad coefficient {f!r} in {text!r}") from e
        _merge(out, tuple(word), coeff)
    return NcPoly(out)


def parse_family_spec(text: str):
    """Parse 'family=ore; r=3' style text; returns (presentation, extras).

    Extras carries construction-level options that are not part of the
    presentation itself (currently only kappa for the down-up family).
    """
    fields = {}
    for piece in text.split(";"):
        piece = piece.strip()
        if not piece:
            continue
        key, _, value = piece.partition("=")
        if not value:
            raise InvalidParameter(f"malformed field {piece!r}")
        fields[key.strip()] = value.strip()
    family = fields.pop("family", None)
    if family is None:
        raise InvalidParameter("missing family= field")
    family = family.replace("-", "_")
    from .scalars import parse_scalar

    def scal(text_value):
        if text_value == "t":
            return Scalar.t()
        return parse_scalar(text_value, RAT)

    extras = {}
    if "kappa" in fields:
        extras["kappa"] = scal(fields.pop("kappa"))
    if family in (QUANTUM_PLANE, WEYL):
        if "q" not in fields:
            raise InvalidParameter(f"{family} needs q=")
        pres = build_presentation(family, scal(fields.pop("q")))
    elif family == ORE:
        if "r" not in fields:
            raise InvalidParameter("ore needs r=")
        pres = build_presentation(family, r=int(fields.pop("r")))
    elif family == DOWN_UP:
        if "eta" not in fields:
            raise InvalidParameter("down_up needs eta=")
        pres = build_presentation(family, scal(fields.pop("eta")))
    else:
        raise UnsupportedFamily(f"unknown family {family!r}")
    if fields:
        raise InvalidParameter(f"unused fields {sorted(fields)}")
    return pres, extras


def render_family_spec(pres, extras=None) -> str:
    parts = [f"family={pres.family}"]
    if pres.family in (QUANTUM_PLANE, WEYL):
        parts.append(f"q={_param_text(pres.parameter)}")
    elif pres.family == ORE:
        parts.append(f"r={pres.r}")
    elif pres.family == DOWN_UP:
        parts.append(f"eta={_param_text(pres.parameter)}")
    if extras and "kappa" in extras:
        parts.append(f"kappa={_param_text(extras['kappa'])}")
    return "; ".join(parts)


def _param_text(s: Scalar) -> str:
    if s.kind == RATFUN:
        from .scalars import RationalFunction

        if s.value == RationalFunction.t():
            return "t"
        return s.value.render()
    return str(s.value)
