"""Scenario registry.

A scenario samples inputs, runs named checks on them and collects failures as
witnesses.  A witness stores the check name and its serialized inputs, so
``replay`` can re-run that single check from text alone.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..chainring import PModulus, ZpnMatrix, howell_form, reduce_level, span_cardinality, span_equal, span_intersection
from ..polyring import (
    MonomialIdeal,
    Polynomial,
    PolyRingDesc,
    QuotientRing,
    cartier_inverse,
    exterior_d,
    fd_composite,
    pth_power_decomposition_check,
    std_poisson,
)
from ..quantization import (
    MonomialIndex,
    QuantAlgebraDesc,
    WeylElement,
    center_basis,
    central_generation_check,
    commutator,
    deformation_bracket,
    divide_by_p_power,
    eq1_lhs,
    eq1_rhs,
    flat_within_window,
    ideal_span_basis,
    lift_center,
    parse_weyl,
    phi_map,
    to_center,
)
from ..witt import WittVector
from .config import ConfigError, ScenarioConfig
from .sampling import random_poly, random_witt


@dataclass
class Context:
    cfg: ScenarioConfig
    algebra: QuantAlgebraDesc
    Z1: PolyRingDesc
    rng: random.Random
    cache: dict = field(default_factory=dict)

    @classmethod
    def build(cls, cfg: ScenarioConfig) -> "Context":
        alg = QuantAlgebraDesc(cfg.p, cfg.n, cfg.r, cfg.relation_sign, cfg.pairing_sign)
        return cls(cfg, alg, alg.center_ring(), random.Random(cfg.seed))


# --- input codec ---------------------------------------------------------------------

# kind -> (encode, decode(ctx, text, ring))
def _enc_witt(z: WittVector) -> str:
    return str(z)


def _dec_witt(ctx, text, ring=None):
    return WittVector.parse(ring or ctx.Z1, text, ctx.cfg.p)


def _enc_pres(pres) -> list[list[str]]:
    return [[str(f), str(g)] for f, g in pres]


def _dec_pres(ctx, data, ring=None):
    ring = ring or ctx.Z1
    return [(ring.parse(f), ring.parse(g)) for f, g in data]


CODECS: dict[str, tuple[Callable, Callable]] = {
    "poly": (str, lambda ctx, t, ring=None: (ring or ctx.Z1).parse(t)),
    "witt": (_enc_witt, _dec_witt),
    "witts": (lambda zs: [str(z) for z in zs], lambda ctx, ts, ring=None: [_dec_witt(ctx, t, ring) for t in ts]),
    "weyl": (lambda a: a.to_text(), lambda ctx, t, ring=None: parse_weyl(t, ctx.algebra)),
    "weyls": (lambda xs: [a.to_text() for a in xs], lambda ctx, ts, ring=None: [parse_weyl(t, ctx.algebra) for t in ts]),
    "pres": (_enc_pres, _dec_pres),
    "int": (int, lambda ctx, v, ring=None: int(v)),
}


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[..., tuple[bool, str]]
    kinds: dict[str, str]
    ring: Callable[[Context], Any] | None = None  # coefficient ring for decoding

    def encode(self, values: dict[str, Any]) -> dict[str, Any]:
        return {k: CODECS[self.kinds[k]][0](values[k]) for k in self.kinds}

    def decode(self, ctx: Context, data: dict[str, Any]) -> dict[str, Any]:
        ring = self.ring(ctx) if self.ring else None
        return {k: CODECS[self.kinds[k]][1](ctx, data[k], ring) for k in self.kinds}


CHECKS: dict[str, Check] = {}


def check(name: str, ring=None, **kinds):
    def deco(fn):
        CHECKS[name] = Check(name, fn, kinds, ring)
        return fn

    return deco


# --- φ -----------------------------------------------------------------------------


def _phi(ctx, z):
    return phi_map(z, ctx.algebra, check=False)


@check("phi-add", z="witt", w="witt")
def _phi_add(ctx, z, w):
    lhs, rhs = _phi(ctx, z + w), _phi(ctx, z) + _phi(ctx, w)
    return lhs == rhs, "φ(z+w) - φ(z) - φ(w) = " + str(lhs - rhs)


@check("phi-mul", z="witt", w="witt")
def _phi_mul(ctx, z, w):
    lhs, rhs = _phi(ctx, z * w), _phi(ctx, z) * _phi(ctx, w)
    return lhs == rhs, "φ(zw) - φ(z)φ(w) = " + str(lhs - rhs)


@check("phi-central", z="witt")
def _phi_central(ctx, z):
    a = _phi(ctx, z)
    bad = [(g, commutator(a, g)) for g in ctx.algebra.gens(a.level)]
    bad = [f"[φ(z), {g}] = {c}" for g, c in bad if c]
    return not bad, "; ".join(bad)


@check("phi-frob", z="witt")
def _phi_frob(ctx, z):
    m = z.length
    lhs = _phi(ctx, z.frobenius())
    rhs = _phi(ctx, z).reduce_mod(m - 1)
    return lhs == rhs, f"φ_{m - 1}(Fz) - r φ_{m}(z) = {lhs - rhs}"


@check("phi-ver", z="witt")
def _phi_ver(ctx, z):
    m = z.length + 1
    lhs = _phi(ctx, z.verschiebung())
    rhs = _phi(ctx, z).v_map()
    return lhs == rhs, f"φ_{m}(Vz) - v φ_{m - 1}(z) = {lhs - rhs}"


@check("eq1", z="witt", w="poly")
def _eq1(ctx, z, w):
    lhs, rhs = eq1_lhs(z, w, ctx.algebra), eq1_rhs(z, w)
    return lhs == rhs, f"divided commutator {lhs} vs Σ z_i^(p^(m-i)-1){{z_i, w}} = {rhs}"


@check("bracket", f="poly", g="poly")
def _bracket(ctx, f, g):
    lhs = deformation_bracket(lift_center(f, ctx.algebra, 1), lift_center(g, ctx.algebra, 1))
    rhs = std_poisson(f, g)
    return lhs == rhs, f"deformation bracket {lhs} vs Poisson bracket {rhs}"


# --- centres -------------------------------------------------------------------------


def _frobenius_span(ctx, level: int, cap: int, excluded=()) -> ZpnMatrix:
    """Level-1 span of monomials whose exponents are all divisible by p^level."""
    index = MonomialIndex(ctx.algebra, cap, tuple(excluded))
    step = ctx.cfg.p**level
    rows = [i for i, e in enumerate(index.monomials) if all(a % step == 0 for a in e)]
    mat = np.zeros((len(rows), len(index)), dtype=np.int64)
    mat[np.arange(len(rows)), rows] = 1
    return howell_form(ZpnMatrix(PModulus(ctx.cfg.p, 1), mat))


def _center_mod_p(ctx, level: int, cap: int, excluded=()) -> ZpnMatrix:
    key = ("center-mod-p", level, cap, tuple(excluded))
    if key not in ctx.cache:
        cb = center_basis(ctx.algebra, level, cap, excluded)
        ctx.cache[key] = howell_form(reduce_level(cb.basis, 1))
    return ctx.cache[key]


@check("center-mod-p", level="int", cap="int")
def _center_level(ctx, level, cap):
    got = _center_mod_p(ctx, level, cap)
    want = _frobenius_span(ctx, level, cap)
    return span_equal(got, want), (
        f"Z(A_{level}) mod p has {got.rows} Howell rows, Z_1^(p^{level - 1}) has {want.rows} (cap {cap})"
    )


@check("center-strict", level="int", cap="int")
def _center_strict(ctx, level, cap):
    hi, lo = _center_mod_p(ctx, level + 1, cap), _center_mod_p(ctx, level, cap)
    ok = span_cardinality(hi) < span_cardinality(lo)
    return ok, f"|Z(A_{level + 1}) mod p| = {span_cardinality(hi)}, |Z(A_{level}) mod p| = {span_cardinality(lo)}"


# --- quotient centre ------------------------------------------------------------------


def _prop_setup(ctx) -> dict:
    """B = Z_1/m^(p^n) for m = (t^k), t a single centre variable, and R = A_n/I."""
    if "prop" in ctx.cache:
        return ctx.cache["prop"]
    cfg, p, n = ctx.cfg, ctx.cfg.p, ctx.cfg.n
    mono = cfg.monomial or (1,) + (0,) * (2 * cfg.r - 1)
    if len(mono) != 2 * cfg.r or sum(1 for a in mono if a) != 1:
        raise ConfigError(f"prop-center needs m generated by a power of one variable, got {mono}")
    m = MonomialIdeal(ctx.Z1, (mono,))
    top = tuple(a * p**n for a in mono)
    B = QuotientRing(ctx.Z1, MonomialIdeal(ctx.Z1, (top,)))
    excluded = (tuple(a * p for a in top),)  # φ_n(τ(g^p)) for the generator g of m
    out = {"m": m, "B": B, "excluded": excluded, "index": MonomialIndex(ctx.algebra, cfg.degree, excluded)}
    ctx.cache["prop"] = out
    return out


def _prop_ring(ctx):
    return _prop_setup(ctx)["B"]


@check("prop-residue-center", cap="int")
def _prop_residue(ctx, cap):
    excluded = _prop_setup(ctx)["excluded"]
    got = howell_form(center_basis(ctx.algebra, 1, cap, excluded).basis)
    want = _frobenius_span(ctx, 1, cap, excluded)
    return span_equal(got, want), f"Z(R/pR) has {got.rows} rows, lift of B has {want.rows} (cap {cap})"


@check("prop-residue-bracket", ring=_prop_ring, f="poly", g="poly")
def _prop_bracket(ctx, f, g):
    setup = _prop_setup(ctx)
    B, alg = setup["B"], ctx.algebra
    drop = setup["excluded"][0]

    def norm(a: WeylElement) -> WeylElement:
        return WeylElement(a.algebra, a.level, {e: c for e, c in a.terms.items() if not all(x >= y for x, y in zip(e, drop))})

    ft, gt = lift_center(f, alg, 2), lift_center(g, alg, 2)
    lhs = B.normalize(to_center(divide_by_p_power(norm(commutator(ft, gt)), 1)))
    rhs = B.normalize(std_poisson(f, g))
    return lhs == rhs, f"bracket on R/pR {lhs} vs induced bracket {rhs}"


def _phi_image_span(ctx, cap: int, first: int) -> ZpnMatrix:
    """Span of p^(i-1) b̃^(p^(n-i)), i >= first, over monomials b of B, inside the cap."""
    setup = _prop_setup(ctx)
    alg, p, n = ctx.algebra, ctx.cfg.p, ctx.cfg.n
    index: MonomialIndex = setup["index"]
    B = setup["B"]
    rows = []
    for i in range(first, n + 1):
        scale = p ** (n - i + 1)
        for e in B.monomial_basis(cap // p):
            if scale * sum(e) > cap:
                continue
            b = lift_center(B.base.monomial(e), alg, n - i + 1) ** (p ** (n - i))
            rows.append(index.vector(b.v_map(i - 1) if i > 1 else b))
    mod = PModulus(p, n)
    if not rows:
        return ZpnMatrix.zeros(mod, 0, len(index))
    return howell_form(ZpnMatrix(mod, np.array(rows)))


@check("prop-center-image", cap="int")
def _prop_image(ctx, cap):
    setup = _prop_setup(ctx)
    center = howell_form(center_basis(ctx.algebra, ctx.cfg.n, cap, setup["excluded"]).basis)
    image = _phi_image_span(ctx, cap, 1)
    return span_equal(center, image), f"Z(R) has {center.rows} rows, φ_n(W_n(B)) spans {image.rows} (cap {cap})"


@check("prop-center-torsion", cap="int")
def _prop_torsion(ctx, cap):
    setup = _prop_setup(ctx)
    p, n = ctx.cfg.p, ctx.cfg.n
    center = center_basis(ctx.algebra, n, cap, setup["excluded"]).basis
    N = center.cols
    pR = ZpnMatrix(center.modulus, np.eye(N, dtype=np.int64) * p)
    got = span_intersection(center, pR)
    want = _phi_image_span(ctx, cap, 2)
    return span_equal(got, want), f"Z(R) ∩ pR has {got.rows} rows, φ_n(V W_(n-1)(B)) spans {want.rows}"


# --- Cartier and the p-th power lemma ------------------------------------------------


@check("cartier-closed", pres="pres")
def _cartier_closed(ctx, pres):
    om = cartier_inverse(pres)
    return om.is_closed(), f"d C^-1 = {om.d()}"


@check("cartier-fd", g="poly")
def _cartier_fd(ctx, g):
    lhs = cartier_inverse([(g.ring.one(), g)])
    rhs = fd_composite([g, g.ring.zero()])
    return lhs == rhs, f"C^-1(dg) = {lhs}, F d (g, 0) = {rhs}"


def _muh_setup(ctx) -> dict:
    if "muh" in ctx.cache:
        return ctx.cache["muh"]
    p, n = ctx.cfg.p, ctx.cfg.n
    k = (ctx.cfg.monomial or (1,))[0]
    if ctx.cfg.monomial is not None and len(ctx.cfg.monomial) != 1:
        raise ConfigError("lemma-muh works over one variable; pass --monomial K for m = (u^K)")
    R = PolyRingDesc(("u",), PModulus(p, 1))
    m = MonomialIdeal(R, ((k,),))
    B = QuotientRing(R, m.power(p**n))
    out = {"R": R, "m": m, "B": B, "N": k * p**n, "memo": {}}
    ctx.cache["muh"] = out
    return out


def _muh_ring(ctx):
    return _muh_setup(ctx)["B"]


@check("muh", ring=_muh_ring, z="witt")
def _muh(ctx, z):
    setup = _muh_setup(ctx)
    B, m, memo = setup["B"], setup["m"], setup["memo"]
    form = fd_composite(z, normalize=B.normalize)
    if not form.is_zero():
        return False, f"hypothesis fails: Σ z_i^(p^(n-i)-1) dz_i = {form}"
    for i, zi in enumerate(z.components, start=1):
        key = (zi, i)
        if key not in memo:
            memo[key] = pth_power_decomposition_check(zi, i, m, B).member
        if not memo[key]:
            return False, f"z_{i} = {zi} is not in B^p + m^(p^{i}) B"
    return True, ""


def muh_instances(ctx, exhaustive_limit: int = 20_000, samples: int = 200):
    """Tuples (z_1..z_n) over B with Σ z_i^(p^(n-i)-1) dz_i = 0.

    z_1..z_(n-1) are enumerated (or sampled when the space is large); z_n is
    then forced up to ker d = F_p[u^p], and every element of that coset is
    produced.
    """
    setup = _muh_setup(ctx)
    B, N, R = setup["B"], setup["N"], setup["R"]
    p, n = ctx.cfg.p, ctx.cfg.n
    u = R.gen(0)
    space = p ** (N * (n - 1))
    kernel_monos = [u ** (p * j) for j in range((N + p - 1) // p)]

    def elements():
        if space <= exhaustive_limit:
            for coeffs in itertools.product(range(p), repeat=N * (n - 1)):
                yield [Polynomial(R, {(j,): c for j, c in enumerate(coeffs[s * N : (s + 1) * N])}) for s in range(n - 1)]
        else:
            # sparse heads: dense uniform ones almost never pass the exactness filter
            for _ in range(50 * samples):
                yield [
                    Polynomial(R, {(0,): ctx.rng.randrange(p), **{(ctx.rng.randrange(1, N),): ctx.rng.randrange(1, p) for _ in range(ctx.rng.randint(1, 2))}})
                    for _ in range(n - 1)
                ]

    accepted = 0
    for head in elements():
        if space > exhaustive_limit and accepted >= samples:
            return
        form = fd_composite(head + [R.zero()], normalize=B.normalize).coefficient(0)
        # -form = dz_n needs no u^(j) du with p | j+1
        if any((e[0] + 1) % p == 0 for e in form.terms):
            continue
        base = R.zero()
        for (j,), c in form.terms.items():
            base = base - R.monomial((j + 1,), c * pow(j + 1, -1, p))
        base = B.normalize(base)
        accepted += 1
        for cs in itertools.product(range(p), repeat=len(kernel_monos)) if space <= exhaustive_limit else [
            [ctx.rng.randrange(p) for _ in kernel_monos]
        ]:
            zn = B.normalize(base + sum((c * t for c, t in zip(cs, kernel_monos)), R.zero()))
            yield WittVector(B, head + [zn], p)


# --- ideals in the p-th power --------------------------------------------------------


def _frob_instance(ctx):
    """Generators (a^p, b_2^p + a^(p^n) c_2, ...) with a a monomial."""
    cfg, p, n, S = ctx.cfg, ctx.cfg.p, ctx.cfg.n, ctx.Z1
    gens = []
    for _ in range(ctx.rng.randint(1, 2)):
        a = S.monomial(tuple(ctx.rng.randint(0, 1) for _ in range(S.nvars)))
        comps = [a.pth_power(1)]
        for _ in range(n - 1):
            b = random_poly(ctx.rng, S, 1, 2)
            c = random_poly(ctx.rng, S, 1, 2)
            comps.append(b.pth_power(1) + a.pth_power(n) * c)
        gens.append(WittVector(S, comps))
    return gens


def _ideal_element(ctx, gens, degree=1, terms=2):
    S, n = ctx.Z1, ctx.cfg.n
    total = WittVector.zero(S, n)
    for g in gens:
        total = total + random_witt(ctx.rng, S, n, degree, terms) * g
    return total


def _monomial_ideal_contains(ideal: MonomialIdeal, f: Polynomial) -> bool:
    return all(ideal.contains_monomial(e) for e in f.terms)


@check("frob-hypothesis", gens="witts", z="witt")
def _frob_hyp(ctx, gens, z):
    p, n = ctx.cfg.p, ctx.cfg.n
    # F^(n-1)(m) is generated by the (first components)^(p^(n-1))
    target = MonomialIdeal.from_polys([g.component(1).pth_power(n - 1) for g in gens])
    form = fd_composite(z)
    bad = [c for c in form.coefficients.values() if not _monomial_ideal_contains(target, c)]
    return not bad, f"F^(n-1)d z = {form} leaves F^(n-1)(m)Ω"


@check("frob-conclusion", gens="witts", z="witt")
def _frob_concl(ctx, gens, z):
    # m̄ ∩ S^p contains the p-th power first components; the conclusion says they generate m̄
    target = MonomialIdeal.from_polys([g.component(1) for g in gens])
    ok = _monomial_ideal_contains(target, z.component(1))
    return ok, f"z_1 = {z.component(1)} not in {target}"


# --- central generation ------------------------------------------------------------------


@check("non-generation", gens="weyls", cap="int")
def _non_generation(ctx, gens, cap):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = central_generation_check(ctx.algebra, gens, ctx.cfg.n, cap)
    ctx.cache["last-report"] = rep
    return rep.verdict == "not-generated-within-cap", f"verdict {rep.verdict}"


@check("central-generation", gens="weyls", cap="int")
def _central_generation(ctx, gens, cap):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = central_generation_check(ctx.algebra, gens, ctx.cfg.n, cap)
    ctx.cache["last-report"] = rep
    detail = f"verdict {rep.verdict}"
    if rep.witness is not None:
        detail += f", witness {rep.witness}"
    return rep.generated, detail


# --- scenarios -------------------------------------------------------------------------------


@dataclass
class Outcome:
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    evidence: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    inconclusive: str | None = None

    failed: int = 0
    max_witnesses: int = 25

    def run(self, ctx: Context, name: str, **values) -> bool:
        chk = CHECKS[name]
        self.cases += 1
        ok, detail = chk.fn(ctx, **values)
        if not ok:
            self.failed += 1
            if len(self.failures) < self.max_witnesses:
                self.failures.append({"role": "failure", "check": name, "inputs": chk.encode(values), "detail": detail})
            else:
                self.notes["witnesses_truncated"] = True
        return ok


@dataclass(frozen=True)
class Scenario:
    name: str
    statement: str
    polarity: str  # "positive": no counterexample may exist; "negative": one must be found
    defaults: dict[str, Any]
    body: Callable[[Context, Outcome], None]
    needs: Callable[[ScenarioConfig], str | None] = lambda cfg: None


REGISTRY: dict[str, Scenario] = {}


def scenario(name, statement, polarity="positive", needs=None, **defaults):
    def deco(fn):
        REGISTRY[name] = Scenario(name, statement, polarity, defaults, fn, needs or (lambda cfg: None))
        return fn

    return deco


def _length(cfg):
    return cfg.length or cfg.n


def _witt(ctx, m):
    cfg = ctx.cfg
    return random_witt(ctx.rng, ctx.Z1, m, cfg.component_degree, cfg.terms)


def _need_n2(cfg):
    return None if cfg.n >= 2 else "needs n >= 2"


@scenario("phi-ring-hom", "φ_m(z + w) = φ_m(z) + φ_m(w) and φ_m(zw) = φ_m(z) φ_m(w)", samples=100, component_degree=2)
def _sc_phi_hom(ctx, out):
    m = _length(ctx.cfg)
    for _ in range(ctx.cfg.samples):
        z, w = _witt(ctx, m), _witt(ctx, m)
        out.run(ctx, "phi-add", z=z, w=w)
        out.run(ctx, "phi-mul", z=z, w=w)


@scenario("phi-central", "φ_m(z) = Σ p^(i-1) z̃_i^(p^(m-i)) is central in A_m", samples=100, component_degree=2)
def _sc_phi_central(ctx, out):
    m = _length(ctx.cfg)
    for _ in range(ctx.cfg.samples):
        out.run(ctx, "phi-central", z=_witt(ctx, m))


@scenario(
    "phi-compat",
    "φ_(m-1) F = r φ_m and φ_m V = v φ_(m-1)",
    needs=lambda cfg: None if _length(cfg) >= 2 else "needs Witt length >= 2",
    samples=100,
    component_degree=2,
)
def _sc_phi_compat(ctx, out):
    m = _length(ctx.cfg)
    for _ in range(ctx.cfg.samples):
        out.run(ctx, "phi-frob", z=_witt(ctx, m))
        out.run(ctx, "phi-ver", z=_witt(ctx, m - 1))


@scenario(
    "eq1",
    "(1/p^m)[φ_m(z)~, w̃] mod p = Σ z_i^(p^(m-i)-1) {z_i, w}",
    needs=lambda cfg: None if cfg.n >= (cfg.length or cfg.n - 1) + 1 and cfg.n >= 2 else "needs n >= m + 1",
    samples=50,
    component_degree=2,
)
def _sc_eq1(ctx, out):
    m = ctx.cfg.length or ctx.cfg.n - 1
    out.notes["m"] = m
    for _ in range(ctx.cfg.samples):
        z = _witt(ctx, m)
        w = random_poly(ctx.rng, ctx.Z1, ctx.cfg.component_degree, ctx.cfg.terms)
        out.run(ctx, "eq1", z=z, w=w)


@scenario(
    "deformation-vs-std-poisson",
    "(1/p)[ã, b̃] mod p on Z_1 equals the symplectic Poisson bracket",
    needs=_need_n2,
    samples=50,
    component_degree=3,
)
def _sc_bracket(ctx, out):
    x, y = ctx.Z1.gen(0), ctx.Z1.gen(ctx.cfg.r)
    out.run(ctx, "bracket", f=x, g=y)
    for _ in range(ctx.cfg.samples):
        f = random_poly(ctx.rng, ctx.Z1, ctx.cfg.component_degree, ctx.cfg.terms)
        g = random_poly(ctx.rng, ctx.Z1, ctx.cfg.component_degree, ctx.cfg.terms)
        out.run(ctx, "bracket", f=f, g=g)


def _default_cap(cfg):
    return min(2 * cfg.p**cfg.n, 60) if cfg.r == 1 else min(cfg.p**cfg.n, 12)


@scenario("center-structure", "Z(A_(m+1)) mod p = Z_1^(p^m) for every level m + 1 <= n", degree=None)
def _sc_center_structure(ctx, out):
    cap = ctx.cfg.degree
    for level in range(1, ctx.cfg.n + 1):
        out.run(ctx, "center-mod-p", level=level, cap=cap)


@scenario("center-shrink", "Z(A_n) mod p = Z_1^(p^(n-1)), strictly shrinking with n", degree=None)
def _sc_center_shrink(ctx, out):
    cap, n = ctx.cfg.degree, ctx.cfg.n
    out.run(ctx, "center-mod-p", level=n, cap=cap)
    for level in range(1, n):
        out.run(ctx, "center-strict", level=level, cap=cap)


@scenario(
    "prop-center",
    "R = A_n/I with Z(R/pR) = Z_1/m^(p^n): Z(R) = φ_n(W_n(B)) and Z(R) ∩ pR = φ_n(V W_(n-1)(B))",
    needs=_need_n2,
    degree=30,
    samples=20,
    component_degree=2,
)
def _sc_prop_center(ctx, out):
    cap = ctx.cfg.degree
    setup = _prop_setup(ctx)
    out.notes["B"] = str(setup["B"])
    out.notes["quotient_generator"] = str(WeylElement(ctx.algebra, 1, {setup["excluded"][0]: 1}))
    out.run(ctx, "prop-residue-center", cap=cap)
    B = setup["B"]
    for _ in range(ctx.cfg.samples):
        f = random_poly(ctx.rng, B, ctx.cfg.component_degree, ctx.cfg.terms)
        g = random_poly(ctx.rng, B, ctx.cfg.component_degree, ctx.cfg.terms)
        out.run(ctx, "prop-residue-bracket", f=f, g=g)
    out.run(ctx, "prop-center-image", cap=cap)
    out.run(ctx, "prop-center-torsion", cap=cap)


@scenario(
    "lemma-muh",
    "Σ z_i^(p^(n-i)-1) dz_i = 0 in Ω_B implies z_i ∈ B^p + m^(p^i) B",
    samples=200,
)
def _sc_muh(ctx, out):
    limit = ctx.cfg.extra.get("exhaustive_limit", 20_000)
    for z in muh_instances(ctx, exhaustive_limit=limit, samples=ctx.cfg.samples):
        out.run(ctx, "muh", z=z)
    out.notes["B"] = str(_muh_setup(ctx)["B"])


@scenario("cartier", "C^-1(f dg) = f^p g^(p-1) dg is closed; C^-1(dg) = F d(g, 0)", samples=50, component_degree=3)
def _sc_cartier(ctx, out):
    cfg = ctx.cfg
    for _ in range(cfg.samples):
        pres = [
            (random_poly(ctx.rng, ctx.Z1, cfg.component_degree, cfg.terms), random_poly(ctx.rng, ctx.Z1, cfg.component_degree, cfg.terms))
            for _ in range(ctx.rng.randint(1, 3))
        ]
        out.run(ctx, "cartier-closed", pres=pres)
        out.run(ctx, "cartier-fd", g=random_poly(ctx.rng, ctx.Z1, cfg.component_degree, cfg.terms))


@scenario(
    "lemma-frob",
    "F^(n-1)(dm) ⊂ F^(n-1)(m)Ω implies m̄ = (m̄ ∩ S^p) S",
    samples=20,
)
def _sc_frob(ctx, out):
    for _ in range(ctx.cfg.samples):
        gens = _frob_instance(ctx)
        for z in list(gens) + [_ideal_element(ctx, gens)]:
            out.run(ctx, "frob-hypothesis", gens=gens, z=z)
            out.run(ctx, "frob-conclusion", gens=gens, z=z)


@scenario(
    "remark-counterexample",
    "I = preimage of (x^p) A_1 in A_n has I ≠ (I ∩ Z(A)) A",
    polarity="negative",
    needs=_need_n2,
    degree=12,
)
def _sc_remark(ctx, out):
    cfg = ctx.cfg
    alg = ctx.algebra
    if cfg.generators:
        gens = [alg.parse(t, cfg.n) for t in cfg.generators]
    else:
        gens = [alg.gen(alg.x_names[0], cfg.n) ** cfg.p, alg.constant(cfg.p, cfg.n)]
    found = out.run(ctx, "non-generation", gens=gens, cap=cfg.degree)
    if found:
        rep = ctx.cache["last-report"]
        out.evidence.append(
            {
                "role": "counterexample",
                "check": "non-generation",
                "inputs": {"element": rep.witness.to_text()},
                "detail": "in I, not in (I ∩ Z(A))A within the degree window",
            }
        )
        out.notes["window"] = rep.window
    # the failure here means "generation observed", which contradicts the claim
    out.run(ctx, "center-mod-p", level=cfg.n, cap=cfg.degree)


@scenario(
    "theorem-flat-ideal",
    "a flat two-sided ideal I satisfies I = (Z(A) ∩ I) A",
    needs=_need_n2,
    degree=None,
    samples=20,
    component_degree=1,
)
def _sc_theorem(ctx, out):
    cfg, alg = ctx.cfg, ctx.algebra
    cap = cfg.degree
    window = cap - cfg.p
    skipped = 0
    for _ in range(cfg.samples):
        for _attempt in range(10):
            gens = []
            for _ in range(ctx.rng.randint(1, 2)):
                comps = [random_poly(ctx.rng, ctx.Z1, cfg.component_degree, cfg.terms, nonzero=True)]
                comps += [random_poly(ctx.rng, ctx.Z1, cfg.component_degree, cfg.terms) for _ in range(cfg.n - 1)]
                gens.append(phi_map(WittVector(ctx.Z1, comps), alg, check=False))
            if max(g.degree for g in gens) > window:
                skipped += 1
                continue
            if flat_within_window(ideal_span_basis(alg, gens, cfg.n, cap), window):
                break
            skipped += 1
        else:
            continue
        out.run(ctx, "central-generation", gens=gens, cap=cap)
    out.notes["resampled"] = skipped
    if out.cases == 0:
        out.inconclusive = "no flat ideal fit inside the degree window"


def _theorem_cap(cfg):
    return min(cfg.p**cfg.n * (cfg.component_degree or 1) + cfg.p + 3, 60)


DYNAMIC_DEFAULTS: dict[str, Callable[[ScenarioConfig], dict]] = {
    "center-structure": lambda cfg: {"degree": _default_cap(cfg)},
    "center-shrink": lambda cfg: {"degree": _default_cap(cfg)},
    "theorem-flat-ideal": lambda cfg: {"degree": _theorem_cap(cfg)},
}


def resolve(cfg: ScenarioConfig) -> ScenarioConfig:
    if cfg.scenario not in REGISTRY:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}; known: {', '.join(sorted(REGISTRY))}")
    sc = REGISTRY[cfg.scenario]
    cfg = cfg.with_defaults({k: v for k, v in sc.defaults.items() if v is not None})
    cfg = cfg.with_defaults({"component_degree": 2, "samples": 0})
    if cfg.scenario in DYNAMIC_DEFAULTS:
        cfg = cfg.with_defaults(DYNAMIC_DEFAULTS[cfg.scenario](cfg))
    cfg = cfg.with_defaults({"degree": 12})
    reason = sc.needs(cfg)
    if reason:
        raise ConfigError(f"{cfg.scenario}: {reason}")
    return cfg


def replay(cfg: ScenarioConfig, witness: dict) -> tuple[bool, str]:
    """Re-run a witness's check; returns the check result (False reproduces a failure)."""
    ctx = Context.build(resolve(cfg))
    chk = CHECKS[witness["check"]]
    return chk.fn(ctx, **chk.decode(ctx, witness["inputs"]))
