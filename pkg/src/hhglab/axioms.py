"""Axiom checker: tests a structure's declared constants on samples.

Each axiom check reports pass/fail, the worst margin observed (bound
minus observed value, so negative means a violation), the number of
individual checks run, and a witness for the worst case.  Sampling is
deterministic for a fixed seed.  A pass is evidence on the sampled
window, never a proof; a fail is a concrete counterexample.
"""

import random
from dataclasses import dataclass, field

from .errors import InputError, PreconditionError, StructureInvalidError
from .structures import CONTAINS, EQUAL, NEST_IN, ORTHOGONAL, TRANSVERSE

AXIOM_NAMES = {
    1: "projections",
    2: "nesting",
    3: "orthogonality",
    4: "consistency",
    5: "finite complexity",
    6: "large links",
    7: "bounded geodesic image",
    8: "partial realization",
    9: "uniqueness",
}


@dataclass
class AxiomReport:
    index: int
    name: str
    passed: bool
    margin: float
    checks: int
    witness: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "index": self.index,
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "checks": self.checks,
            "witness": {k: str(v) for k, v in self.witness.items()},
        }


@dataclass
class StructureReport:
    label: str
    radius: int
    seed: int
    axioms: list

    @property
    def passed(self):
        return all(a.passed for a in self.axioms)

    def failed_axioms(self):
        return [a.index for a in self.axioms if not a.passed]

    def to_json(self):
        return {
            "structure": self.label,
            "radius": self.radius,
            "seed": self.seed,
            "passed": self.passed,
            "failed_axioms": self.failed_axioms(),
            "axioms": [a.to_json() for a in self.axioms],
        }


class _Env:
    """Shared sampling state for one checker run."""

    def __init__(self, st, radius, seed, max_pairs, max_points, point_radius):
        from .balls import cayley_ball_layers, symmetrize

        self.st = st
        self.radius = radius
        self.rng = random.Random(seed)
        gens = symmetrize(st.group, st.group.generators())
        layers = cayley_ball_layers(st.group, gens, radius)
        self.elements = [w for layer in layers for w in layer]
        if len(self.elements) > 600:
            self.elements = self.elements[:600]
        n = len(self.elements)
        want = min(max_pairs, n * (n - 1) // 2)
        seen = set()
        self.pairs = []
        guard = 0
        while len(self.pairs) < want and guard < 50 * want:
            guard += 1
            i = self.rng.randrange(n)
            j = self.rng.randrange(n)
            if i == j or (i, j) in seen:
                continue
            seen.add((i, j))
            self.pairs.append((self.elements[i], self.elements[j]))
        self.domains = st.domains()
        self.max_points = max_points
        self.point_radius = point_radius

    def points(self, u):
        return self.st.space(u).sample_points(self.point_radius, limit=self.max_points)

    def show(self, w):
        try:
            return self.st.group.format(w)
        except Exception:
            return str(w)

    def sample(self, items, k):
        items = list(items)
        if len(items) <= k:
            return items
        return self.rng.sample(items, k)


def _report(index, passed, margin, checks, witness=None):
    return AxiomReport(index, AXIOM_NAMES[index], passed, margin, checks, witness or {})


def _check_projections(env):
    st = env.st
    K = st.constants.K_proj
    delta = st.constants.delta
    margin = float("inf")
    witness = {}
    checks = 0
    # coarse Lipschitz bound on every materialized domain
    for x, y in env.pairs:
        dg = st.word_metric(x, y)
        for u in env.sample(env.domains, 40):
            du = st.dsub(u, x, y)
            checks += 1
            m = K * dg + K - du
            if m < margin:
                margin = m
                witness = {"clause": "lipschitz", "domain": u, "x": env.show(x), "y": env.show(y), "d_domain": du, "d_group": dg}
    # declared hyperbolicity of each domain space, four-point sense
    from .spaces import max_four_point_defect

    for u in env.sample(env.domains, 12):
        pts = env.points(u)
        worst, quad = max_four_point_defect(st.space(u), pts, quad_budget=20000)
        checks += 1
        m = delta - worst
        if m < margin:
            margin = m
            witness = {"clause": "hyperbolicity", "domain": u, "defect": worst}
    return _report(1, margin >= 0, margin, checks, witness)


def _check_nesting(env):
    st = env.st
    checks = 0
    # relation codes must flip consistently and nesting must be transitive
    doms = env.sample(env.domains, 25)
    flip = {EQUAL: EQUAL, NEST_IN: CONTAINS, CONTAINS: NEST_IN, ORTHOGONAL: ORTHOGONAL, TRANSVERSE: TRANSVERSE}
    for u in doms:
        for v in doms:
            checks += 1
            if st.relation(v, u) != flip[st.relation(u, v)]:
                return _report(2, False, -1.0, checks, {"clause": "flip", "u": u, "v": v})
            if (st.relation(u, v) == EQUAL) != (u == v):
                return _report(2, False, -1.0, checks, {"clause": "equality", "u": u, "v": v})
    for u in doms:
        for v in doms:
            if st.relation(u, v) != NEST_IN:
                continue
            for w in doms:
                checks += 1
                if st.relation(v, w) == NEST_IN and st.relation(u, w) != NEST_IN:
                    return _report(2, False, -1.0, checks, {"clause": "transitivity", "u": u, "v": v, "w": w})
    if st.top_domain() is None:
        return _report(2, False, -1.0, checks, {"clause": "no unique maximal domain"})
    # relative projections exist and land in the right spaces
    for u in doms:
        for v in doms:
            code = st.relation(u, v)
            if code == NEST_IN:
                checks += 1
                p = st.rho_point(u, v)
                if not st.space(v).contains(p):
                    return _report(2, False, -1.0, checks, {"clause": "rho point off space", "u": u, "v": v})
                for q in env.sample(env.points(v), 6):
                    checks += 1
                    if not st.space(u).contains(st.rho_map_point(v, u, q)):
                        return _report(2, False, -1.0, checks, {"clause": "rho map off space", "u": u, "v": v})
    return _report(2, True, 0.0, checks)


def _check_orthogonality(env):
    st = env.st
    checks = 0
    doms = env.sample(env.domains, 25)
    for u in doms:
        checks += 1
        if st.relation(u, u) == ORTHOGONAL:
            return _report(3, False, -1.0, checks, {"clause": "self-orthogonal", "u": u})
    # closure: V nested in W orthogonal to U forces V orthogonal to U
    for v in doms:
        for w in doms:
            if st.relation(v, w) != NEST_IN:
                continue
            for u in doms:
                checks += 1
                if st.relation(w, u) == ORTHOGONAL and st.relation(v, u) != ORTHOGONAL:
                    return _report(
                        3, False, -1.0, checks,
                        {"clause": "closure", "nested": v, "in": w, "orthogonal_to": u},
                    )
    # container: orthogonal complements inside W live in a proper subdomain
    for w in env.domains:
        inside = [v for v in env.domains if st.relation(v, w) == NEST_IN]
        for u in inside:
            mates = [v for v in inside if st.relation(v, u) == ORTHOGONAL]
            if not mates:
                continue
            checks += 1
            containers = [
                y
                for y in inside
                if all(st.relation(v, y) in (NEST_IN, EQUAL) for v in mates)
            ]
            if not containers:
                return _report(
                    3, False, -1.0, checks,
                    {"clause": "container", "ambient": w, "of": u},
                )
    return _report(3, True, 0.0, checks)


def _check_consistency(env):
    st = env.st
    kappa0 = st.constants.kappa0
    margin = float("inf")
    witness = {}
    checks = 0
    trans_pairs = [
        (u, v)
        for i, u in enumerate(env.domains)
        for v in env.domains[i + 1 :]
        if st.relation(u, v) == TRANSVERSE
    ]
    nest_pairs = [
        (u, v) for u in env.domains for v in env.domains if st.relation(u, v) == NEST_IN
    ]
    xs = env.sample(env.elements, 40)
    for u, v in env.sample(trans_pairs, 60):
        rho_vu = st.rho_point(v, u)
        rho_uv = st.rho_point(u, v)
        for x in xs:
            checks += 1
            du = st.space(u).dist(st.pi(u, x), rho_vu)
            dv = st.space(v).dist(st.pi(v, x), rho_uv)
            m = kappa0 - min(du, dv)
            if m < margin:
                margin = m
                witness = {"clause": "transverse", "u": u, "v": v, "x": env.show(x), "d_u": du, "d_v": dv}
    for v, w in env.sample(nest_pairs, 60):
        rho_vw = st.rho_point(v, w)
        for x in xs:
            checks += 1
            outer = st.space(w).dist(st.pi(w, x), rho_vw)
            pulled = st.rho_map_point(w, v, st.pi(w, x))
            inner = st.space(v).dist(st.pi(v, x), pulled)
            m = kappa0 - min(outer, inner)
            if m < margin:
                margin = m
                witness = {"clause": "nested", "v": v, "w": w, "x": env.show(x), "d_outer": outer, "d_inner": inner}
    if margin == float("inf"):
        margin = kappa0
    return _report(4, margin >= 0, margin, checks, witness)


def _check_complexity(env):
    st = env.st
    # longest chain in the materialized nesting order
    doms = env.domains
    depth = {}

    def chain_depth(u):
        if u in depth:
            return depth[u]
        best = 1
        for v in doms:
            if v != u and st.relation(v, u) == NEST_IN:
                best = max(best, 1 + chain_depth(v))
        depth[u] = best
        return best

    longest = max((chain_depth(u) for u in doms), default=0)
    bound = st.constants.n_complexity
    margin = float(bound - longest)
    return _report(5, margin >= 0, margin, len(doms), {"longest_chain": longest})


def _check_large_links(env):
    st = env.st
    E = st.constants.E
    lam = st.constants.lam
    margin = float("inf")
    witness = {}
    checks = 0
    for x, y in env.pairs:
        between = st.domains_between(x, y)
        for w in env.domains:
            candidates = [v for v in between if st.relation(v, w) == NEST_IN]
            if not candidates:
                continue
            dw = st.dsub(w, x, y)
            bound = lam * dw + lam
            links = [v for v in candidates if st.dsub(v, x, y) >= E]
            checks += 1
            m = bound - len(links)
            if m < margin:
                margin = m
                witness = {"clause": "count", "w": w, "x": env.show(x), "y": env.show(y), "links": len(links), "bound": bound}
            pw = st.pi(w, x)
            for v in links:
                checks += 1
                d = st.space(w).dist(pw, st.rho_point(v, w))
                m = bound - d
                if m < margin:
                    margin = m
                    witness = {"clause": "rho distance", "w": w, "v": v, "x": env.show(x), "y": env.show(y), "d": d}
    if margin == float("inf"):
        margin = lam
    return _report(6, margin >= 0, margin, checks, witness)


def _check_geodesic_image(env):
    st = env.st
    E = st.constants.E
    margin = float("inf")
    witness = {}
    checks = 0
    nest_pairs = [
        (v, w) for v in env.domains for w in env.domains if st.relation(v, w) == NEST_IN
    ]
    for v, w in env.sample(nest_pairs, 25):
        space_w = st.space(w)
        space_v = st.space(v)
        rho = st.rho_point(v, w)
        pts = env.points(w)
        point_pairs = [(p, q) for i, p in enumerate(pts) for q in pts[i + 1 :]]
        for p, q in env.sample(point_pairs, 20):
            geo = space_w.geodesic(p, q)
            if min(space_w.dist(z, rho) for z in geo) <= E:
                continue
            image = [st.rho_map_point(w, v, z) for z in geo]
            diam = max(
                (space_v.dist(a, b) for i, a in enumerate(image) for b in image[i + 1 :]),
                default=0.0,
            )
            checks += 1
            m = E - diam
            if m < margin:
                margin = m
                witness = {"v": v, "w": w, "p": p, "q": q, "image_diameter": diam}
    if margin == float("inf"):
        margin = E
    return _report(7, margin >= 0, margin, checks, witness)


def _realize_by_ball_search(env, family, targets):
    st = env.st
    best = None
    best_val = float("inf")
    for g in env.elements:
        val = max(st.space(u).dist(st.pi(u, g), p) for u, p in zip(family, targets))
        if val < best_val:
            best_val = val
            best = g
    return best


def _check_partial_realization(env):
    st = env.st
    alpha = st.constants.alpha
    margin = float("inf")
    witness = {}
    checks = 0
    unbounded = [u for u in env.domains if not st.is_bounded_domain(u)]
    families = [(u,) for u in unbounded]
    for i, u in enumerate(unbounded):
        for v in unbounded[i + 1 :]:
            if st.relation(u, v) == ORTHOGONAL:
                families.append((u, v))
    for w in unbounded:
        fam = [w]
        for v in unbounded:
            if all(st.relation(v, z) == ORTHOGONAL for z in fam):
                fam.append(v)
        if len(fam) >= 3:
            families.append(tuple(sorted(fam)))
    families = sorted(set(families))
    for family in env.sample(families, 12):
        pts_per = [env.sample(env.points(u), 4) for u in family]
        tuples = [[]]
        for opts in pts_per:
            tuples = [t + [p] for t in tuples for p in opts]
        for targets in env.sample(tuples, 8):
            lifts = [st.lift(u, p) for u, p in zip(family, targets)]
            if any(l is None for l in lifts):
                g = _realize_by_ball_search(env, family, targets)
            else:
                g = ()
                for l in lifts:
                    g = st.group.multiply(g, l)
            for u, p in zip(family, targets):
                checks += 1
                d = st.space(u).dist(st.pi(u, g), p)
                m = alpha - d
                if m < margin:
                    margin = m
                    witness = {"clause": "realization", "family": ",".join(family), "domain": u, "target": p, "got": d, "g": env.show(g)}
            related = [
                w
                for w in env.domains
                if any(st.relation(u, w) in (NEST_IN, TRANSVERSE) for u in family)
                and w not in family
            ]
            for w in env.sample(related, 10):
                us = [u for u in family if st.relation(u, w) in (NEST_IN, TRANSVERSE)]
                for u in us:
                    checks += 1
                    d = st.space(w).dist(st.pi(w, g), st.rho_point(u, w))
                    m = alpha - d
                    if m < margin:
                        margin = m
                        witness = {"clause": "ambient control", "family": ",".join(family), "ambient": w, "of": u, "got": d}
    if margin == float("inf"):
        margin = alpha
    return _report(8, margin >= 0, margin, checks, witness)


def _check_uniqueness(env):
    st = env.st
    margin = float("inf")
    witness = {}
    checks = 0
    for x, y in env.pairs:
        dg = st.word_metric(x, y)
        best = None
        for kappa in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
            if dg <= st.constants.theta_of(kappa):
                continue
            if best is None:
                best = max(
                    (st.dsub(u, x, y) for u in st.domains_between(x, y)), default=0.0
                )
            checks += 1
            m = best - kappa
            if m < margin:
                margin = m
                witness = {"x": env.show(x), "y": env.show(y), "d_group": dg, "kappa": kappa, "best_domain_distance": best}
    if margin == float("inf"):
        margin = 0.0
    return _report(9, margin >= 0, margin, checks, witness)


_CHECKERS = {
    1: _check_projections,
    2: _check_nesting,
    3: _check_orthogonality,
    4: _check_consistency,
    5: _check_complexity,
    6: _check_large_links,
    7: _check_geodesic_image,
    8: _check_partial_realization,
    9: _check_uniqueness,
}


def check_structure(
    structure,
    radius=3,
    seed=0,
    max_pairs=60,
    max_points=25,
    point_radius=None,
    axioms=None,
):
    """Run the selected axiom checks (default: all nine) and report."""
    if point_radius is None:
        point_radius = radius
    wanted = sorted(axioms) if axioms else sorted(_CHECKERS)
    bad = [i for i in wanted if i not in _CHECKERS]
    if bad:
        raise InputError(f"unknown axiom indices {bad}")
    env = _Env(structure, radius, seed, max_pairs, max_points, point_radius)
    reports = [_CHECKERS[i](env) for i in wanted]
    return StructureReport(structure.label, radius, seed, reports)


VALIDATOR_RULES = {
    1: "orthogonal-family-nesting",
    2: "quasi-line-nesting",
    3: "transverse-to-invariant",
}


@dataclass
class ValidatorReport:
    """Outcome of the three structural-consequence checks."""

    structure: str
    failures: list = field(default_factory=list)
    checks: int = 0

    @property
    def ok(self):
        return not self.failures

    def failed_rules(self):
        return sorted({f["rule"] for f in self.failures})

    def to_json(self):
        return {
            "structure": self.structure,
            "ok": self.ok,
            "checks": self.checks,
            "rules": [VALIDATOR_RULES[i] for i in sorted(VALIDATOR_RULES)],
            "failures": self.failures,
        }


def structural_validators(structure, strict=False, radius=2):
    """Check three consequences any genuine structure must satisfy.

    (1) An unbounded member of an invariant pairwise-orthogonal family
    never nests properly into another unbounded domain.  (2) An invariant
    quasi-line domain admitting a translation has only bounded domains
    properly nested in it.  (3) A domain transverse to an invariant
    unbounded domain is bounded.  These are theorems about structures, so
    a violation means the declared data is not one; strict mode raises.
    Assumes the axiom checks already ran; this does not repeat them.
    """
    from .coords import quasi_line_detect
    from .spaces import translation_length

    gens = structure.group.generators()
    doms = structure.domains()
    unbounded = [u for u in doms if not structure.is_bounded_domain(u)]
    invariant = {u: all(structure.act_on_domain(g, u) == u for g in gens) for u in doms}
    report = ValidatorReport(structure.label)

    def fail(rule, pair, detail):
        report.failures.append({"rule": rule, "name": VALIDATOR_RULES[rule],
                                "pair": list(pair), "detail": detail})

    for i, u in enumerate(unbounded):
        for v in unbounded[i + 1:]:
            if structure.relation(u, v) != ORTHOGONAL:
                continue
            family_invariant = all(
                {structure.act_on_domain(g, u), structure.act_on_domain(g, v)} == {u, v}
                for g in gens
            )
            if not family_invariant:
                continue
            for member in (u, v):
                for w in unbounded:
                    report.checks += 1
                    if structure.relation(member, w) == NEST_IN:
                        fail(1, (member, w),
                             f"{member} sits in the invariant orthogonal family "
                             f"{{{u}, {v}}} yet nests into the unbounded {w}")

    for u in unbounded:
        if not invariant[u]:
            continue
        space = structure.space(u)
        if quasi_line_detect(space, radius=radius, q_max=2) is None:
            continue
        translated = False
        for g in gens:
            try:
                tau = translation_length(
                    space, lambda p: structure.act_in_space(u, g, p),
                    x=structure.pi(u, ()))
            except PreconditionError:
                continue
            if tau > 0:
                translated = True
                break
        if not translated:
            continue
        for v in unbounded:
            report.checks += 1
            if structure.relation(v, u) == NEST_IN:
                fail(2, (v, u),
                     f"unbounded {v} nests into the translated quasi-line {u}")

    for w in unbounded:
        if not invariant[w]:
            continue
        for v in unbounded:
            report.checks += 1
            if structure.relation(v, w) == TRANSVERSE:
                fail(3, (v, w), f"unbounded {v} is transverse to the invariant {w}")

    if strict and report.failures:
        first = report.failures[0]
        raise StructureInvalidError(
            f"structural check failed: {first['detail']}", witness=first)
    return report
