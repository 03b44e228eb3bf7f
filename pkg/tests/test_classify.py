import random

import pytest

from hhglab.axioms import structural_validators
from hhglab.builders import build_named
from hhglab.classify import (
    big_set,
    classify,
    orthogonal_rank,
    stabilization_power,
    tau0_floor_check,
    tau_on_domain,
)
from hhglab.errors import (
    ClassificationAnomalyError,
    PreconditionError,
    StructureInvalidError,
)
from hhglab.groups import FreeAbelianGroup
from hhglab.spaces import LineSpace
from hhglab.structures import ConstantLedger, Domain, TableHHG


def random_words(model, count, length, seed):
    rnd = random.Random(seed)
    letters = [w[0] for w in model.generators()]
    letters = letters + [x ^ 1 for x in letters]
    out = []
    for _ in range(count):
        raw = tuple(rnd.choice(letters) for _ in range(rnd.randint(1, length)))
        out.append(model.normal_form(raw))
    return out


def orbit_only_structure():
    """Line domain with a projection but no point action: big-set
    membership must come from the orbit-diameter fallback."""
    Z = FreeAbelianGroup(1)
    exp = lambda g: Z.exponents(Z.normal_form(g))[0]
    dom = Domain("S", LineSpace(), exp)
    return TableHHG("orbit-only", Z, ConstantLedger(), [dom])


class TestBigSets:
    def setup_method(self):
        self.hh = build_named("f2xz")
        self.model = self.hh.group

    def test_tree_factor(self):
        big = big_set(self.hh, self.model.parse("a"))
        assert big.domains == ["T"]
        ev = big.evidence["T"]
        assert ev["via"] == "translation"
        assert ev["tau"] == 1.0
        assert ev["power"] == 1

    def test_line_factor(self):
        assert big_set(self.hh, self.model.parse("t")).domains == ["L"]

    def test_both_factors(self):
        assert big_set(self.hh, self.model.parse("at")).domains == ["L", "T"]

    def test_identity_is_empty(self):
        assert big_set(self.hh, ()).domains == []

    def test_free_product_domains(self):
        hh = build_named("f2freez")
        m = hh.group
        assert big_set(hh, m.parse("a")).domains == ["ab@1"]
        assert big_set(hh, m.parse("c")).domains == ["c@1"]
        assert big_set(hh, m.parse("caC")).domains == ["ab@c"]
        big = big_set(hh, m.parse("ac"))
        assert big.domains == ["S"]
        assert big.evidence["S"]["tau"] == 2.0

    def test_swapped_lines_need_the_square(self):
        hh = build_named("swapline")
        big = big_set(hh, hh.group.parse("t"))
        assert big.domains == ["P", "Q"]
        assert big.evidence["P"] == {"via": "translation", "tau": 0.5, "power": 2}

    def test_orbit_fallback(self):
        hh = orbit_only_structure()
        big = big_set(hh, hh.group.parse("t"), n_max=6)
        assert big.domains == ["S"]
        assert big.evidence["S"] == {"via": "orbit", "diameter": 12, "cutoff": 3.0}

    def test_orbit_window_precondition(self):
        with pytest.raises(PreconditionError):
            big_set(self.hh, (), n_max=3)

    def test_conjugation_equivariance(self):
        for name in ("f2xz", "f2freez"):
            hh = build_named(name)
            m = hh.group
            letters = [w for w in m.generators()] + [m.inverse(w) for w in m.generators()]
            for g in random_words(m, 12, 3, seed=37):
                for h in letters:
                    conj = m.multiply(m.multiply(h, g), m.inverse(h))
                    left = big_set(hh, conj).domains
                    right = sorted(hh.act_on_domain(h, u) for u in big_set(hh, g).domains)
                    assert left == right, (name, m.format(g), m.format(h))

    def test_powers_share_the_big_set(self):
        for name in ("f2xz", "f2freez"):
            hh = build_named(name)
            for g in random_words(hh.group, 10, 3, seed=41):
                base = big_set(hh, g).domains
                for n in (2, 3, 4):
                    assert big_set(hh, hh.group.power(g, n)).domains == base

    def test_members_pairwise_orthogonal_and_small(self):
        for name in ("f2xz", "z2", "f2freez", "swapline"):
            hh = build_named(name)
            for g in random_words(hh.group, 10, 3, seed=43):
                big = big_set(hh, g)
                assert len(big.domains) <= hh.constants.N_rank
                for i, u in enumerate(big.domains):
                    for v in big.domains[i + 1:]:
                        assert hh.relation(u, v) == "perp"


class TestClassify:
    def test_identity_is_elliptic(self):
        hh = build_named("f2xz")
        assert classify(hh, ()).variant == "elliptic"

    def test_loxodromic_is_axial(self):
        hh = build_named("f2xz")
        assert classify(hh, hh.group.parse("a")).variant == "axial"

    def test_conjugation_invariance(self):
        hh = build_named("f2freez")
        m = hh.group
        g = m.parse("ac")
        h = m.parse("ba")
        conj = m.multiply(m.multiply(h, g), m.inverse(h))
        assert classify(hh, g).variant == classify(hh, conj).variant == "axial"

    def test_empty_big_set_is_anomalous_when_torsion_free(self):
        hh = build_named("bad-orth-closure")
        with pytest.raises(ClassificationAnomalyError):
            classify(hh, hh.group.parse("t"))


class TestStabilization:
    def test_invariant_factors_need_no_power(self):
        hh = build_named("f2xz")
        assert stabilization_power(hh, hh.group.parse("a")) == 1

    def test_identity_power_is_one(self):
        hh = build_named("f2xz")
        assert stabilization_power(hh, ()) == 1

    def test_swapped_lines_need_two(self):
        hh = build_named("swapline")
        assert stabilization_power(hh, hh.group.parse("t")) == 2

    def test_missing_power_is_structure_invalid(self):
        hh = build_named("swapline")
        hh.constants = ConstantLedger(
            delta=0.0, xi=0.0, kappa0=1.0, E=2.0, lam=2.0, alpha=2.0,
            K_proj=1.0, n_complexity=2, theta_coeffs=(0.0, 2.0),
            C_norm=0.0, tau0=0.5, N_rank=1,
        )
        with pytest.raises(StructureInvalidError):
            stabilization_power(hh, hh.group.parse("t"))


class TestTauFloor:
    def test_standard_structures_meet_the_floor(self):
        for name in ("free2", "z1", "z2", "f2xz", "f2xf2", "f2freez"):
            hh = build_named(name)
            assert tau0_floor_check(hh, hh.group.generators()) == 1.0

    def test_half_speed_lines(self):
        hh = build_named("swapline")
        assert tau0_floor_check(hh, hh.group.generators()) == 0.5

    def test_floor_violation_raises(self):
        hh = build_named("swapline")
        hh.constants = ConstantLedger(
            delta=0.0, xi=0.0, kappa0=1.0, E=2.0, lam=2.0, alpha=2.0,
            K_proj=1.0, n_complexity=2, theta_coeffs=(0.0, 2.0),
            C_norm=0.0, tau0=0.75, N_rank=2,
        )
        with pytest.raises(StructureInvalidError):
            tau0_floor_check(hh, hh.group.generators())

    def test_empty_sample_rejected(self):
        with pytest.raises(PreconditionError):
            tau0_floor_check(build_named("f2xz"), [])

    def test_actionless_structure_is_vacuous(self):
        hh = orbit_only_structure()
        assert tau0_floor_check(hh, hh.group.generators()) is None


class TestOrthogonalRank:
    def test_matches_declared_rank(self):
        for name in ("free2", "z1", "z2", "f2xz", "f2xf2", "f2freez", "swapline"):
            hh = build_named(name)
            assert orthogonal_rank(hh) == hh.constants.N_rank, name

    def test_all_bounded_has_rank_zero(self):
        assert orthogonal_rank(build_named("bad-orth-closure")) == 0


class TestStructuralValidators:
    def test_sound_structures_pass(self):
        for name in ("free2", "z1", "z2", "f2xz", "f2xf2", "f2freez", "swapline",
                      "f2xz-corrupt-rho", "f2xz-corrupt-lipschitz",
                      "f2xz-corrupt-uniqueness"):
            report = structural_validators(build_named(name))
            assert report.ok, (name, report.failures)

    def test_nested_in_quasi_line(self):
        report = structural_validators(build_named("bad-nest-in-line"))
        assert report.failed_rules() == [2]

    def test_orthogonal_family_nesting(self):
        report = structural_validators(build_named("bad-orth-in-line"))
        assert 1 in report.failed_rules()

    def test_transverse_to_invariant(self):
        report = structural_validators(build_named("bad-transverse-invariant"))
        assert report.failed_rules() == [3]

    def test_strict_mode_raises(self):
        with pytest.raises(StructureInvalidError):
            structural_validators(build_named("bad-transverse-invariant"), strict=True)

    def test_report_shape(self):
        data = structural_validators(build_named("bad-nest-in-line")).to_json()
        assert data["ok"] is False
        assert data["failures"][0]["pair"] == ["T", "S"]
        assert data["checks"] > 0
