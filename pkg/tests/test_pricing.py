import math

import numpy as np
import pytest

from helpers import (
    INTRO,
    NONREG,
    intro_instance,
    iid_instances,
    harmonic_instance,
    mixed_instances,
    nonregular_instances,
    regular_instances,
)
from vpricer import (
    ApproxConfig,
    Discrete,
    MonteCarlo,
    Myerson,
    NonRegularError,
    ProductInstance,
    TruncatedExponential,
    Uniform,
    Vickrey,
    auction_revenue,
    best_single_price,
    chi,
    optimal_reserves,
    price_approx,
    price_iid,
    price_nonregular,
    price_regular,
    price_vickrey_based,
    pricing_outcome,
    pricing_revenue,
    q_lower_bound,
    reserve_price,
    solve_nu,
)
from vpricer.auctions import AuctionOutcome
from vpricer.pricing import PriceVector, approx_plan, purchase_probabilities
from vpricer.virtual import reserve_prices

UNIFORM1 = ProductInstance((Uniform(0.0, 1.0),))
UNIFORM2 = ProductInstance((Uniform(0.0, 1.0),) * 2)
HALF2 = ProductInstance((Uniform(0.5, 1.0),) * 2)
ROOT_HALF = math.sqrt(0.5)


def exact(inst, p):
    return pricing_revenue(inst, p).revenue


def myerson(inst):
    return auction_revenue(inst, Myerson()).revenue


def test_price_vector_validation():
    with pytest.raises(ValueError):
        PriceVector((1.0, -1.0))
    with pytest.raises(ValueError):
        PriceVector((1.0, float("nan")))


def test_purchase_rule_examples():
    assert pricing_outcome((1, 2), (1, 2)) == AuctionOutcome(1, 2.0)
    assert pricing_outcome((1, 2), (2, 2)) == AuctionOutcome(0, 1.0)
    assert pricing_outcome((3, 3), (1, 2)) == AuctionOutcome(None, 0.0)
    # equal utility and price goes to the lower index
    assert pricing_outcome((1, 1), (2, 2)) == AuctionOutcome(0, 1.0)
    with pytest.raises(ValueError):
        pricing_outcome((1, 2), (1, 2, 3))


def test_intro_pricing_revenues():
    inst = intro_instance()
    assert exact(inst, (1, 2)) == pytest.approx(11 / 9, abs=1e-12)
    assert exact(inst, (2, 1)) == pytest.approx(11 / 9, abs=1e-12)
    assert exact(inst, (1, 1)) == pytest.approx(1.0, abs=1e-12)
    assert exact(inst, (2, 2)) == pytest.approx(10 / 9, abs=1e-12)


def test_report_fields():
    rep = pricing_revenue(intro_instance(), (1, 2))
    assert rep.chi == 0.0
    assert rep.method == "exact"
    assert sum(rep.per_index_sale_prob) == pytest.approx(1.0)
    assert purchase_probabilities(intro_instance(), (1, 2)) == pytest.approx([1.0, 1 / 3])


def test_exact_rejected_on_continuous():
    with pytest.raises(ValueError):
        pricing_revenue(UNIFORM2, (0.5, 0.5), "exact")


def test_quadrature_matches_closed_form():
    assert pricing_revenue(UNIFORM2, (0.5, 0.5), "quadrature").revenue == pytest.approx(3 / 8, abs=1e-12)
    # p*(1 - chi) for a single uniform price
    rev = pricing_revenue(UNIFORM2, (ROOT_HALF, ROOT_HALF), "quadrature").revenue
    assert rev == pytest.approx(ROOT_HALF * 0.5, abs=1e-12)


def test_quadrature_agrees_with_monte_carlo():
    inst = ProductInstance((Uniform(1.0, 3.0), TruncatedExponential(1.0, 1.0, 4.0)))
    p = (2.1, 1.7)
    q = pricing_revenue(inst, p, "quadrature").revenue
    mc = pricing_revenue(inst, p, MonteCarlo(1_000_000, 4))
    assert abs(q - mc.revenue) <= 3 * mc.mc_halfwidth / 1.96


def test_revenue_is_price_times_sale_for_single_prices():
    rng = np.random.default_rng(41)
    for inst in mixed_instances(41, 200):
        p = float(rng.choice(np.concatenate([d.values for d in inst.items])))
        prices = (p,) * inst.n
        assert exact(inst, prices) == pytest.approx(p * (1 - chi(inst, prices)), abs=1e-12)


def test_uniform_virtual_price_revenue_floor():
    for inst in regular_instances(42, 200):
        for nu in (0.0, 0.5, 1.0, 2.5, 5.0):
            p = reserve_prices(inst, nu)
            assert exact(inst, p) >= (1 - chi(inst, p)) * nu - 1e-12


def test_revenue_floor_from_unique_buyer():
    rng = np.random.default_rng(43)
    for inst in mixed_instances(43, 300):
        p = np.array([rng.choice(d.values) for d in inst.items])
        q = purchase_probabilities(inst, p)
        assert exact(inst, p) >= chi(inst, p) * float(np.dot(p, q)) - 1e-12


def test_q_bound_below_revenue():
    for inst in nonregular_instances(44, 150) + regular_instances(45, 150):
        res = price_nonregular(inst)
        for prices in (res.left_pricing, res.right_pricing):
            q = q_lower_bound(inst, prices, res.nu)
            assert q <= exact(inst, prices) + 1e-12


def test_q_bound_equals_revenue_for_one_item():
    for inst in regular_instances(46, 100, max_n=1):
        d = inst.items[0]
        for nu in np.unique(d.support_virtual_values):
            p = reserve_prices(inst, nu)
            assert q_lower_bound(inst, p, nu) == pytest.approx(exact(inst, p), abs=1e-12)


def test_q_bound_rejects_mixed_virtual_prices():
    inst = intro_instance()
    with pytest.raises(ValueError):
        # item 0 at price 1 has virtual value 1/2, not 2
        q_lower_bound(inst, (1, 2), 2.0)


def test_q_bound_third_of_myerson_on_better_candidate():
    # the bound holds for the larger of the two candidates' Q
    for inst in nonregular_instances(47, 200):
        res = price_nonregular(inst)
        qs = [q_lower_bound(inst, p, res.nu) for p in (res.left_pricing, res.right_pricing)]
        assert max(qs) >= myerson(inst) / 3 * (1 - 1e-9)


def test_solve_nu_uniform():
    sol = solve_nu(UNIFORM2, 0.5)
    assert sol.nu == pytest.approx(2 * ROOT_HALF - 1, abs=1e-8)
    assert sol.prices == pytest.approx((ROOT_HALF, ROOT_HALF), abs=1e-8)
    assert abs(sol.chi - 0.5) <= 1e-9


def test_solve_nu_discrete_least():
    sol = solve_nu(intro_instance(), 0.5)
    assert sol.nu == 0.0
    assert sol.prices == (1.0, 1.0)
    assert sol.chi == 0.0


def test_solve_nu_errors():
    with pytest.raises(ValueError):
        solve_nu(UNIFORM2, 1.0)
    with pytest.raises(ValueError):
        solve_nu(UNIFORM2, 0.5, "sideways")
    with pytest.raises(NonRegularError):
        solve_nu(ProductInstance((NONREG,)), 0.5)
    steep = ProductInstance((Discrete((1.0, 9.0), (0.8, 0.2)),) * 2)
    with pytest.raises(ValueError):
        # r(0) = (9, 9), so chi is already 0.64
        solve_nu(steep, 0.5)


def test_solve_nu_ironed_brackets_target():
    for inst in nonregular_instances(48, 150):
        try:
            sol = solve_nu(inst, 0.5, "ironed")
        except ValueError:
            continue
        assert sol.chi <= 0.5 + 1e-12
        assert sol.right_chi >= 0.5 - 1e-12


def test_price_regular_examples():
    assert price_regular(UNIFORM2).prices == pytest.approx((ROOT_HALF, ROOT_HALF), abs=1e-8)
    assert price_regular(UNIFORM1).prices == pytest.approx((0.5,), abs=1e-9)
    p = price_regular(intro_instance())
    assert p.prices == (1.0, 1.0)
    assert exact(intro_instance(), p) == pytest.approx(1.0)
    assert exact(intro_instance(), p) >= myerson(intro_instance()) / 3


def test_price_regular_rejects_nonregular():
    with pytest.raises(NonRegularError):
        price_regular(ProductInstance((NONREG, INTRO)))


def test_price_regular_third_of_myerson():
    for inst in regular_instances(49, 200):
        assert exact(inst, price_regular(inst)) >= myerson(inst) / 3 * (1 - 1e-9)


def test_price_iid_uniform():
    p = price_iid(UNIFORM2)
    assert p.prices == pytest.approx((0.5, 0.5), abs=1e-9)
    assert pricing_revenue(UNIFORM2, p, "quadrature").revenue == pytest.approx(3 / 8, abs=1e-9)
    assert 3 / 8 >= (5 / 12) / 2.17


def test_price_iid_single_item_is_reserve():
    for inst in iid_instances(50, 100, max_n=1):
        assert price_iid(inst).prices == tuple(reserve_prices(inst, 0.0))


def test_price_iid_needs_iid():
    with pytest.raises(ValueError):
        price_iid(ProductInstance((INTRO, Uniform(0.0, 1.0))))


def test_price_iid_chi_bound():
    for inst in iid_instances(51, 300):
        d = inst.items[0]
        p = price_iid(inst)
        k = int(np.nonzero(d._tail[:-1] >= 1.0 / inst.n - 1e-15)[0][-1])
        if d.support_virtual_values[k] >= 0:
            assert chi(inst, p) <= 1 / math.e + 1e-9


def test_price_iid_ratio():
    for inst in iid_instances(52, 300):
        assert exact(inst, price_iid(inst)) >= myerson(inst) / 2.17 * (1 - 1e-9)


def test_price_iid_discrete_rounding_counterexample():
    # the sale probability of the rounded price jumps from 0.193 straight to 1,
    # so no support price sells with probability near 1/n and the ratio exceeds 2.17
    d = Discrete((2.0, 10.0), (0.807, 0.193))
    inst = ProductInstance((d,) * 3)
    p = price_iid(inst)
    assert p.prices == (2.0, 2.0, 2.0)
    assert exact(inst, p) == pytest.approx(2.0)
    assert myerson(inst) / exact(inst, p) > 2.17


def test_price_nonregular_on_regular_continuous():
    res = price_nonregular(UNIFORM2, MonteCarlo(200_000, 1))
    assert res.left_pricing.prices == pytest.approx(res.right_pricing.prices, abs=1e-7)
    assert res.left_pricing.prices == pytest.approx(price_regular(UNIFORM2).prices, abs=1e-7)


def test_price_nonregular_example():
    inst = ProductInstance((NONREG, NONREG))
    res = price_nonregular(inst)
    diff = [i for i, (a, b) in enumerate(zip(res.left_pricing.prices, res.right_pricing.prices)) if a != b]
    assert diff == [res.crossover_index]
    assert chi(inst, res.left_pricing) <= res.target_x <= chi(inst, res.right_pricing)
    assert res.target_x == max(res.x0, 0.5)
    assert res.revenue >= myerson(inst) / 3
    assert res.pricing == (res.left_pricing if res.chosen == "left" else res.right_pricing)


def test_price_nonregular_third_of_myerson():
    for inst in nonregular_instances(53, 200):
        res = price_nonregular(inst)
        assert chi(inst, res.left_pricing) <= res.target_x + 1e-12
        assert chi(inst, res.right_pricing) >= res.target_x - 1e-12
        assert res.revenue >= myerson(inst) / 3 * (1 - 1e-9)


def test_approx_config_validation():
    for bad in ({"epsilon": 0.0}, {"epsilon": 1.0}, {"delta": 0.0}, {"delta": 1.5}):
        with pytest.raises(ValueError):
            ApproxConfig(**bad)
    assert ApproxConfig(0.2).gamma == pytest.approx(1.25)


def test_approx_grid_sizes():
    cfg = ApproxConfig(0.1, 0.1, 0)
    plan = approx_plan(HALF2, cfg)
    assert not plan.early_exit
    for g, d in zip(plan.grids, HALF2.items):
        assert len(g) <= math.ceil(math.log(d.hi / d.lo) / math.log(cfg.gamma)) + 1
        assert np.all((g >= d.lo) & (g <= d.hi))
    assert all(min(p) > 0 for p in plan.pricings)
    expected = math.ceil(4 * 4 / 0.01 * math.log(2 * len(plan.pricings) / 0.1))
    assert plan.sample_count == expected


def test_approx_early_exit():
    # r(0) = 9 goes unsold half the time
    d = Discrete((1.0, 9.0), (0.5, 0.5))
    inst = ProductInstance((d,))
    plan = approx_plan(inst, ApproxConfig())
    assert plan.early_exit
    assert price_approx(inst).prices == (reserve_price(d, 0.0),) == (9.0,)


def test_approx_against_regular():
    reg = pricing_revenue(HALF2, price_regular(HALF2), "quadrature").revenue
    ok = 0
    for seed in range(10):
        p = price_approx(HALF2, ApproxConfig(0.1, 0.1, seed))
        ok += pricing_revenue(HALF2, p, "quadrature").revenue >= (1 - 0.2) * reg
    assert ok >= 9


def test_approx_is_deterministic():
    inst = ProductInstance((Discrete((1.0, 2.0, 3.0), (0.5, 0.3, 0.2)), Discrete((1.5, 2.5), (0.6, 0.4))))
    cfg = ApproxConfig(0.2, 0.1, 5)
    assert price_approx(inst, cfg) == price_approx(inst, cfg)


def test_vickrey_based_examples():
    assert price_vickrey_based(UNIFORM1).prices == pytest.approx((0.5,), abs=1e-8)
    p = price_vickrey_based(UNIFORM2)
    c = chi(UNIFORM2, p)
    assert 0.5 - 0.005 <= c <= 0.5
    assert p.prices[0] == pytest.approx(ROOT_HALF, abs=5e-3)


def test_vickrey_based_chain():
    for inst in regular_instances(54, 200):
        r0 = optimal_reserves(inst)
        if chi(inst, r0) > 0.5:
            continue
        rev = exact(inst, price_vickrey_based(inst))
        v = auction_revenue(inst, Vickrey(tuple(r0))).revenue
        assert rev >= v / 3.01 * (1 - 1e-9)
        assert rev >= myerson(inst) / 6.02 * (1 - 1e-9)


def test_best_single_price_intro():
    p, rev = best_single_price(intro_instance())
    # price 2 sells unless both values are 1: 2 * (1 - 4/9)
    assert p == 2.0
    assert rev == pytest.approx(10 / 9)


def test_best_single_price_harmonic():
    _, rev = best_single_price(harmonic_instance(16))
    assert rev <= 1 + 1e-9


def test_best_single_price_one_item():
    for inst in regular_instances(55, 100, max_n=1):
        _, rev = best_single_price(inst)
        assert rev == pytest.approx(exact(inst, reserve_prices(inst, 0.0)), abs=1e-12)
    _, rev = best_single_price(UNIFORM1)
    assert rev == pytest.approx(0.25, abs=1e-9)


def test_perturbation_keeps_revenue():
    rng = np.random.default_rng(56)
    for inst in mixed_instances(56, 20):
        base = PriceVector(tuple(float(rng.choice(d.values)) for d in inst.items))
        r = exact(inst, base)
        for eps in (0.05, 0.1, 0.2):
            for _ in range(30):
                f = rng.uniform(1 - eps, 1 + eps * eps - eps, inst.n)
                assert exact(inst, np.array(base.prices) * f) >= (1 - 2 * eps) * r - 1e-12
