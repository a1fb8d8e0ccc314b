import random
from fractions import Fraction

import pytest

from contextuality import (
    Assignment,
    ContextDistribution,
    GlobalDistribution,
    HiddenVariableModel,
    ValidationError,
    build_incidence,
    contextual_fraction,
    convex_mix,
    find_global_distribution,
    from_hidden_variable,
    global_sections,
    is_logically_contextual,
    is_strongly_contextual,
    logically_contextual_at,
    model_vector,
    noncontextual_fraction,
    possibilistic_collapse,
    signed_global_solution,
    to_hidden_variable,
)
from contextuality.corpus import (
    chsh_model,
    chsh_scenario,
    mermin_square_bell_model,
    pr_box,
    xy322_ghz_model,
    xy322_plus_model,
    xz222_model,
)
from contextuality.scenario import enumerate_assignments


def deterministic_model(scenario, global_assignment):
    dist = GlobalDistribution(scenario, {global_assignment: Fraction(1)})
    return dist.realized_model()


def random_global_mixture(scenario, rng, terms=4):
    """A convex mixture of deterministic global assignments."""
    weights = {}
    points = list(enumerate_assignments(scenario.measurements, scenario.outcomes))
    raws = [rng.randrange(1, 9) for _ in range(terms)]
    total = sum(raws)
    for raw in raws:
        g = rng.choice(points)
        weights[g] = weights.get(g, Fraction(0)) + Fraction(raw, total)
    return GlobalDistribution(scenario, weights)


def test_incidence_shape_and_entries():
    sc = chsh_scenario()
    inc = build_incidence(sc)
    assert inc.shape == (16, 16)
    v = model_vector(chsh_model(), inc)
    assert sum(v) == 4  # four contexts, each row block sums to one
    for i, (ctx, s) in enumerate(inc.row_index):
        hits = sum(inc.entry(i, j) for j in range(16))
        assert hits == 4  # free measurements double the count per level


def test_global_distribution_marginalizes():
    sc = chsh_scenario()
    g = Assignment(sc.measurements, (0, 1, 0, 1))
    model = deterministic_model(sc, g)
    ctx = sc.contexts[0]
    assert model.probability(ctx, g.restrict(ctx.members)) == 1


def test_find_global_distribution_on_mixtures():
    rng = random.Random(21)
    sc = chsh_scenario()
    for _ in range(10):
        dist = random_global_mixture(sc, rng)
        model = dist.realized_model()
        found = find_global_distribution(model)
        assert found is not None
        assert found.realized_model() == model


def test_no_global_distribution_for_pr_box():
    assert find_global_distribution(pr_box()) is None
    assert find_global_distribution(chsh_model()) is None


def test_noncontextual_fraction_values():
    assert noncontextual_fraction(chsh_model()).ncf == Fraction(3, 4)
    assert contextual_fraction(chsh_model()) == Fraction(1, 4)
    assert noncontextual_fraction(pr_box()).ncf == 0
    assert noncontextual_fraction(xz222_model()).ncf == 1
    assert noncontextual_fraction(xy322_plus_model()).ncf == 1
    assert noncontextual_fraction(mermin_square_bell_model()).ncf == 0


def test_ncf_witness_is_a_valid_subdistribution():
    res = noncontextual_fraction(chsh_model())
    total = sum(res.witness.values())
    assert total == res.ncf
    model = chsh_model()
    for ctx in model.scenario.contexts:
        for s, w in model.rows[ctx].weights.items():
            mass = sum(v for g, v in res.witness.items() if g.extends(s))
            assert mass <= w


def test_ncf_interpolates_along_mixtures():
    # ncf is exactly linear between the PR vertex and its classical part
    a, b = chsh_model(), pr_box()
    for lam in (Fraction(0), Fraction(1, 2), Fraction(1)):
        m = convex_mix(a, b, lam)
        ncf = noncontextual_fraction(m).ncf
        assert ncf >= lam * Fraction(3, 4) - (1 - lam)


def test_global_sections_and_strength():
    assert len(global_sections(chsh_model())) == 8
    assert global_sections(pr_box()) == ()
    assert is_strongly_contextual(pr_box())
    assert not is_strongly_contextual(chsh_model())
    assert len(global_sections(xz222_model())) == 4
    assert len(global_sections(xy322_plus_model())) == 64


def test_logical_contextuality():
    assert not is_logically_contextual(chsh_model())
    assert is_logically_contextual(pr_box())
    assert is_logically_contextual(xy322_ghz_model())
    poss = possibilistic_collapse(pr_box())
    ctx = poss.scenario.contexts[0]
    s = next(iter(poss.support(ctx)))
    assert logically_contextual_at(poss, ctx, s)
    with pytest.raises(ValidationError):
        logically_contextual_at(poss, ctx, Assignment(ctx.members, [0, 1]))


def test_hidden_variable_round_trip_exact():
    rng = random.Random(22)
    sc = chsh_scenario()
    for _ in range(10):
        dist = random_global_mixture(sc, rng)
        hv = to_hidden_variable(dist)
        assert set(hv.prior) == set(dist.weights)
        back = from_hidden_variable(hv)
        assert back.realized_model() == dist.realized_model()


def test_hidden_variable_rejects_nonfactorisable():
    sc = chsh_scenario()
    lam = "l"
    ctxs = sc.contexts
    conditionals = {}
    for ctx in ctxs:
        # correlated responses cannot factor into per-measurement terms
        weights = {Assignment(ctx.members, (0, 0)): Fraction(1, 2),
                   Assignment(ctx.members, (1, 1)): Fraction(1, 2)}
        conditionals[(lam, ctx)] = ContextDistribution(ctx, (0, 1), weights)
    hv = HiddenVariableModel(sc, (lam,), {lam: Fraction(1)}, conditionals)
    with pytest.raises(ValidationError):
        from_hidden_variable(hv)


def test_signed_global_solution_separates_pr_box():
    # the PR box has no probabilistic global distribution but does admit
    # a signed one; CHSH likewise
    for model in (pr_box(), chsh_model()):
        signed = signed_global_solution(model)
        assert signed is not None
        assert any(v < 0 for v in signed.values())
        sc = model.scenario
        for ctx in sc.contexts:
            for s in model.rows[ctx].weights:
                mass = sum(v for g, v in signed.items() if g.extends(s))
                assert mass == model.probability(ctx, s)


def test_signed_solution_matches_probabilistic_when_noncontextual():
    m = xz222_model()
    assert find_global_distribution(m) is not None
    signed = signed_global_solution(m)
    assert signed is not None
