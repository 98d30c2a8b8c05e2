import math

import pytest

import cocycle_lab as cl


def test_spectral_norm_and_inverse():
    assert cl.spectral_norm(cl.Mat2.diag(4.0, 0.25)) == pytest.approx(4.0, rel=1e-15)
    shear = cl.Mat2(1.0, 0.0, 1.0, 1.0)
    assert cl.spectral_norm(shear) == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-14)
    assert (shear * cl.inverse(shear)) == cl.Mat2.identity()
    assert shear.tolist() == [[1.0, 0.0], [1.0, 1.0]]


def test_errors_carry_their_kind():
    with pytest.raises(cl.CocycleLabError) as info:
        cl.inverse(cl.Mat2(1.0, 2.0, 2.0, 4.0))
    assert info.value.kind == "singular matrix"
    with pytest.raises(ValueError):
        cl.BernoulliParams(1.5)


def test_words_and_distance():
    u = cl.Word.parse(-2, "00111")
    v = cl.Word.parse(-2, "00101")
    assert str(u) == "00111"
    assert (u.lo, u.hi, len(u)) == (-2, 2, 5)
    assert cl.word_distance(u, v) == 0.5
    assert cl.cylinder_measure(cl.return_cylinder(2), cl.BernoulliParams(0.5)) == 1 / 32


def test_perturbed_cocycle_matches_closed_form():
    params = cl.ConstructionParams(4.0, 2.0, 0.4, k=2)
    bn = cl.build_perturbed(params)
    assert bn.kind == "perturbed" and bn.sl2
    # Coordinates [-2k, 4k] with the return word on [0, 2k].
    context = cl.Word(-4, [1, 0, 1, 1] + [0, 0, 1, 1, 1] + [0, 1, 1, 0])
    m = cl.iterate(bn, context, params.n)
    cf = cl.closed_form_Bn(params)
    assert m.a12 == pytest.approx(cf.a12, rel=1e-12)
    assert m.a21 == pytest.approx(cf.a21, rel=1e-12)
    assert abs(m.a11) < 1e-9 and abs(m.a22) < 1e-9


def test_holder_exact_below_bound():
    params = cl.ConstructionParams(4.0, 2.0, 0.4, k=2)
    h = cl.holder_norm_exact(cl.difference(cl.build_perturbed(params), cl.build_base(4.0, 2.0)), 0.4)
    assert h.exact
    assert h.norm <= cl.holder_bound(params)
    assert cl.holder_bound_terms(params).total == cl.holder_bound(params)
    assert cl.decay_conditions(params).all()


def test_exponent_estimate():
    est = cl.mc_exponent(cl.build_base(4.0, 2.0), 0.5, steps=20000, trials=16, seed=1)
    exact = cl.exact_exponent_base(4.0, 2.0, 0.5)
    assert exact == pytest.approx(0.5 * math.log(2.0))
    assert abs(est.lambda_plus - exact) <= 3 * est.std_error
    assert est.lambda_minus == -est.lambda_plus
    again = cl.mc_exponent(cl.build_base(4.0, 2.0), 0.5, steps=20000, trials=16, seed=1, workers=3)
    assert again.per_trial == est.per_trial


def test_swap_and_returns():
    params = cl.ConstructionParams(4.0, 2.0, 0.4, k=2)
    assert cl.verify_swap(params).passed()
    assert not cl.verify_swap(params, perturbed=False).passed()
    kac = cl.kac_statistics(1, 0.5, 20000, seed=0)
    assert kac.expected == 8.0
    assert abs(kac.mean_return - 8.0) <= 3 * kac.std_error
    excursions, truncated = cl.sample_return_excursions(2, 0.5, 20, seed=4)
    assert truncated == 0
    bn = cl.build_perturbed(params)
    for exc in excursions:
        assert cl.diagonal_residual(cl.induced_matrix(bn, exc)) <= 1e-9


def test_regions():
    report = cl.classify(4.0, 2.0, 0.4, 0.5)
    assert report.labels
    assert report.to_csv_row().startswith("4")
    grid = cl.sweep(0.4, 0.5, (1.1, 4.0), (1.1, 4.0), 5)
    assert len(grid) > 0
    assert cl.REGION_CSV_HEADER.startswith("sigma,eta")
