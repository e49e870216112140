import math

import pytest

from core.twists import (
    DirichletCharacter,
    DirichletPolynomial,
    HeckeCoefficients,
    all_characters,
    build_D,
    c_chi,
    c_chi_direct,
    character_family,
    character_from_spec,
    check_fe,
    fe_instance,
    gauss_sum,
    load_coefficients,
    oracle_twist_ratio,
    orthogonality_check,
    ramanujan_c,
    ramanujan_c_direct,
    random_hecke_coefficients,
    recursion_holds,
    reflection_factor,
    save_coefficients,
    unit_group,
)


def quadratic_mod5():
    return DirichletCharacter(5, [2])


def test_ramanujan_values():
    assert ramanujan_c(4, 2) == -2
    assert all(ramanujan_c(1, n) == 1 for n in range(10))
    assert all(ramanujan_c(7, n) == -1 for n in range(1, 20) if n % 7)
    assert ramanujan_c(7, 14) == 6
    with pytest.raises(ValueError):
        ramanujan_c(0, 3)


@pytest.mark.parametrize("q", range(1, 25))
def test_ramanujan_matches_direct(q):
    assert all(ramanujan_c(q, n) == ramanujan_c_direct(q, n) for n in range(0, 2 * q + 1))


def test_unit_group():
    components, logs = unit_group(16)
    assert [order for _, order in components] == [2, 4]
    assert len(logs) == 8
    components, logs = unit_group(45)
    assert math.prod(order for _, order in components) == 24 == len(logs)


def test_character_basics():
    chars = all_characters(12)
    assert len(chars) == 4
    assert chars[0].is_trivial()
    chi = quadratic_mod5()
    assert chi.order == 2
    assert chi(2) == -1 and chi(4) == 1 and chi(5) == 0
    assert chi.parity() == 1
    assert chi * chi == DirichletCharacter.trivial(5)
    assert chi.conj() == chi
    assert DirichletCharacter(5, [1]).parity() == -1


@pytest.mark.parametrize("q", [5, 8, 9, 12, 15, 16])
def test_characters_are_multiplicative(q):
    for chi in all_characters(q):
        for a in range(q):
            for b in range(q):
                assert chi(a * b) == chi(a) * chi(b)


def test_conductors():
    assert DirichletCharacter.trivial(12).conductor == 1
    chi = DirichletCharacter(8, [1, 0])
    assert chi.conductor == 4
    assert chi.q0 == 1 and chi.q2 == 2
    assert sum(c.is_primitive() for c in all_characters(9)) == 4
    # components of (Z/15)^x: the 3-part first, then the 5-part
    induced = DirichletCharacter(15, [0, 2])
    assert induced.conductor == 5 and induced.q0 == 3 and induced.q2 == 1
    star = induced.primitive()
    assert star.modulus == induced.conductor
    assert all(star(a) == induced(a) for a in range(15) if math.gcd(a, 15) == 1)


def test_character_specs():
    chi = quadratic_mod5()
    assert character_from_spec(chi.to_spec()) == chi
    assert character_from_spec("trivial:7") == DirichletCharacter.trivial(7)
    assert character_from_spec(7).is_trivial()
    assert character_from_spec(None).modulus == 1
    with pytest.raises(ValueError):
        character_from_spec("seven")


def test_gauss_sums():
    chi = quadratic_mod5()
    tau = gauss_sum(chi)
    assert tau * tau.conj() == 5
    with pytest.raises(ValueError):
        gauss_sum(DirichletCharacter.trivial(4))


@pytest.mark.parametrize("q", [5, 7, 8, 9, 16])
def test_gauss_sum_relation(q):
    for chi in all_characters(q):
        if not chi.is_primitive():
            continue
        assert gauss_sum(chi) * gauss_sum(chi.conj()) == chi.parity() * q


@pytest.mark.parametrize("q", [1, 4, 6, 8, 9, 12, 18, 20, 24])
def test_c_chi_matches_direct(q):
    for chi in all_characters(q):
        for n in range(0, 2 * q + 1):
            assert c_chi(chi, n) == c_chi_direct(chi, n), (chi, n)


def test_trivial_character_gives_ramanujan_sum():
    chi = DirichletCharacter.trivial(12)
    assert all(c_chi(chi, n) == ramanujan_c(12, n) for n in range(30))


@pytest.mark.parametrize("Q", [1, 6, 8, 12])
def test_orthogonality(Q):
    assert orthogonality_check(Q) == (True, Q)
    assert len(character_family(Q)) == Q


@pytest.fixture
def level5(rng):
    xi = DirichletCharacter(5, [1])
    return random_hecke_coefficients(5, xi, 600, rng)


def test_hecke_recursion_and_multiplicativity(level5):
    h = level5
    for p in (2, 3, 7):
        assert recursion_holds(h, p)
    assert h.coefficient(1) == 1
    assert h.coefficient(12) == h.coefficient(4) * h.coefficient(3)
    assert h.coefficient(25) == h.bad[25]
    with pytest.raises(ValueError):
        h.coefficient(601)
    with pytest.raises(ValueError):
        recursion_holds(h, 5)


def test_hecke_validation():
    with pytest.raises(ValueError):
        HeckeCoefficients(5, None, {5: 1})
    with pytest.raises(ValueError):
        HeckeCoefficients(5, None, {2: 1}, bad={6: 1})
    with pytest.raises(ValueError):
        HeckeCoefficients(6, DirichletCharacter(5), {7: 1})
    h = HeckeCoefficients(5, None, {2: 1}, bound=100)
    with pytest.raises(ValueError):
        h.coefficient(3)


def test_dual(level5):
    h = level5
    g = h.dual()
    assert g.xi == h.xi.conj()
    for n in (2, 3, 6, 8, 12, 49):
        assert g.coefficient(n) * h.xi(n) == h.coefficient(n)
    assert g.coefficient(25) == h.coefficient(25)
    back = g.dual()
    assert all(back.coefficient(n) == h.coefficient(n) for n in range(1, 60))


def test_coefficient_file(tmp_path, level5):
    path = tmp_path / "coeffs.json"
    save_coefficients(level5, path)
    loaded = load_coefficients(path)
    assert loaded.N == 5 and loaded.xi == level5.xi and loaded.bound == level5.bound
    assert all(loaded.coefficient(n) == level5.coefficient(n) for n in range(1, 100))


def test_dirichlet_polynomial_algebra():
    u2 = DirichletPolynomial.monomial(1, {2: 1})
    one = DirichletPolynomial.constant(1)
    assert (u2 - u2).is_zero()
    assert (one + u2) * (one - u2) == one - u2 * u2
    assert (u2 * 3).coefficients() == {2: 3}
    assert DirichletPolynomial.term(5, 12).coefficients() == {12: 5}
    reflected = u2.reflect()
    assert reflected.reflect() == u2
    with pytest.raises(ValueError):
        reflected.coefficients()
    s = 0.3 + 2j
    value = (one + u2).evaluate(s)
    assert abs(value - (1 + 2 ** (-s))) < 1e-12


def test_primitive_character_gives_trivial_ratio(level5):
    chi = DirichletCharacter(3, [1])
    assert build_D(level5, chi) == DirichletPolynomial.constant(1)


def test_trivial_character_mod_p(level5):
    h, p = level5, 7
    D = build_D(h, DirichletCharacter.trivial(p))
    expected = (DirichletPolynomial.monomial(h.lambda_p[p] * p, {p: 1})
                - DirichletPolynomial.constant(1)
                - DirichletPolynomial.monomial(h.xi(p) * p, {p: 2}))
    assert D == expected


def test_build_D_preconditions(level5):
    with pytest.raises(ValueError):
        build_D(level5, DirichletCharacter.trivial(10))


@pytest.mark.parametrize("q", [3, 4, 7, 8, 9, 12, 16, 18])
def test_functional_equation_all_characters(level5, q, rng):
    for chi in all_characters(q):
        report = fe_instance(level5, chi, rng=rng)
        assert report.fe_holds, report.model_dump()


@pytest.mark.parametrize("q", [4, 9, 12])
def test_oracle_agrees_with_closed_form(level5, q):
    for chi in all_characters(q):
        assert oracle_twist_ratio(level5, chi, 600)


def test_fe_report_runs_both_routes(level5, rng):
    chi = DirichletCharacter(9, [3])
    report = fe_instance(level5, chi, X=400, rng=rng)
    assert report.passed
    assert report.oracle_holds is True
    assert report.conductor == chi.conductor


def test_corrupted_polynomial_fails_oracle(level5):
    chi = DirichletCharacter.trivial(9)
    D = build_D(level5, chi) + DirichletPolynomial.monomial(1, {3: 1})
    assert not oracle_twist_ratio(level5, chi, 600, D)


def test_oracle_range_too_small(level5):
    with pytest.raises(ValueError):
        oracle_twist_ratio(level5, DirichletCharacter.trivial(9), 5)


def test_check_fe_preconditions(level5):
    chi = DirichletCharacter.trivial(9)
    Df = build_D(level5, chi)
    Dg = build_D(level5.dual(), chi.conj())
    with pytest.raises(ValueError):
        check_fe(Df, Dg, 9, 2, level5.xi)
    stray = Df + DirichletPolynomial.monomial(1, {2: 1})
    with pytest.raises(ValueError):
        check_fe(stray, Dg, 9, 1, level5.xi)
    assert check_fe(Df, Dg, 9, 1, level5.xi)
    assert not check_fe(Df * 2, Dg, 9, 1, level5.xi)


def test_reflection_factor():
    xi = DirichletCharacter(5, [1])
    factor = reflection_factor(12, 3, xi)
    assert factor == DirichletPolynomial.monomial(xi(4) * 4, {2: 4})


def test_fe_instance_precision_setting(level5, rng):
    chi = DirichletCharacter(7, [1])
    assert fe_instance(level5, chi, rng=rng, dps=50).fe_holds


@pytest.mark.slow
def test_ramanujan_matches_direct_to_200():
    for q in range(1, 201):
        for n in range(0, 201):
            assert ramanujan_c(q, n) == ramanujan_c_direct(q, n), (q, n)


@pytest.mark.slow
@pytest.mark.parametrize("q", range(1, 73))
def test_c_chi_matches_direct_to_72(q):
    for chi in all_characters(q):
        for n in range(0, 145):
            assert c_chi(chi, n) == c_chi_direct(chi, n), (chi, n)


@pytest.mark.slow
@pytest.mark.parametrize("Q", range(1, 61))
def test_orthogonality_to_60(Q):
    assert orthogonality_check(Q) == (True, Q)


@pytest.mark.slow
def test_random_functional_equation_instances(rng):
    checked = 0
    while checked < 200:
        N = int(rng.choice([5, 7, 11, 13]))
        characters_mod_N = all_characters(N)
        xi = characters_mod_N[int(rng.integers(0, len(characters_mod_N)))]
        h = random_hecke_coefficients(N, xi, 1000, rng)
        q = int(rng.integers(2, 61))
        if math.gcd(q, N) != 1:
            continue
        characters = all_characters(q)
        chi = characters[int(rng.integers(0, len(characters)))]
        report = fe_instance(h, chi, X=1000, rng=rng)
        assert report.fe_holds and report.oracle_holds, report.model_dump()
        checked += 1
