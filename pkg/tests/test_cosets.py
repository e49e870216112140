import pytest
import sympy

import core.cosets.gamma1 as gamma1_module

from core.cosets import (
    GENERATOR_TABLE,
    cached_schreier_generators,
    certify_generators,
    certify_loggen_level,
    certify_tabled_level,
    gamma1_coset_action,
    index_gamma0,
    index_gamma1,
    index_gamma_q,
    parse_generator_symbol,
    schreier_generators,
    small_level_generators,
    todd_coxeter,
)
from core.matcore import Mat2, W, gamma_qa, in_gamma0, in_gamma1, neg_identity
from core.words import matrix_to_stword


def _words(*matrices):
    return [matrix_to_stword(m) for m in matrices]


@pytest.mark.parametrize("strategy", ["felsch", "hlt"])
def test_whole_group(strategy):
    result = todd_coxeter(["S", "T"], 100, strategy)
    assert result.complete and result.index == 1


@pytest.mark.parametrize("strategy", ["felsch", "hlt"])
def test_gamma0_two(strategy):
    result = todd_coxeter(["T"] + _words(W(2)), 1000, strategy)
    assert result.index == 3


def test_level_five_generators():
    result = todd_coxeter(["T"] + _words(W(5), gamma_qa(5, 2, 1)), 1000)
    assert result.index == 6
    assert len(result.table) == 6


def test_redundant_word_keeps_index():
    base = ["T"] + _words(W(5), gamma_qa(5, 2, 1))
    extra = _words(gamma_qa(5, 2, 1) * W(5) * gamma_qa(5, 3, 1))
    assert todd_coxeter(base + extra, 1000).index == todd_coxeter(base, 1000).index


def test_overflow_is_a_result():
    result = todd_coxeter(["T"], 50)
    assert result.status == "overflow"
    assert result.index is None
    assert result.to_record()["index"] == "overflow"


def test_bad_arguments():
    with pytest.raises(ValueError):
        todd_coxeter(["T"], 10, strategy="magic")
    with pytest.raises(ValueError):
        todd_coxeter(["T"], 0)


def test_gamma1_coset_action():
    action = gamma1_coset_action(5)
    assert len(action) == 24
    assert len(gamma1_coset_action(1)) == 1
    for c in range(len(action)):
        image = c
        for _ in range(4):
            image = action.perm_S[image]
        assert image == c
    assert sorted(action.perm_T) == list(range(24))


@pytest.mark.parametrize("N", [5, 12])
def test_gamma1_action_inverse_T(N):
    action = gamma1_coset_action(N)
    for c in range(len(action)):
        assert action.perm_T_inv[action.perm_T[c]] == c
        assert action.apply(c, "t") == action.perm_T_inv[c]
        assert action.apply(action.apply(c, "TSt"), "TSSSt") == c


@pytest.mark.parametrize("N", [1, 2, 5, 6, 12])
def test_coset_count_matches_index(N):
    assert len(gamma1_coset_action(N)) == index_gamma1(N)


def test_indices():
    assert index_gamma0(6) == 12
    assert index_gamma0(1) == 1
    assert index_gamma_q(5, 2) == 6
    assert index_gamma1(5) == 24
    with pytest.raises(ValueError):
        index_gamma_q(6, 3)


@pytest.mark.parametrize("N,q", [(5, 2), (7, 2), (12, 5), (13, 3), (22, 7)])
def test_gamma_q_index_relation(N, q):
    order = int(sympy.n_order(q, N))
    assert index_gamma_q(N, q) * order == index_gamma0(N) * int(sympy.totient(N))


@pytest.mark.parametrize("N", [4, 5, 7])
def test_schreier_generators(N):
    gens = schreier_generators(N)
    assert gens.certified
    assert gens.index == index_gamma1(N)
    assert all(in_gamma1(m, N) for m in gens.matrices())
    assert len(gens.fingerprint()) == 16


@pytest.mark.slow
@pytest.mark.parametrize("N", range(1, 31))
def test_schreier_generators_all_levels(N):
    assert schreier_generators(N).certified


@pytest.mark.parametrize("N", sorted(GENERATOR_TABLE))
def test_tabled_generators_certify(N):
    cert = certify_tabled_level(N)
    assert cert.certified, cert.model_dump()
    assert cert.index == index_gamma0(N)
    assert all(in_gamma0(m, N) for m in small_level_generators(N))


def test_loggen_generators_certify():
    assert certify_loggen_level(13).certified


def test_generator_symbols():
    assert parse_generator_symbol("-I", 5) == neg_identity()
    assert parse_generator_symbol("g(10,-3)", 23) == Mat2(10, 3, 23, 7)
    assert parse_generator_symbol("-g(2,1)", 7) == -gamma_qa(7, 2, 1)


def test_certify_rejects_outside_gamma0():
    with pytest.raises(ValueError):
        certify_generators(5, [Mat2(1, 0, 1, 1)])


def test_incomplete_set_is_not_certified():
    cert = certify_generators(5, [W(5), gamma_qa(5, 2, 1)], max_cosets=2000)
    assert not cert.certified


def test_prune_trials_use_a_small_coset_limit(monkeypatch):
    limits = []

    def recording(words, max_cosets, strategy="felsch"):
        limits.append(max_cosets)
        return todd_coxeter(words, max_cosets, strategy)

    monkeypatch.setattr(gamma1_module, "todd_coxeter", recording)
    gens = schreier_generators(7, max_cosets=2_000_000)
    assert gens.certified
    assert limits[-1] == 2_000_000
    assert all(limit <= 16 * index_gamma1(7) for limit in limits[:-1])


def test_pruning_keeps_a_certified_subset():
    pruned = schreier_generators(7)
    full = schreier_generators(7, prune=False)
    assert pruned.certified and full.certified
    assert set(pruned.words) <= set(full.words)


def test_cached_generators_are_reused(monkeypatch):
    calls = []
    original = gamma1_module.schreier_generators

    def counting(N, **kwargs):
        calls.append(N)
        return original(N, **kwargs)

    cached_schreier_generators.cache_clear()
    monkeypatch.setattr(gamma1_module, "schreier_generators", counting)
    first = cached_schreier_generators(5)
    assert cached_schreier_generators(5) is first
    assert calls == [5]
    cached_schreier_generators.cache_clear()


@pytest.mark.slow
def test_level13_generators_certify_quickly():
    gens = schreier_generators(13)
    assert gens.certified
    assert gens.index == 168
