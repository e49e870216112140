import json

import pytest
import sympy

from core.cosets import index_gamma_q, schreier_generators
from core.hq import (
    EXPLICIT_Q_TABLE,
    VERDICT_STATUSES,
    HqVerifier,
    Verdict,
    Witness,
    WitnessCache,
    divisor_coverage,
    divisor_lift,
    find_witnesses,
    generator_fingerprint,
    hq_coset_verify,
    hq_generator_words,
    q_domain,
    replay_witness,
    sieve_q,
    tw_in_hq_witnesses,
)
from core.matcore import Mat2, T, W, in_gamma0


def test_divisor_coverage():
    assert divisor_coverage(24, 5)
    assert divisor_coverage(-24, 5)
    assert not divisor_coverage(2, 5)
    assert divisor_coverage(7, 1)
    with pytest.raises(ValueError):
        divisor_coverage(0, 5)
    with pytest.raises(ValueError):
        divisor_coverage(6, 0)


def test_q_domain():
    assert q_domain(6, 1, 20, False).tolist() == [1, 5, 7, 11, 13, 17, 19]
    assert q_domain(6, 1, 20, True).tolist() == [5, 7, 11, 13, 17, 19]
    assert q_domain(6, -3, 1, False).tolist() == [1]
    with pytest.raises(ValueError):
        q_domain(6, 10, 9, False)


def test_witness_conditions():
    w = Witness(level=5, gen_index=0, r=11, b=1, m=2)
    assert w.modulus == 11 and w.residue == 10
    assert w.admits(21)
    assert not w.admits(32)
    assert not w.admits(22)


def test_sieve_with_handmade_witness():
    w = Witness(level=5, gen_index=0, r=11, b=1, m=2)
    verdicts = sieve_q([w], 1, 1, 40, False, 5)
    assert [v.q for v in verdicts] == q_domain(5, 1, 40, False).tolist()
    assert [v.q for v in verdicts if v.verified] == [21]
    assert next(v for v in verdicts if v.q == 21).details == {"witnesses": [0]}
    two_gens = sieve_q([w], 2, 1, 40, False, 5, segment_size=7)
    assert not any(v.verified for v in two_gens)
    assert next(v for v in two_gens if v.q == 21).details == {"uncovered_generators": [1]}
    assert [v.q for v in two_gens] == [v.q for v in verdicts]


def test_sieve_preconditions():
    w = Witness(level=5, gen_index=3, r=11, b=1, m=2)
    with pytest.raises(ValueError):
        sieve_q([w], 2, 1, 40, False, 5)
    with pytest.raises(ValueError):
        sieve_q([], 1, 40, 1, False, 5)


@pytest.mark.parametrize("N,q", [(5, 2), (7, 3), (11, 12), (23, 10), (1, 4)])
def test_tw_witnesses(N, q):
    pairs = tw_in_hq_witnesses(N, q)
    p, r = pairs["w_pair"]
    assert p * r.inverse() == W(N)
    p, r = pairs["t_pair"]
    assert p.inverse() * r == T()
    for M in (*pairs["w_pair"], *pairs["t_pair"]):
        assert M.a == q and in_gamma0(M, N)


def test_tw_witness_preconditions():
    with pytest.raises(ValueError):
        tw_in_hq_witnesses(7, 14)
    with pytest.raises(ValueError):
        tw_in_hq_witnesses(7, 0)


def test_divisor_lift():
    assert divisor_lift(5, 2, 1, 17, 3) == (1, 1)
    with pytest.raises(ValueError):
        divisor_lift(5, 2, 1, 17, 2)
    with pytest.raises(ValueError):
        divisor_lift(5, 2, 2, 17, 3)


def test_hq_generator_words():
    base, gammas = hq_generator_words(5, 3)
    assert len(base) == 4
    assert len(gammas) == 2


@pytest.mark.parametrize("q", [2, 3])
def test_coset_verify_generating_residues(q):
    verdict = hq_coset_verify(5, q, max_cosets=5000, batch_size=1)
    assert verdict.status == "verified_coset"
    assert verdict.index == 6
    assert verdict.via == "coset"


def test_coset_verify_overflow():
    verdict = hq_coset_verify(5, 2, max_cosets=2, batch_size=1)
    assert verdict.status == "inconclusive"
    assert not verdict.verified


def test_coset_verify_large_q():
    verdict = hq_coset_verify(6, 2485, max_cosets=200_000)
    assert verdict.status == "verified_coset"
    assert verdict.index == 24 == index_gamma_q(6, 2485)
    assert verdict.details["gammas_used"] <= int(sympy.totient(2485))


@pytest.fixture(scope="module")
def level5_witnesses():
    gens = schreier_generators(5).matrices()
    return gens, find_witnesses(5, gens, height_bound=20, max_per_gen=40)


def test_every_generator_has_a_witness(level5_witnesses):
    gens, found = level5_witnesses
    assert {w.gen_index for w in found} == set(range(len(gens)))
    for w in found:
        assert (w.r - 1) % 5 == 0
        assert w.gamma(gens[w.gen_index]).top_row() == (w.r, w.b)


def test_replayed_witnesses_have_entry_q(level5_witnesses):
    gens, found = level5_witnesses
    checked = 0
    for w in found:
        if abs(w.m) > 50:
            continue
        q = next(q for q in (w.residue + k * w.modulus for k in range(5 * abs(w.m) + 2))
                 if q > 0 and w.admits(q))
        product = replay_witness(w, gens[w.gen_index], q)
        assert product.a == q
        assert in_gamma0(product, 5)
        checked += 1
    assert checked > 0


def test_replay_rejects_wrong_q(level5_witnesses):
    gens, found = level5_witnesses
    w = next(w for w in found if w.modulus > 2)
    q = w.residue + 1 if w.residue + 1 < w.modulus else 1
    with pytest.raises(ValueError):
        replay_witness(w, gens[w.gen_index], q)


def test_witness_cache(tmp_path):
    path = tmp_path / "cache" / "witnesses.json"
    cache = WitnessCache(path)
    w = Witness(level=5, gen_index=0, r=11, b=1, m=2)
    cache.put(5, "aaaa", 20, [w])
    assert WitnessCache(path).get(5, "aaaa", 20) == [w]
    assert cache.get(5, "aaaa", 30) is None
    cache.put(5, "bbbb", 20, [])
    reloaded = WitnessCache(path)
    assert reloaded.get(5, "aaaa", 20) is None
    assert reloaded.get(5, "bbbb", 20) == []


def test_witness_cache_corrupted(tmp_path):
    path = tmp_path / "witnesses.json"
    path.write_text("{not json")
    assert WitnessCache(path).entries == {}


def test_fingerprint_tracks_generators():
    a = [Mat2(1, 1, 0, 1), Mat2(1, 0, 5, 1)]
    assert generator_fingerprint(a) == generator_fingerprint(list(a))
    assert generator_fingerprint(a) != generator_fingerprint(a[::-1])


def test_verifier_on_small_primes(tmp_path):
    cache = tmp_path / "witnesses.json"
    verifier = HqVerifier(witness_cache=cache, max_workers=2)
    verdicts = verifier.verify(5, 2, 3, primes_only=True, height_bound=20, max_cosets=5000, fallback_q_max=10)
    assert [v.q for v in verdicts] == [2, 3]
    assert all(v.verified for v in verdicts)
    assert all(v.status in VERDICT_STATUSES for v in verdicts)
    stored = json.loads(cache.read_text())["entries"]
    assert len(stored) == 1
    _, cached = HqVerifier(witness_cache=cache).witnesses(5, 20)
    assert [w.model_dump() for w in cached] == next(iter(stored.values()))


def test_fallback_reaches_every_uncovered_q():
    verdicts = HqVerifier(max_workers=2).verify(6, 2480, 2490, height_bound=20)
    assert [v.q for v in verdicts] == [2483, 2485, 2489]
    assert all(v.verified for v in verdicts)


def test_fallback_cap_leaves_larger_q_to_the_sieve():
    verdicts = HqVerifier(max_workers=2).verify(6, 2480, 2490, height_bound=20, fallback_q_max=10)
    assert all(v.via == "sieve" for v in verdicts)


def test_verifier_reads_coset_settings(settings):
    settings.set_setting(123, "cosets", "max_relation_length")
    verifier = HqVerifier(settings=settings)
    assert verifier.max_relation_length == 123
    assert verifier.config["coset_fallback_q_max"] == 0


def test_verifier_rejects_empty_range():
    with pytest.raises(ValueError):
        HqVerifier().verify(5, 10, 3)


def test_explicit_table():
    assert sorted(EXPLICIT_Q_TABLE) == list(range(5, 23))
    row = EXPLICIT_Q_TABLE[6]
    assert row.coprime[0] == 1
    assert EXPLICIT_Q_TABLE[17].coprime == (390, 10 ** 5)
    with pytest.raises(ValueError):
        HqVerifier().table_slice(4, 100)


@pytest.mark.slow
def test_table_slice_level6():
    out = HqVerifier().table_slice(6, 30, height_bound=20)
    assert [v.q for v in out["coprime"]] == [1, 5, 7, 11, 13, 17, 19, 23, 25, 29]
    assert [v.q for v in out["prime"]] == [5, 7, 11, 13, 17, 19, 23, 29]
    assert all(v.verified for part in out.values() for v in part)


def test_verdict_record():
    v = Verdict(q=7, status="inconclusive", via="sieve", details={"uncovered_generators": [2]})
    assert v.to_record() == {"q": 7, "status": "inconclusive", "via": "sieve",
                             "details": {"uncovered_generators": [2]}}


@pytest.mark.slow
def test_level13_prime_slice_fully_verified():
    verdicts = HqVerifier().verify(13, 6, 9999, primes_only=True)
    assert len(verdicts) == 1225
    assert [v.q for v in verdicts if not v.verified] == []


@pytest.mark.slow
def test_level6_coprime_slice_fully_verified():
    verdicts = HqVerifier().verify(6, 1, 9999)
    assert len(verdicts) == 3333
    assert [v.q for v in verdicts if not v.verified] == []


@pytest.mark.slow
def test_level13_witnesses_cover_every_generator():
    gens = schreier_generators(13).matrices()
    found = find_witnesses(13, gens, height_bound=60, max_per_gen=400)
    assert {w.gen_index for w in found} == set(range(len(gens)))


@pytest.mark.slow
def test_sieve_and_coset_routes_agree(rng):
    verifier = HqVerifier()
    harvested = {}
    agreed = 0
    for _ in range(2000):
        N = int(rng.integers(2, 11))
        q = int(rng.integers(1, 201))
        if sympy.gcd(q, N) != 1:
            continue
        if N not in harvested:
            harvested[N] = verifier.witnesses(N)
        gens, found = harvested[N]
        sieved = sieve_q(found, len(gens), q, q, False, N)[0]
        if not sieved.verified:
            continue
        verdict = hq_coset_verify(N, q, max_cosets=200_000)
        assert verdict.status == "verified_coset", (N, q)
        assert verdict.index == index_gamma_q(N, q)
        agreed += 1
        if agreed == 20:
            break
    assert agreed == 20
