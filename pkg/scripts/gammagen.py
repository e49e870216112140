"""
gammagen: command line front end for the generator, H_q and twist checks.

Every subcommand produces a list of records and one outcome per record
('pass', 'fail' or 'inconclusive').  Records go to standard output as JSON
lines, a pandas table or YAML; logging and progress bars go to standard error.

Exit codes: 0 when everything passed, 1 on any failure or error, 2 when the
only non-passing outcomes are inconclusive.
"""
import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import sympy
import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, model_validator
from tqdm import tqdm

from core.cosets import (
    GENERATOR_TABLE,
    certify_loggen_level,
    certify_tabled_level,
    schreier_generators,
    todd_coxeter,
)
from core.exactalg import ExpSumMatrix, key_det_nonzero, random_exp_sum_matrix
from core.hq import HqVerifier, Verdict, divisor_coverage
from core.matcore import check_all_identities, format_matrix, height, parse_matrix
from core.settings import SettingsManager
from core.twists import (
    all_characters,
    character_from_spec,
    fe_instance,
    load_coefficients,
    orthogonality_check,
    ramanujan_c,
    ramanujan_c_direct,
)
from core.words import TWWordList, audit_height_levels, count_tw, loggen_decompose

logger = logging.getLogger("gammagen")

Outcome = str
CommandResult = Tuple[List[dict], List[Outcome]]

EMIT_FORMATS = ("jsonl", "table", "yaml")


class RunConfig(BaseModel):
    """One CLI invocation."""
    command: str = Field(..., description="Subcommand name")
    level: Optional[int] = Field(None, description="Level N")
    q_lo: Optional[int] = Field(None, description="Lower end of the q range")
    q_hi: Optional[int] = Field(None, description="Upper end of the q range")
    primes_only: bool = Field(False, description="Restrict q to primes")
    height_bound: Optional[int] = Field(None, description="Word height bound")
    max_cosets: Optional[int] = Field(None, description="Coset table limit")
    witness_cache: Optional[str] = Field(None, description="Witness cache file")
    emit: str = Field("jsonl", description="Output format")
    seed: int = Field(0, description="Seed for every random draw")

    @model_validator(mode="after")
    def check_ranges(self) -> "RunConfig":
        if self.q_lo is not None and self.q_hi is not None and self.q_lo > self.q_hi:
            raise ValueError(f"Empty q range [{self.q_lo}, {self.q_hi}]")
        if self.level is not None and self.level < 1:
            raise ValueError(f"Level must be a positive integer, got {self.level}")
        if self.emit not in EMIT_FORMATS:
            raise ValueError(f"Unknown emit format {self.emit}")
        return self


def exit_code(outcomes: List[Outcome]) -> int:
    if any(o == "fail" for o in outcomes):
        return 1
    if any(o == "inconclusive" for o in outcomes):
        return 2
    return 0


def _verdict_outcome(v: Verdict) -> Outcome:
    if v.verified:
        return "pass"
    if v.status == "index_mismatch" or v.error:
        return "fail"
    return "inconclusive"


def _guarded(records: List[dict], outcomes: List[Outcome], label: dict, fn: Callable[[], Tuple[dict, Outcome]]) -> None:
    """Run one item; an exception becomes an error record instead of aborting the batch."""
    try:
        record, outcome = fn()
    except Exception as e:
        logger.error(f"{label} failed: {str(e)}")
        record, outcome = {**label, "error": str(e)}, "fail"
    records.append(record)
    outcomes.append(outcome)


# Subcommands


def cmd_gens(args, settings: SettingsManager) -> CommandResult:
    max_cosets = args.max_cosets or settings.get_setting("cosets", "max_cosets")
    strategy = settings.get_setting("cosets", "strategy")
    max_relation_length = settings.get_setting("cosets", "max_relation_length")
    levels = sorted(GENERATOR_TABLE) if args.all_tabled else [args.level]
    records, outcomes = [], []
    for N in tqdm(levels, desc="Certifying generators", disable=len(levels) < 2):
        certificates = []
        if N in GENERATOR_TABLE:
            certificates.append(lambda N=N: certify_tabled_level(N, max_cosets, strategy))
        if not args.all_tabled and sympy.isprime(N):
            certificates.append(lambda N=N: certify_loggen_level(N, max_cosets, strategy))
        with_gamma1 = args.gamma1 or not certificates
        if not args.gamma1 and not certificates:
            logger.info(f"N={N} is neither tabled nor prime, certifying Schreier generators of Gamma_1({N})")
        for make in certificates:
            def run(make=make):
                cert = make()
                outcome = "pass" if cert.certified else ("inconclusive" if cert.status == "overflow" else "fail")
                return cert.model_dump(), outcome
            _guarded(records, outcomes, {"level": N}, run)
        if with_gamma1:
            def run_gamma1(N=N):
                gens = schreier_generators(N, max_cosets=max_cosets, max_relation_length=max_relation_length)
                return {"level": N, "group": "Gamma_1", **gens.model_dump(),
                        "fingerprint": gens.fingerprint()}, "pass" if gens.certified else "fail"
            _guarded(records, outcomes, {"level": N, "group": "Gamma_1"}, run_gamma1)
    return records, outcomes


def cmd_identities(args, settings: SettingsManager) -> CommandResult:
    checks = check_all_identities()
    return [c.to_record() for c in checks], ["pass" if c.holds else "fail" for c in checks]


def cmd_verify_hq(args, settings: SettingsManager) -> CommandResult:
    verifier = HqVerifier(settings=settings, witness_cache=args.witness_cache)
    verdicts = verifier.verify(args.level, args.q_from, args.q_to, args.primes_only,
                               height_bound=args.height_bound, max_cosets=args.max_cosets)
    records = [{"level": args.level, **v.to_record()} for v in verdicts]
    return records, [_verdict_outcome(v) for v in verdicts]


def cmd_table(args, settings: SettingsManager) -> CommandResult:
    verifier = HqVerifier(settings=settings, witness_cache=args.witness_cache)
    slices = verifier.table_slice(args.level, args.q_to, height_bound=args.height_bound)
    records, outcomes = [], []
    for interval, verdicts in slices.items():
        for v in verdicts:
            records.append({"level": args.level, "interval": interval, **v.to_record()})
            outcomes.append(_verdict_outcome(v))
    return records, outcomes


def cmd_cosets(args, settings: SettingsManager) -> CommandResult:
    words = [line.strip() for line in Path(args.words).read_text(encoding="utf-8").splitlines()
             if line.strip() and not line.startswith("#")]
    max_cosets = args.max_cosets or settings.get_setting("cosets", "max_cosets")
    strategy = args.strategy or settings.get_setting("cosets", "strategy")
    result = todd_coxeter(words, max_cosets, strategy)
    record = {"generators": len(words), "strategy": strategy, **result.to_record()}
    return [record], ["pass" if result.complete else "inconclusive"]


def _characters(args) -> list:
    if args.all_characters:
        return all_characters(args.modulus)
    if args.character:
        spec = json.loads(args.character) if args.character.lstrip().startswith("{") else args.character
        chi = character_from_spec(spec)
        if chi.modulus != args.modulus:
            raise ValueError(f"Character modulus {chi.modulus} differs from --modulus {args.modulus}")
        return [chi]
    return [character_from_spec(f"trivial:{args.modulus}")]


def cmd_twist_fe(args, settings: SettingsManager) -> CommandResult:
    h = load_coefficients(args.coeffs)
    X = settings.get_setting("twists", "oracle_x") if args.x is None else args.x
    X = min(X, h.bound) if X else None
    points = settings.get_setting("twists", "numeric_points")
    dps = settings.get_setting("twists", "dps")
    rng = np.random.default_rng(args.seed)
    chars = _characters(args)
    records, outcomes = [], []
    for chi in tqdm(chars, desc=f"Twists mod {args.modulus}", disable=len(chars) < 4):
        def run(chi=chi):
            report = fe_instance(h, chi, X=X, rng=rng, points=points, dps=dps)
            return report.model_dump(), "pass" if report.passed else "fail"
        _guarded(records, outcomes, {"character": chi.to_spec()}, run)
    return records, outcomes


def _keydet_record(spec: ExpSumMatrix) -> Tuple[dict, Outcome]:
    det, nonzero = key_det_nonzero(spec)
    return {"m": spec.m, "n": spec.n, "primes": spec.primes, "nonzero": nonzero,
            "det_coeffs": [str(c) for c in det.power_coeffs()]}, "pass" if nonzero else "fail"


def cmd_keydet(args, settings: SettingsManager) -> CommandResult:
    records, outcomes = [], []
    if args.random:
        rng = np.random.default_rng(args.seed)
        for k in tqdm(range(args.random), desc="Key determinants"):
            spec = random_exp_sum_matrix(rng)
            _guarded(records, outcomes, {"instance": k}, lambda spec=spec: _keydet_record(spec))
        return records, outcomes
    if args.m is None or args.n is None or not args.primes or not args.subsets:
        raise ValueError("keydet needs --m, --n, --primes and --subsets, or --random K")
    subsets = json.loads(Path(args.subsets).read_text(encoding="utf-8"))
    primes = [int(p) for p in args.primes.split(",") if p.strip()]
    spec = ExpSumMatrix(m=args.m, n=args.n, primes=primes, subsets=subsets)
    record, outcome = _keydet_record(spec)
    return [record], [outcome]


def cmd_decompose(args, settings: SettingsManager) -> CommandResult:
    M = parse_matrix(args.matrix)
    fact = loggen_decompose(args.level, M)
    value = fact.evaluate()
    bound = math.log2(abs(M.a)) if M.a else 0
    reconstructs = value == M or value == -M
    record = {
        "level": args.level,
        "matrix": format_matrix(M),
        "height": height(M, args.level),
        "factorization": fact.to_text(),
        "gamma_count": fact.gamma_count,
        "log2_bound": round(bound, 6),
        "reconstructs": reconstructs,
    }
    return [record], ["pass" if reconstructs and fact.gamma_count <= max(bound, 0) + 1e-9 else "fail"]


def cmd_words(args, settings: SettingsManager) -> CommandResult:
    max_length = args.max_length
    if max_length is None and args.level <= 3:
        max_length = settings.get_setting("words", "max_length_small_level")
    records, outcomes = [], []
    if args.count_only:
        count = count_tw(args.level, args.height, max_length)
        records.append({"level": args.level, "height_bound": args.height, "count": count})
        outcomes.append("pass")
    else:
        words = TWWordList.build(args.level, args.height, max_length)
        for word, M in words:
            records.append({"word": str(word), "matrix": format_matrix(M), "height": height(M, args.level)})
            outcomes.append("pass")
    if args.audit_length:
        audit = audit_height_levels(args.level, args.audit_length)
        records.append(audit.model_dump())
        outcomes.append("pass" if audit.passed else "fail")
    return records, outcomes


def cmd_ramanujan(args, settings: SettingsManager) -> CommandResult:
    value = ramanujan_c(args.q, args.n)
    direct = ramanujan_c_direct(args.q, args.n)
    return [{"q": args.q, "n": args.n, "value": value, "direct": direct}], ["pass" if value == direct else "fail"]


def cmd_orthogonality(args, settings: SettingsManager) -> CommandResult:
    ok, size = orthogonality_check(args.Q)
    passed = ok and size == args.Q
    return [{"Q": args.Q, "family_size": size, "orthogonal": ok}], ["pass" if passed else "fail"]


def cmd_coverage(args, settings: SettingsManager) -> CommandResult:
    covered = divisor_coverage(args.n, args.modulus)
    return [{"n": args.n, "modulus": args.modulus, "covered": covered}], ["pass" if covered else "fail"]


COMMANDS: Dict[str, Callable] = {
    "gens": cmd_gens,
    "identities": cmd_identities,
    "verify-hq": cmd_verify_hq,
    "table": cmd_table,
    "cosets": cmd_cosets,
    "twist-fe": cmd_twist_fe,
    "keydet": cmd_keydet,
    "decompose": cmd_decompose,
    "words": cmd_words,
    "ramanujan": cmd_ramanujan,
    "orthogonality": cmd_orthogonality,
    "coverage": cmd_coverage,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact checks around congruence subgroup generation and twisted L-series")
    parser.add_argument("--seed", type=int, default=None, help="Seed for random instances")
    parser.add_argument("--emit", choices=EMIT_FORMATS, default=None, help="Output format")
    parser.add_argument("--output", type=str, help="Also write records to this JSON file")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--settings-dir", type=str, help="Directory holding settings.json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gens", help="Certify generating sets of Gamma_0(N)")
    p.add_argument("level", type=int, nargs="?", default=None)
    p.add_argument("--all-tabled", action="store_true", help="Every tabled level")
    p.add_argument("--gamma1", action="store_true", help="Also certify Schreier generators of Gamma_1(N)")
    p.add_argument("--max-cosets", type=int)

    sub.add_parser("identities", help="Displayed identities, Conrey-Farmer products and twisted traces")

    p = sub.add_parser("verify-hq", help="Check H_q >= Gamma_1(N) over a range of q")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--q-from", type=int, required=True)
    p.add_argument("--q-to", type=int, required=True)
    p.add_argument("--primes-only", action="store_true")
    p.add_argument("--height-bound", type=int)
    p.add_argument("--max-cosets", type=int)
    p.add_argument("--witness-cache", type=str)

    p = sub.add_parser("table", help="Desk slice of an explicit-q table row")
    p.add_argument("level", type=int)
    p.add_argument("--q-to", type=int, default=1000)
    p.add_argument("--height-bound", type=int)
    p.add_argument("--witness-cache", type=str)

    p = sub.add_parser("cosets", help="Index of the subgroup generated by STWords")
    p.add_argument("--words", type=str, required=True, help="File with one STWord per line")
    p.add_argument("--max-cosets", type=int)
    p.add_argument("--strategy", choices=("felsch", "hlt"))

    p = sub.add_parser("twist-fe", help="Reflection identity and oracle for D_{f,chi}")
    p.add_argument("--coeffs", type=str, required=True, help="Coefficient JSON file")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--all-characters", action="store_true")
    p.add_argument("--character", type=str, help="Character spec: 'trivial:q' or JSON")
    p.add_argument("--x", type=int, help="Oracle range X, 0 to skip")

    p = sub.add_parser("keydet", help="Nonvanishing of the exponential-sum determinant")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--primes", type=str, help="Comma separated column primes")
    p.add_argument("--subsets", type=str, help="JSON file with subsets[i][j]")
    p.add_argument("--random", type=int, default=0, help="Check K random instances instead")

    p = sub.add_parser("decompose", help="Log-generation factorization of a Gamma_0(N) matrix")
    p.add_argument("level", type=int)
    p.add_argument("matrix", type=str, help="[[a,b],[c,d]]")

    p = sub.add_parser("words", help="Enumerate words in T, W by height")
    p.add_argument("level", type=int)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--max-length", type=int)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--audit-length", type=int, default=0)

    p = sub.add_parser("ramanujan", help="Ramanujan sum c_q(n)")
    p.add_argument("q", type=int)
    p.add_argument("n", type=int)

    p = sub.add_parser("orthogonality", help="Orthogonality of the c_chi family modulo Q")
    p.add_argument("Q", type=int)

    p = sub.add_parser("coverage", help="Do the divisors of n meet every unit class?")
    p.add_argument("n", type=int)
    p.add_argument("modulus", type=int)
    return parser


def run_config(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        level=getattr(args, "level", None),
        q_lo=getattr(args, "q_from", None),
        q_hi=getattr(args, "q_to", None) if args.command == "verify-hq" else None,
        primes_only=getattr(args, "primes_only", False),
        height_bound=getattr(args, "height_bound", None),
        max_cosets=getattr(args, "max_cosets", None),
        witness_cache=getattr(args, "witness_cache", None),
        emit=args.emit,
        seed=args.seed,
    )


def emit_records(records: List[dict], summary: dict, emit: str, stream=None) -> None:
    stream = stream or sys.stdout
    if emit == "jsonl":
        for record in records:
            stream.write(json.dumps(record, default=str) + "\n")
        stream.write(json.dumps({"summary": summary}, default=str) + "\n")
    elif emit == "table":
        if records:
            stream.write(pd.DataFrame(records).to_string(index=False) + "\n")
        stream.write(" ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    else:
        yaml.safe_dump({"records": json.loads(json.dumps(records, default=str)), "summary": summary},
                       stream, sort_keys=False)


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    settings = SettingsManager(args.settings_dir)
    if args.seed is None:
        args.seed = settings.get_setting("run", "seed")
    if args.emit is None:
        args.emit = settings.get_setting("run", "emit")
    if hasattr(args, "witness_cache") and not args.witness_cache:
        cache_dir = os.getenv("GAMMAGEN_CACHE") or settings.get_setting("run", "witness_cache")
        args.witness_cache = str(Path(cache_dir) / "witnesses.json") if cache_dir else None
    if args.command == "gens" and args.level is None and not args.all_tabled:
        parser.error("gens needs a level or --all-tabled")

    try:
        config = run_config(args)
        records, outcomes = COMMANDS[args.command](args, settings)
    except Exception as e:
        logger.error(f"{args.command} failed: {str(e)}")
        records, outcomes = [{"command": args.command, "error": str(e)}], ["fail"]
        config = None

    code = exit_code(outcomes)
    summary = {
        "command": args.command,
        "seed": args.seed,
        "records": len(records),
        "passed": outcomes.count("pass"),
        "failed": outcomes.count("fail"),
        "inconclusive": outcomes.count("inconclusive"),
        "exit_code": code,
    }
    emit_records(records, summary, args.emit)
    if args.output:
        output = Path(args.output)
        output.parent.mkdir(parents=True, exist_ok=True)
        with open(output, 'w', encoding='utf-8') as f:
            json.dump({"config": config.model_dump() if config else None, "records": records, "summary": summary},
                      f, indent=2, default=str)
        logger.info(f"Results written to {output}")
    return code


if __name__ == "__main__":
    sys.exit(main())
