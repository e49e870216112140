"""
Published minimal generating sets of Gamma_0(N) for small N, and their
certification by coset enumeration.

Symbols: ``I``/``-I``, ``T``, ``W``, ``g(q,a)`` for gamma_{q,a}, each
optionally negated with a leading ``-``.  gamma_{q,a} stands for any element
of Gamma_0(N) with top row (q, -a); every tabled set contains W, so the
choice does not change the generated group.
"""
import logging
import re
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from ..matcore import Mat2, T, W, format_matrix, gamma_qa, identity, in_gamma0
from ..words import loggen_generators, matrix_to_stword
from .coset_table import todd_coxeter
from .gamma1 import index_gamma0

logger = logging.getLogger(__name__)

GENERATOR_TABLE_SOURCE = "minimal generating sets of Gamma_0(N), N <= 9 and N in {11, 15, 17, 23}"

GENERATOR_TABLE: Dict[int, List[str]] = {
    1: ["T", "W"],
    2: ["T", "W"],
    3: ["T", "-W"],
    4: ["-I", "T", "W"],
    5: ["T", "W", "g(2,1)"],
    6: ["-I", "T", "W", "g(5,2)"],
    7: ["T", "W", "-g(2,1)"],
    8: ["-I", "T", "W", "g(3,1)"],
    9: ["-I", "T", "W", "g(2,1)"],
    11: ["-I", "W", "g(2,1)", "g(3,1)"],
    15: ["-I", "T", "W", "g(2,1)", "g(4,1)", "g(11,4)"],
    17: ["T", "W", "g(2,1)", "g(3,1)", "g(6,1)"],
    23: ["-I", "T", "W", "g(2,1)", "g(4,1)", "g(6,1)", "g(10,-3)"],
}

_SYMBOL = re.compile(r"^(-?)(I|T|W|g\((-?\d+),(-?\d+)\))$")


def parse_generator_symbol(symbol: str, N: int) -> Mat2:
    """
    Matrix of a table symbol at level N.

    Raises:
        ValueError: For unknown symbols
    """
    match = _SYMBOL.match(symbol.strip())
    if not match:
        raise ValueError(f"Unknown generator symbol: {symbol!r}")
    sign, body, q, a = match.groups()
    if body == "I":
        m = identity()
    elif body == "T":
        m = T()
    elif body == "W":
        m = W(N)
    else:
        m = gamma_qa(N, int(q), int(a))
    return -m if sign else m


class GeneratorCertificate(BaseModel):
    """Certification of a generating set of Gamma_0(N)."""
    level: int = Field(..., description="Level N")
    symbols: List[str] = Field(..., description="Generator symbols")
    matrices: List[str] = Field(..., description="Generator matrices in literal form")
    expected_index: int = Field(..., description="[SL_2(Z) : Gamma_0(N)]")
    index: Optional[int] = Field(None, description="Enumerated index, None on overflow")
    status: str = Field(..., description="'certified', 'mismatch' or 'overflow'")
    tabled: bool = Field(False, description="Whether the set comes from the published table")
    source: str = Field("", description="Where the set comes from")

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def certify_generators(N: int, matrices: List[Mat2], symbols: Optional[List[str]] = None,
                       max_cosets: int = 2_000_000, strategy: str = "felsch",
                       source: str = "") -> GeneratorCertificate:
    """
    Check by coset enumeration that matrices generate Gamma_0(N).

    Raises:
        ValueError: If some matrix is not in Gamma_0(N)
    """
    for m in matrices:
        if not in_gamma0(m, N):
            raise ValueError(f"{format_matrix(m)} is not in Gamma_0({N})")
    words = [matrix_to_stword(m) for m in matrices]
    result = todd_coxeter(words, max_cosets, strategy)
    expected = index_gamma0(N)
    if not result.complete:
        status = "overflow"
    elif result.index == expected:
        status = "certified"
    else:
        status = "mismatch"
    if status != "certified":
        logger.warning(f"Generators of Gamma_0({N}) not certified: {result.to_record()}")
    return GeneratorCertificate(
        level=N,
        symbols=symbols or [format_matrix(m) for m in matrices],
        matrices=[format_matrix(m) for m in matrices],
        expected_index=expected,
        index=result.index,
        status=status,
        tabled=N in GENERATOR_TABLE and symbols == GENERATOR_TABLE.get(N),
        source=source,
    )


def small_level_generators(N: int) -> List[Mat2]:
    """
    Matrices of the tabled generating set.

    Raises:
        KeyError: If N is not tabled
    """
    return [parse_generator_symbol(s, N) for s in GENERATOR_TABLE[N]]


def certify_tabled_level(N: int, max_cosets: int = 2_000_000, strategy: str = "felsch") -> GeneratorCertificate:
    return certify_generators(N, small_level_generators(N), symbols=GENERATOR_TABLE[N],
                              max_cosets=max_cosets, strategy=strategy, source=GENERATOR_TABLE_SOURCE)


def certify_loggen_level(N: int, max_cosets: int = 2_000_000, strategy: str = "felsch") -> GeneratorCertificate:
    """Certify {-I, T, W, gamma_{r,1} : 2 <= |r| < N/2} for prime N."""
    gens = loggen_generators(N)
    symbols = ["-I", "T", "W"] + [f"g({m.a},1)" for m in gens[3:]]
    return certify_generators(N, gens, symbols=symbols, max_cosets=max_cosets,
                              strategy=strategy, source="log-generation set")
