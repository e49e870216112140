"""
Word and STWord: words in T, W and in the SL_2(Z) generators S, T.

Lower-case letters are inverses: ``t`` is T^-1 and ``w`` is W^-1.  S has
no inverse letter; S^-1 is written ``SSS``.
"""
from itertools import groupby
from typing import Optional, Union

from ..matcore import Mat2, S, check_level, identity, upper

_TW_INVERSE = {"T": "t", "t": "T", "W": "w", "w": "W"}


class Word(str):
    """Reduced word over {T, t, W, w}; no letter is followed by its inverse."""

    ALPHABET = "TtWw"

    def __new__(cls, text: str = ""):
        text = str(text)
        bad = set(text) - set(cls.ALPHABET)
        if bad:
            raise ValueError(f"Word letters must be in {cls.ALPHABET!r}, got {''.join(sorted(bad))!r}")
        for x, y in zip(text, text[1:]):
            if _TW_INVERSE[x] == y:
                raise ValueError(f"Word {text!r} is not reduced")
        return super().__new__(cls, text)

    @classmethod
    def reduce(cls, text: str) -> "Word":
        """Freely reduce an arbitrary string over {T, t, W, w}."""
        stack = []
        for letter in text:
            if letter not in _TW_INVERSE:
                raise ValueError(f"Unexpected letter {letter!r}")
            if stack and stack[-1] == _TW_INVERSE[letter]:
                stack.pop()
            else:
                stack.append(letter)
        return cls("".join(stack))

    def inverse(self) -> "Word":
        return Word("".join(_TW_INVERSE[x] for x in reversed(self)))


class STWord(str):
    """Word over {S, T, t} in SL_2(Z)."""

    ALPHABET = "STt"

    def __new__(cls, text: str = ""):
        text = str(text)
        bad = set(text) - set(cls.ALPHABET)
        if bad:
            raise ValueError(f"STWord letters must be in {cls.ALPHABET!r}, got {''.join(sorted(bad))!r}")
        return super().__new__(cls, text)

    @classmethod
    def reduce(cls, text: str) -> "STWord":
        """Cancel Tt, tT and SSSS until none remain."""
        stack = []
        for letter in text:
            if letter not in cls.ALPHABET:
                raise ValueError(f"Unexpected letter {letter!r}")
            stack.append(letter)
            if len(stack) >= 2 and {stack[-1], stack[-2]} == {"T", "t"}:
                del stack[-2:]
            elif len(stack) >= 4 and stack[-4:] == ["S"] * 4:
                del stack[-4:]
        return cls("".join(stack))

    def inverse(self) -> "STWord":
        swap = {"S": "SSS", "T": "t", "t": "T"}
        return STWord.reduce("".join(swap[x] for x in reversed(self)))


def _letter_power(letter: str, k: int, N: Optional[int]) -> Mat2:
    if letter == "T":
        return upper(k)
    if letter == "t":
        return upper(-k)
    if letter == "S":
        return S() ** (k % 4)
    if N is None:
        raise ValueError("Evaluating W requires a level")
    if letter == "W":
        return Mat2(1, 0, k * N, 1)
    return Mat2(1, 0, -k * N, 1)


def eval_word(word: Union[Word, STWord, str], N: Optional[int] = None) -> Mat2:
    """
    Exact product of the letters of a word; the empty word gives I.

    Args:
        word: a Word (needs N) or an STWord (N ignored)
        N: level used for W

    Raises:
        ValueError: If the word contains W but no level is given
    """
    if N is not None:
        check_level(N)
    if not isinstance(word, (Word, STWord)):
        word = STWord(word) if set(word) <= set(STWord.ALPHABET) else Word(word)
    result = identity()
    for letter, run in groupby(word):
        result = result * _letter_power(letter, len(list(run)), N)
    return result


def tw_power_text(letter: str, k: int) -> str:
    """T^k or W^k spelled with letters, e.g. ('T', -2) -> 'tt'."""
    if k >= 0:
        return letter.upper() * k
    return letter.lower() * (-k)


def tw_word_from_tokens(tokens) -> Word:
    """Build a Word from (letter, exponent) pairs with letter in {'T', 'W'}."""
    return Word.reduce("".join(tw_power_text(x, k) for x, k in tokens))


def check_W_relation(N: int) -> bool:
    """(W^-1 T)^12 == I, which holds exactly for N <= 3."""
    return eval_word(Word("wT" * 12), N) == identity()


__all__ = ['Word', 'STWord', 'eval_word', 'tw_power_text', 'tw_word_from_tokens',
           'check_W_relation']
