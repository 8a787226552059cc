"""Finite checks behind U(p): symplectic matrices over O, Gamma_0(p) words, coset
representatives and the character sum over Her_n(O) / p Her_n(O)."""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence, Union

from quat_eisenstein.errors import InvariantViolation, LatticeError
from quat_eisenstein.hermitian import (
    HermitianForm,
    IntegralHermitian,
    enumerate_quotient,
    quotient_size,
    tau_pair,
)
from quat_eisenstein.quaternion import (
    HURWITZ_UNITS,
    ONE,
    ZERO,
    HurwitzQuaternion,
    from_basis,
    in_hurwitz,
    q_conj,
    q_mul,
    quarter_product,
)

logger = logging.getLogger(__name__)

Block = tuple[tuple[HurwitzQuaternion, ...], ...]


def _zeros(n: int) -> Block:
    return tuple(tuple(ZERO for _ in range(n)) for _ in range(n))


def _identity(n: int) -> Block:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def block_mul(X: Block, Y: Block) -> Block:
    n, k, m = len(X), len(Y), len(Y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for t in range(k):
                acc = acc + q_mul(X[i][t], Y[t][j])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def block_add(X: Block, Y: Block) -> Block:
    return tuple(tuple(a + b for a, b in zip(rx, ry)) for rx, ry in zip(X, Y))


def block_sub(X: Block, Y: Block) -> Block:
    return tuple(tuple(a - b for a, b in zip(rx, ry)) for rx, ry in zip(X, Y))


def block_scale(X: Block, d: int) -> Block:
    return tuple(tuple(a.scale(d) for a in row) for row in X)


def conj_transpose(X: Block) -> Block:
    """Transpose of the entrywise conjugate."""
    return tuple(tuple(q_conj(X[j][i]) for j in range(len(X))) for i in range(len(X[0])))


def is_hermitian(X: Block) -> bool:
    return conj_transpose(X) == X


def in_p_order(a: HurwitzQuaternion, p: int) -> bool:
    """Membership in p O."""
    try:
        return in_hurwitz(a.divide_exact(p))
    except LatticeError:
        return False


def block_congruent_zero(X: Block, p: int) -> bool:
    return all(in_p_order(a, p) for row in X for a in row)


@dataclass(frozen=True)
class QuaternionMatrix:
    """2n x 2n quaternion matrix in block form [[A, B], [C, D]]."""

    A: Block
    B: Block
    C: Block
    D: Block

    @property
    def degree(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, n: int) -> QuaternionMatrix:
        return cls(_identity(n), _zeros(n), _zeros(n), _identity(n))

    @classmethod
    def j_matrix(cls, n: int) -> QuaternionMatrix:
        minus_one = tuple(tuple(-e for e in row) for row in _identity(n))
        return cls(_zeros(n), _identity(n), minus_one, _zeros(n))

    @classmethod
    def translation(cls, S: Block) -> QuaternionMatrix:
        n = len(S)
        return cls(_identity(n), S, _zeros(n), _identity(n))

    @classmethod
    def lower(cls, S: Block) -> QuaternionMatrix:
        n = len(S)
        return cls(_identity(n), _zeros(n), S, _identity(n))

    @classmethod
    def rotation(cls, U: Block) -> QuaternionMatrix:
        n = len(U)
        return cls(U, _zeros(n), _zeros(n), U)

    def rows(self) -> tuple[tuple[HurwitzQuaternion, ...], ...]:
        top = tuple(a + b for a, b in zip(self.A, self.B))
        bottom = tuple(c + d for c, d in zip(self.C, self.D))
        return top + bottom

    def __matmul__(self, other: QuaternionMatrix) -> QuaternionMatrix:
        return QuaternionMatrix(
            block_add(block_mul(self.A, other.A), block_mul(self.B, other.C)),
            block_add(block_mul(self.A, other.B), block_mul(self.B, other.D)),
            block_add(block_mul(self.C, other.A), block_mul(self.D, other.C)),
            block_add(block_mul(self.C, other.B), block_mul(self.D, other.D)),
        )

    def in_order(self) -> bool:
        return all(in_hurwitz(a) for row in self.rows() for a in row)


def _quarter_block_product(X: Block, Y: Block) -> list[list[tuple[int, ...]]]:
    """X * Y in quarter coordinates (entries are r / 4), valid for any half-integral input."""
    out = []
    for i in range(len(X)):
        row = []
        for j in range(len(Y[0])):
            acc = [0, 0, 0, 0]
            for t in range(len(Y)):
                r = quarter_product(X[i][t], Y[t][j])
                for c in range(4):
                    acc[c] += r[c]
            row.append(tuple(acc))
        out.append(row)
    return out


def _quarter_equals(lhs: list[list[tuple[int, ...]]], rhs: Block) -> bool:
    return all(
        lhs[i][j] == tuple(2 * x for x in rhs[i][j].c)
        for i in range(len(rhs))
        for j in range(len(rhs[0]))
    )


def is_symplectic(M: QuaternionMatrix) -> bool:
    """tA* C = tC* A, tB* D = tD* B and tA* D - tC* B = 1, with X* the conjugate transpose."""
    Ah, Ch = conj_transpose(M.A), conj_transpose(M.C)
    Bh, Dh = conj_transpose(M.B), conj_transpose(M.D)
    n = M.degree
    ac = _quarter_block_product(Ah, M.C)
    ca = _quarter_block_product(Ch, M.A)
    bd = _quarter_block_product(Bh, M.D)
    db = _quarter_block_product(Dh, M.B)
    ad = _quarter_block_product(Ah, M.D)
    cb = _quarter_block_product(Ch, M.B)
    diff = [[tuple(x - y for x, y in zip(ad[i][j], cb[i][j])) for j in range(n)] for i in range(n)]
    return ac == ca and bd == db and _quarter_equals(diff, _identity(n))


def in_gamma0(M: QuaternionMatrix, p: int) -> bool:
    """Every entry of the C block lies in p O."""
    return block_congruent_zero(M.C, p)


@dataclass(frozen=True)
class SampledMatrix:
    matrix: QuaternionMatrix
    word: str


_TOKEN = re.compile(r"([ULK])\[([^\]]*)\]")


def _hermitian_block(n: int, values: Sequence[int]) -> Block:
    if n == 1:
        (s,) = values
        return ((HurwitzQuaternion.from_int(s),),)
    s, u, c1, c2, c3, c4 = values
    t = HurwitzQuaternion((c1, c2, c3, c4))
    if not in_hurwitz(t):
        raise LatticeError(f"off-diagonal entry {t} is not in O")
    return (
        (HurwitzQuaternion.from_int(s), t),
        (q_conj(t), HurwitzQuaternion.from_int(u)),
    )


def _monomial_block(n: int, perm: int, unit_indices: Sequence[int]) -> Block:
    units = [HURWITZ_UNITS[i] for i in unit_indices]
    if n == 1:
        return ((units[0],),)
    if perm == 0:
        return ((units[0], ZERO), (ZERO, units[1]))
    return ((ZERO, units[0]), (units[1], ZERO))


def _generator(token: str, body: str, n: int, p: int) -> QuaternionMatrix:
    if token == "K":
        perm_text, _, units_text = body.partition(";")
        indices = [int(x) for x in units_text.split(",")]
        return QuaternionMatrix.rotation(_monomial_block(n, int(perm_text), indices))
    S = _hermitian_block(n, [int(x) for x in body.split(",")])
    if token == "U":
        return QuaternionMatrix.translation(S)
    return QuaternionMatrix.lower(block_scale(S, p))


def replay_word(word: str, n: int, p: int) -> QuaternionMatrix:
    """Rebuild the product of the generators named in ``word``."""
    M = QuaternionMatrix.identity(n)
    for token, body in _TOKEN.findall(word):
        M = M @ _generator(token, body, n, p)
    return M


def _random_token(rng: random.Random, n: int) -> str:
    kind = rng.choice("ULK")
    if kind == "K":
        perm = rng.randrange(2) if n == 2 else 0
        indices = [rng.randrange(len(HURWITZ_UNITS)) for _ in range(n)]
        return f"K[{perm};{','.join(str(i) for i in indices)}]"
    if n == 1:
        return f"{kind}[{rng.randint(-2, 2)}]"
    t = from_basis(*(rng.randint(-1, 1) for _ in range(4)))
    values = [rng.randint(-2, 2), rng.randint(-2, 2), *t.c]
    return f"{kind}[{','.join(str(v) for v in values)}]"


def sample_gamma0(n: int, p: int, seed: int, word_length: int) -> SampledMatrix:
    """Pseudorandom element of Gamma_0(p) as a product of translations, lower
    translations by p S and unitary monomial rotations. The generator word is returned
    for replay."""
    if n not in (1, 2):
        raise ValueError(f"degree must be 1 or 2, got {n}")
    rng = random.Random(seed)
    word = " ".join(_random_token(rng, n) for _ in range(word_length))
    return SampledMatrix(replay_word(word, n, p), word)


def random_integral_hermitian(rng: random.Random, n: int, bound: int = 3) -> IntegralHermitian:
    if n == 1:
        return IntegralHermitian(rng.randint(-bound, bound), degree=1)
    t = from_basis(*(rng.randint(-bound, bound) for _ in range(4)))
    return IntegralHermitian(rng.randint(-bound, bound), rng.randint(-bound, bound), t)


def coset_rep_check(M: QuaternionMatrix, T: IntegralHermitian, p: int) -> bool:
    """Check the coset representative S = tD* (B + T D) for M = [[A, B], [C, D]] in Gamma_0(p).

    True iff S is Hermitian over O, A S = B + T D mod p, and the lower-left block
    (A + T C) S - (B + T D) vanishes mod p.
    """
    Tm = T.as_matrix()
    if len(Tm) != M.degree:
        raise ValueError(f"T has degree {len(Tm)} but M has degree {M.degree}")
    shifted = block_add(M.B, block_mul(Tm, M.D))
    S = block_mul(conj_transpose(M.D), shifted)
    if not is_hermitian(S) or not all(in_hurwitz(a) for row in S for a in row):
        logger.debug("S = tD*(B + TD) is not Hermitian over O for T=%s", T)
        return False
    if not block_congruent_zero(block_sub(block_mul(M.A, S), shifted), p):
        return False
    lower_left = block_sub(block_mul(block_add(M.A, block_mul(Tm, M.C)), S), shifted)
    return block_congruent_zero(lower_left, p)


class Verdict(str, Enum):
    ZERO = "zero"
    FULL_MASS = "full_mass"


@dataclass(frozen=True)
class CharacterSumResult:
    """Histogram of tau(H, T) mod p over T in Her_n(O) / p Her_n(O)."""

    counts: tuple[int, ...]
    verdict: Verdict

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def value(self) -> int:
        """The character sum itself: 0 or c."""
        return self.total if self.verdict is Verdict.FULL_MASS else 0


@lru_cache(maxsize=16)
def _quotient(n: int, p: int) -> tuple[IntegralHermitian, ...]:
    reps = tuple(enumerate_quotient(n, p))
    if len(reps) != quotient_size(n, p):
        raise InvariantViolation(f"quotient of degree {n} mod {p} has {len(reps)} classes")
    return reps


def character_sum(H: Union[HermitianForm, int], p: int, n: int) -> CharacterSumResult:
    """Decide sum_T exp(2 pi i tau(H, T) / p) exactly from the residue histogram."""
    counts = [0] * p
    if n == 1:
        if not isinstance(H, int):
            raise TypeError("degree-1 character sums take an integer H")
        for T in _quotient(1, p):
            counts[(H * T.s) % p] += 1
    else:
        if not isinstance(H, HermitianForm):
            raise TypeError("degree-2 character sums take a HermitianForm")
        for T in _quotient(2, p):
            counts[tau_pair(H, T) % p] += 1
    total = sum(counts)
    if counts[0] == total:
        verdict = Verdict.FULL_MASS
    elif len(set(counts)) == 1:
        verdict = Verdict.ZERO
    else:
        raise InvariantViolation(f"tau({H}, .) mod {p} is neither uniform nor concentrated: {counts}")
    return CharacterSumResult(tuple(counts), verdict)
