"""Partial positive definite functions on F_m with k x k operator values.

A :class:`PdFunction` maps words to k x k complex blocks with Phi(e) = I
and Phi(s^-1) = Phi(s)*, defined either on a ball S_n (all words of
length <= n) or on an order ideal of the class order.  Values are stored
once per class {s, s^-1}, at the lexicographically minimal representative;
the adjoint is synthesized, so the symmetry holds by construction.

Positive definiteness means every Gram matrix [Phi(s^-1 t)] over a finite
set with pairwise differences inside the domain is PSD.  On a ball this
reduces to finitely many witness sets: the half-radius ball for even n,
and one bicentered set per generator for odd n, since a tree set of
diameter n always fits, up to translation, inside a ball or a pair of
adjacent balls of radius n//2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import jsonio
from .linalg import (
    DEFAULT_TOL,
    NotPsdError,
    Tolerance,
    as_matrix,
    eig_hermitian,
    gram_factor,
    is_psd,
)
from .words import (
    E,
    ClassCursor,
    GroupContext,
    Word,
    ball,
    class_rep,
    classes_up_to,
    inverse,
    mul,
    reduce_word,
    sphere,
)


class MissingValueError(KeyError):
    """A Gram entry falls outside the function's domain."""


class DomainError(ValueError):
    """The function's domain is unsuitable for the requested operation."""


@dataclass(frozen=True)
class BallDomain:
    """All words of length at most n."""

    n: int

    def contains(self, word: Word, ctx: GroupContext) -> bool:
        return len(word) <= self.n

    def class_reps(self, ctx: GroupContext) -> list[Word]:
        return [c.rep for c in classes_up_to(ctx, self.n)]

    def describe(self) -> str:
        return f"ball({self.n})"


@dataclass(frozen=True)
class IdealDomain:
    """All classes up to and including ``last`` in the class order."""

    last: ClassCursor

    def contains(self, word: Word, ctx: GroupContext) -> bool:
        return ctx.sort_key(class_rep(word, ctx)) <= self.last.key()

    def class_reps(self, ctx: GroupContext) -> list[Word]:
        out = []
        cur = ClassCursor(E, ctx)
        while True:
            out.append(cur.rep)
            if cur.rep == self.last.rep:
                return out
            cur = cur.successor()

    def describe(self) -> str:
        return f"ideal({self.last.rep})"


class PdFunction:
    """Partial map from words to k x k blocks with Phi(e) = I.

    ``values`` may name any set of words; each is reduced and filed under
    its class representative (a value given at a non-representative is
    adjointed into place, and conflicting duplicates are rejected).  A
    value at e different from the identity is normalized away when
    invertible, by conjugating every block with Phi(e)^(-1/2); a singular
    Phi(e) is rejected.  Instances are immutable snapshots.
    """

    __slots__ = ("ctx", "k", "domain", "_values")

    def __init__(
        self,
        ctx: GroupContext,
        k: int,
        domain: BallDomain | IdealDomain,
        values: Mapping[Word, np.ndarray],
    ):
        if k < 1:
            raise ValueError(f"block size must be positive, got {k}")
        store: dict[Word, np.ndarray] = {}
        for word, block in values.items():
            w = reduce_word(word)
            B = as_matrix(block)
            if B.shape != (k, k):
                raise ValueError(
                    f"value at {w} has shape {B.shape}, expected {(k, k)}"
                )
            rep = class_rep(w, ctx)
            if w != rep:
                B = B.conj().T
            if rep in store and not np.allclose(
                store[rep], B, rtol=0.0, atol=1e-12 * max(1.0, np.abs(B).max())
            ):
                raise ValueError(f"conflicting values for the class of {rep}")
            store[rep] = B
        if E not in store:
            raise ValueError("a value at the unit word is required")
        unit = store[E]
        if not np.allclose(unit, np.eye(k), rtol=0.0, atol=1e-12):
            store = _normalize_unit(store, unit, k)
        store[E] = np.eye(k, dtype=complex)
        expected = domain.class_reps(ctx)
        missing = [rep for rep in expected if rep not in store]
        if missing:
            raise ValueError(
                f"domain {domain.describe()} needs a value at {missing[0]} "
                f"({len(missing)} classes missing)"
            )
        extra = set(store) - set(expected)
        if extra:
            raise ValueError(
                f"value at {sorted(extra, key=ctx.sort_key)[0]} lies outside "
                f"domain {domain.describe()}"
            )
        for block in store.values():
            block.flags.writeable = False
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "_values", store)

    def __setattr__(self, name, value):
        raise AttributeError("PdFunction is immutable")

    def has(self, word: Word) -> bool:
        return self.domain.contains(reduce_word(word), self.ctx)

    def value(self, word: Word) -> np.ndarray:
        """Phi at a word; the adjoint class member is synthesized."""
        w = reduce_word(word)
        rep = class_rep(w, self.ctx)
        try:
            block = self._values[rep]
        except KeyError:
            raise MissingValueError(
                f"no value at {w}: outside domain {self.domain.describe()}"
            ) from None
        return block if w == rep else block.conj().T

    def class_reps(self) -> list[Word]:
        return sorted(self._values, key=self.ctx.sort_key)

    def with_class_value(self, cursor: ClassCursor, block: np.ndarray) -> "PdFunction":
        """New snapshot extended by one class; the domain grows to its ideal."""
        if cursor.ctx != self.ctx:
            raise ValueError("cursor context does not match the function")
        values = dict(self._values)
        values[cursor.rep] = as_matrix(block)
        return PdFunction(self.ctx, self.k, IdealDomain(cursor), values)

    def restricted_to_ball(self, n: int) -> "PdFunction":
        """Restriction to S_n (which must lie inside the current domain)."""
        reps = BallDomain(n).class_reps(self.ctx)
        try:
            values = {rep: self._values[rep] for rep in reps}
        except KeyError as exc:
            raise DomainError(f"domain does not contain S_{n}: missing {exc}") from None
        return PdFunction(self.ctx, self.k, BallDomain(n), values)

    def as_ball(self, n: int) -> "PdFunction":
        """Reinterpret an ideal domain that exactly fills S_n as a ball domain."""
        return self.restricted_to_ball(n)

    def ball_radius(self) -> int:
        if not isinstance(self.domain, BallDomain):
            raise DomainError(f"expected a ball domain, got {self.domain.describe()}")
        return self.domain.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, PdFunction):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.k == other.k
            and self.domain == other.domain
            and self._values.keys() == other._values.keys()
            and all(np.array_equal(self._values[w], other._values[w]) for w in self._values)
        )

    def to_json_dict(self) -> dict:
        """The ``pdfun.v1`` document; entries sorted for byte-stable output."""
        if not isinstance(self.domain, BallDomain):
            raise DomainError("only ball domains serialize to pdfun.v1")
        return {
            "schema": "pdfun.v1",
            "m": self.ctx.m,
            "k": self.k,
            "letter_order": list(self.ctx.letter_order),
            "domain": {"type": "ball", "n": self.domain.n},
            "entries": [
                {
                    "word": jsonio.word_to_json(rep),
                    "value": jsonio.matrix_to_json(self._values[rep]),
                }
                for rep in self.class_reps()
            ],
        }


def _normalize_unit(
    store: dict[Word, np.ndarray], unit: np.ndarray, k: int
) -> dict[Word, np.ndarray]:
    w, V = eig_hermitian(unit)
    if w[-1] <= 1e-12 * max(1.0, w[0]):
        raise NotPsdError(
            "the value at the unit word is singular or indefinite; "
            "cannot normalize to the identity"
        )
    inv_sqrt = (V / np.sqrt(w)) @ V.conj().T
    return {word: inv_sqrt @ block @ inv_sqrt for word, block in store.items()}


def pdfunction_from_json(doc: dict) -> PdFunction:
    """Parse a ``pdfun.v1`` document."""
    jsonio.expect_schema(doc, "pdfun.v1")
    m = jsonio.require(doc, "m")
    k = jsonio.require(doc, "k")
    if not (isinstance(m, int) and m >= 1 and isinstance(k, int) and k >= 1):
        raise jsonio.SchemaError(f"invalid dimensions m={m!r}, k={k!r}")
    order = jsonio.require(doc, "letter_order")
    try:
        ctx = GroupContext(m, tuple(order))
    except (TypeError, ValueError) as exc:
        raise jsonio.SchemaError(str(exc)) from exc
    dom = jsonio.require(doc, "domain")
    if not (isinstance(dom, dict) and dom.get("type") == "ball" and isinstance(dom.get("n"), int)):
        raise jsonio.SchemaError(f"unsupported domain {dom!r}")
    values: dict[Word, np.ndarray] = {}
    for entry in jsonio.require(doc, "entries"):
        word = jsonio.word_from_json(jsonio.require(entry, "word"), m)
        values[word] = jsonio.matrix_from_json(jsonio.require(entry, "value"), (k, k))
    try:
        return PdFunction(ctx, k, BallDomain(dom["n"]), values)
    except ValueError as exc:
        raise jsonio.SchemaError(str(exc)) from exc


@dataclass(frozen=True)
class GramMatrix:
    """Blocked Gram matrix [Phi(s^-1 t)] over an ordered index set."""

    index: tuple[Word, ...]
    k: int
    blocks: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        k = self.k
        return self.blocks[i * k : (i + 1) * k, j * k : (j + 1) * k]

    def position(self, word: Word) -> int:
        return self.index.index(word)


def gram(phi: PdFunction, S: Sequence[Word]) -> GramMatrix:
    """The Gram matrix of phi over S; raises naming the offending pair."""
    words = [reduce_word(s) for s in S]
    k = phi.k
    N = len(words)
    A = np.empty((N * k, N * k), dtype=complex)
    for i, s in enumerate(words):
        s_inv = inverse(s)
        for j, t in enumerate(words):
            try:
                A[i * k : (i + 1) * k, j * k : (j + 1) * k] = phi.value(mul(s_inv, t))
            except MissingValueError:
                raise MissingValueError(
                    f"gram entry ({s}, {t}) needs a value at {mul(s_inv, t)}, "
                    f"outside domain {phi.domain.describe()}"
                ) from None
    return GramMatrix(index=tuple(words), k=k, blocks=A)


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of a positivity check: worst witness set and its least eigenvalue."""

    ok: bool
    min_eigenvalue: float
    witness: tuple[Word, ...]

    def __bool__(self) -> bool:
        return self.ok


def _witness_sets(phi: PdFunction) -> list[list[Word]]:
    n = phi.ball_radius()
    ctx = phi.ctx
    h = n // 2
    inner = ball(ctx, h)
    if n % 2 == 0:
        return [inner]
    sets = []
    for i in ctx.generators():
        shifted = [mul((i,), w) for w in inner]
        merged = sorted(set(inner) | set(shifted), key=ctx.sort_key)
        sets.append(merged)
    return sets


def verify_pd(
    phi: PdFunction,
    tol: Tolerance = DEFAULT_TOL,
    witness_sets: Iterable[Sequence[Word]] | None = None,
) -> VerifyResult:
    """Decide positive definiteness of phi on its ball domain.

    For even n = 2h it suffices that the Gram matrix of the radius-h ball
    is PSD; for odd n = 2h + 1, one bicentered set per generator is
    checked.  Any tree set with diameter <= n embeds in one of these up
    to translation, and translation leaves Gram matrices unchanged, so
    the finite family is exact.  ``witness_sets`` overrides the default
    family.  Returns the worst set with its least eigenvalue.
    """
    sets = [list(s) for s in witness_sets] if witness_sets is not None else _witness_sets(phi)
    worst = np.inf
    worst_set: tuple[Word, ...] = ()
    ok = True
    for S in sets:
        A = gram(phi, S).blocks
        w = np.linalg.eigvalsh((A + A.conj().T) / 2.0)
        floor = -tol.psd_eps * max(1.0, np.abs(w).max())
        if w.min() < worst:
            worst = float(w.min())
            worst_set = tuple(S)
        if w.min() < floor:
            ok = False
    return VerifyResult(ok=ok, min_eigenvalue=worst, witness=worst_set)


def toeplitz_of(phi: PdFunction, n: int | None = None) -> GramMatrix:
    """The Gram matrix of phi over S_n, for phi defined on S_2n.

    Its (s, t) block depends only on s^-1 t, so it is Toeplitz in the
    free-group sense; :func:`function_of_toeplitz` inverts the map.
    """
    radius = phi.ball_radius()
    if n is None:
        n = radius // 2
    if 2 * n > radius:
        raise DomainError(f"needs values on S_{2 * n}, but the domain is S_{radius}")
    return gram(phi, ball(phi.ctx, n))


def function_of_toeplitz(
    M: GramMatrix, ctx: GroupContext, tol: Tolerance = DEFAULT_TOL
) -> PdFunction:
    """The positive definite function on S_2n encoded by a PSD Toeplitz matrix over S_n.

    Each word x of length <= 2n is split as x = s^-1 t with s, t in S_n,
    and Phi(x) is read off the corresponding block; the Toeplitz property
    makes the choice of split irrelevant.  Non-Toeplitz input is rejected
    naming the violating pair of index pairs, non-PSD input is rejected.
    """
    index = list(M.index)
    n = max((len(w) for w in index), default=0)
    if sorted(index, key=ctx.sort_key) != ball(ctx, n):
        raise ValueError(f"index set is not the ball S_{n}")
    pos = {w: i for i, w in enumerate(index)}
    scale = max(1.0, np.abs(M.blocks).max(initial=0.0))
    first_pair: dict[Word, tuple[int, int]] = {}
    for i, s in enumerate(index):
        for j, t in enumerate(index):
            x = mul(inverse(s), t)
            if x in first_pair:
                a, b = first_pair[x]
                if np.abs(M.block(i, j) - M.block(a, b)).max() > 1e-12 * scale:
                    raise ValueError(
                        f"not Toeplitz: blocks at ({index[a]}, {index[b]}) and "
                        f"({s}, {t}) differ although both index {x}"
                    )
            else:
                first_pair[x] = (i, j)
    if not is_psd(M.blocks, tol):
        raise NotPsdError("the Toeplitz matrix is not positive semidefinite")
    values: dict[Word, np.ndarray] = {}
    for x in first_pair:
        rep = class_rep(x, ctx)
        if rep in values:
            continue
        a = max(0, len(rep) - n)
        s = inverse(rep[:a])
        t = rep[a:]
        values[rep] = M.block(pos[s], pos[t]).copy()
    return PdFunction(ctx, M.k, BallDomain(2 * n), values)


def kolmogorov(phi: PdFunction, n: int | None = None) -> dict[Word, np.ndarray]:
    """Finite Kolmogorov data: columns omega_s with omega_s* omega_t = Phi(s^-1 t).

    Factors the Gram matrix over S_n (phi must be defined on S_2n and
    positive there); the returned blocks have rank(Gram) rows each.
    """
    M = toeplitz_of(phi, n)
    W = gram_factor(M.blocks, DEFAULT_TOL)
    k = phi.k
    return {w: W[:, i * k : (i + 1) * k] for i, w in enumerate(M.index)}


def radialize(phi: PdFunction) -> PdFunction:
    """Average phi over each sphere: the radial envelope with the same domain.

    The mean over words of length j is Hermitian because spheres are
    closed under inversion; radial inputs are fixed points.  Positivity
    is preserved (radializing any positive definite extension restricts
    to this function).
    """
    n = phi.ball_radius()
    ctx = phi.ctx
    means: list[np.ndarray] = []
    for j in range(n + 1):
        blocks = np.stack([phi.value(w) for w in sphere(ctx, j)])
        # centered mean: exact on radial input, better conditioned in general;
        # symmetrized so the stored block is Hermitian to the last bit
        mean = blocks[0] + np.mean(blocks - blocks[0], axis=0)
        means.append((mean + mean.conj().T) / 2.0)
    values = {
        rep: means[len(rep)] for rep in BallDomain(n).class_reps(ctx)
    }
    return PdFunction(ctx, phi.k, BallDomain(n), values)
