"""Noncommutative polynomials in unitary indeterminates and their
sum-of-squares factorization.

A polynomial sum_s A_s X(s) with c x c coefficient blocks is positive
when every substitution of unitaries for the indeterminates yields a PSD
operator.  Positivity is equivalent to the existence of a PSD Gram matrix
G indexed by the length-d ball (d = deg p) whose entries sum, along each
coefficient class {(s, t) : s^-1 t = x}, to A_x; factoring G = B* B then
gives p = q* q with q = sum_s B_s X(s) of degree at most d.

:func:`factor_sos` searches for such a G with Dykstra's alternating
projections between the PSD cone and the affine constraint set, polished
by a Gauss-Newton solve on a low-rank Gram factor seeded from the Dykstra
iterate (alternating projections alone crawl when the feasible set
touches the boundary of the cone, which is the generic situation here).
A returned certificate carries its own coefficient residual; a failure
report carries the terminal gap and is not a disproof of positivity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import jsonio
from .linalg import as_matrix
from .sampling import haar_unitary
from .words import E, GroupContext, Word, ball, inverse, mul, reduce_word


class NcContextError(ValueError):
    """Operands live over different contexts or block sizes."""


class NcPolynomial:
    """Finite sum of words with c x c coefficient blocks, closed under adjoint."""

    __slots__ = ("ctx", "c", "terms")

    def __init__(self, ctx: GroupContext, c: int, terms: Mapping[Word, np.ndarray]):
        if c < 1:
            raise ValueError(f"coefficient block size must be positive, got {c}")
        store: dict[Word, np.ndarray] = {}
        for word, block in terms.items():
            w = reduce_word(word)
            B = as_matrix(block)
            if B.shape != (c, c):
                raise ValueError(f"coefficient at {w} has shape {B.shape}, expected {(c, c)}")
            store[w] = store[w] + B if w in store else B.copy()
        for w in [w for w, B in store.items() if not B.any()]:
            del store[w]
        for B in store.values():
            B.flags.writeable = False
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "terms", store)

    def __setattr__(self, name, value):
        raise AttributeError("NcPolynomial is immutable")

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def coefficient(self, word: Word) -> np.ndarray:
        w = reduce_word(word)
        return self.terms.get(w, np.zeros((self.c, self.c), dtype=complex))

    def support(self) -> list[Word]:
        return sorted(self.terms, key=self.ctx.sort_key)

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        return all(
            np.abs(self.coefficient(inverse(w)) - B.conj().T).max(initial=0.0) <= atol
            for w, B in self.terms.items()
        )

    def adjoint(self) -> "NcPolynomial":
        return NcPolynomial(
            self.ctx, self.c, {inverse(w): B.conj().T for w, B in self.terms.items()}
        )

    def _check_compatible(self, other: "NcPolynomial"):
        if not isinstance(other, NcPolynomial):
            raise TypeError(f"expected an NcPolynomial, got {type(other).__name__}")
        if self.ctx != other.ctx or self.c != other.c:
            raise NcContextError("operands have different contexts or block sizes")

    def __mul__(self, other: "NcPolynomial") -> "NcPolynomial":
        self._check_compatible(other)
        out: dict[Word, np.ndarray] = {}
        for s, A in self.terms.items():
            for t, B in other.terms.items():
                x = mul(s, t)
                prod = A @ B
                out[x] = out[x] + prod if x in out else prod
        return NcPolynomial(self.ctx, self.c, out)

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        self._check_compatible(other)
        out = {w: B.copy() for w, B in self.terms.items()}
        for w, B in other.terms.items():
            out[w] = out[w] + B if w in out else B
        return NcPolynomial(self.ctx, self.c, out)

    def __sub__(self, other: "NcPolynomial") -> "NcPolynomial":
        self._check_compatible(other)
        out = {w: B.copy() for w, B in self.terms.items()}
        for w, B in other.terms.items():
            out[w] = out[w] - B if w in out else -B
        return NcPolynomial(self.ctx, self.c, out)

    def max_coefficient_norm(self) -> float:
        return max((np.linalg.norm(B, 2) for B in self.terms.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.c == other.c
            and self.terms.keys() == other.terms.keys()
            and all(np.array_equal(self.terms[w], other.terms[w]) for w in self.terms)
        )

    def to_json_dict(self) -> dict:
        return {
            "schema": "ncpoly.v1",
            "m": self.ctx.m,
            "c": self.c,
            "terms": [
                {"word": jsonio.word_to_json(w), "value": jsonio.matrix_to_json(self.terms[w])}
                for w in self.support()
            ],
        }


def nc_mul(p: NcPolynomial, q: NcPolynomial) -> NcPolynomial:
    return p * q


def nc_adjoint(p: NcPolynomial) -> NcPolynomial:
    return p.adjoint()


def ncpolynomial_from_json(doc: dict) -> NcPolynomial:
    jsonio.expect_schema(doc, "ncpoly.v1")
    m = jsonio.require(doc, "m")
    c = jsonio.require(doc, "c")
    if not (isinstance(m, int) and m >= 1 and isinstance(c, int) and c >= 1):
        raise jsonio.SchemaError(f"invalid dimensions m={m!r}, c={c!r}")
    terms: dict[Word, np.ndarray] = {}
    for entry in jsonio.require(doc, "terms"):
        word = jsonio.word_from_json(jsonio.require(entry, "word"), m)
        block = jsonio.matrix_from_json(jsonio.require(entry, "value"), (c, c))
        terms[word] = terms.get(word, 0) + block
    return NcPolynomial(GroupContext(m), c, terms)


def eval_word(unitaries: Sequence[np.ndarray], word: Word) -> np.ndarray:
    d = unitaries[0].shape[0]
    out = np.eye(d, dtype=complex)
    for x in word:
        U = unitaries[abs(x) - 1]
        out = out @ (U if x > 0 else U.conj().T)
    return out


def eval_unitaries(p: NcPolynomial, unitaries: Sequence[np.ndarray]) -> np.ndarray:
    """p(U) = sum_s A_s (x) U(s), a (c d) x (c d) matrix.

    Each of the m substituted matrices must be unitary within 1e-10.
    """
    if len(unitaries) != p.ctx.m:
        raise ValueError(f"need {p.ctx.m} unitaries, got {len(unitaries)}")
    Us = [as_matrix(U) for U in unitaries]
    d = Us[0].shape[0]
    for i, U in enumerate(Us):
        if U.shape != (d, d) or np.abs(U.conj().T @ U - np.eye(d)).max() > 1e-10:
            raise ValueError(f"substitution {i + 1} is not unitary within 1e-10")
    out = np.zeros((p.c * d, p.c * d), dtype=complex)
    for w, A in p.terms.items():
        out += np.kron(A, eval_word(Us, w))
    return out


def sample_positivity(
    p: NcPolynomial, trials: int = 200, d_max: int = 3, seed: int = 0
) -> float:
    """Least eigenvalue of p(U) over seeded Haar-random unitary tuples.

    A clearly negative return certifies that p is not positive; a
    nonnegative return is evidence only.  Dimensions are drawn uniformly
    from 1..d_max.
    """
    if not p.is_hermitian():
        raise ValueError("positivity sampling needs a Hermitian polynomial")
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(trials):
        d = int(rng.integers(1, d_max + 1))
        Us = [haar_unitary(d, rng) for _ in range(p.ctx.m)]
        M = eval_unitaries(p, Us)
        worst = min(worst, float(np.linalg.eigvalsh((M + M.conj().T) / 2.0).min()))
    return worst


@dataclass(frozen=True)
class SosCertificate:
    """A factorization p = q* q: Gram matrix, factor rows, and its residual."""

    index: tuple[Word, ...]
    m: int
    c: int
    gram: np.ndarray
    factors: dict[Word, np.ndarray]
    residual: float
    iterations: int

    @property
    def rank(self) -> int:
        return next(iter(self.factors.values())).shape[0]


@dataclass(frozen=True)
class InfeasibleReport:
    """No certificate found: terminal distance between the cone and the affine set.

    Not a disproof of positivity; the search is a heuristic feasibility
    solve.  Pair with :func:`sample_positivity` for negative evidence.
    """

    gap: float
    affine_residual: float
    psd_residual: float
    iterations: int


def _coefficient_classes(ctx: GroupContext, index: list[Word]):
    """Group the index pairs (i, j) by the word s_i^-1 s_j."""
    cls_of: dict[Word, int] = {}
    pair_class = np.empty(len(index) * len(index), dtype=int)
    pos = 0
    for s in index:
        si = inverse(s)
        for t in index:
            x = mul(si, t)
            pair_class[pos] = cls_of.setdefault(x, len(cls_of))
            pos += 1
    words = [None] * len(cls_of)
    for w, cid in cls_of.items():
        words[cid] = w
    return pair_class, words


class _GramProblem:
    """Vectorized block-sum machinery for the Gram feasibility search."""

    def __init__(self, p: NcPolynomial, index: list[Word]):
        c = p.c
        N = len(index)
        pair_class, class_words = _coefficient_classes(p.ctx, index)
        ar = np.arange(c)
        ii, jj = np.divmod(np.arange(len(pair_class)), N)
        self.rows = ii[:, None, None] * c + np.broadcast_to(ar[:, None], (c, c))
        self.cols = jj[:, None, None] * c + np.broadcast_to(ar[None, :], (c, c))
        self.cls = pair_class
        self.class_words = class_words
        self.counts = np.bincount(pair_class, minlength=len(class_words)).astype(float)
        self.targets = np.stack([p.coefficient(w) for w in class_words])
        self.c = c
        self.N = N
        self.size = N * c
        self.pairs = list(zip(ii.tolist(), jj.tolist(), pair_class.tolist()))

    def class_sums(self, G: np.ndarray) -> np.ndarray:
        blocks = G[self.rows, self.cols]
        sums = np.zeros_like(self.targets)
        np.add.at(sums, self.cls, blocks)
        return sums

    def affine_project(self, G: np.ndarray) -> np.ndarray:
        blocks = G[self.rows, self.cols]
        sums = np.zeros_like(self.targets)
        np.add.at(sums, self.cls, blocks)
        delta = (self.targets - sums) / self.counts[:, None, None]
        out = G.copy()
        out[self.rows, self.cols] = blocks + delta[self.cls]
        return (out + out.conj().T) / 2.0

    def affine_gap(self, G: np.ndarray) -> float:
        diff = self.class_sums(G) - self.targets
        return float(max(np.linalg.norm(D, 2) for D in diff))

    def residual_of_factor(self, B: np.ndarray) -> float:
        return self.affine_gap(B.conj().T @ B)

    def stacked_residual(self, B: np.ndarray) -> float:
        diff = self.class_sums(B.conj().T @ B) - self.targets
        return float(np.sqrt((np.abs(diff) ** 2).sum()))


def _gauss_newton_polish(
    prob: _GramProblem, B0: np.ndarray, tol: float, max_steps: int = 40
) -> tuple[np.ndarray, float]:
    """Solve the coefficient equations on a fixed-rank Gram factor.

    Damped Gauss-Newton on B (real and imaginary parts as unknowns);
    returns the improved factor and its stacked residual.  G = B* B stays
    PSD by construction, so a small enough residual certifies success.
    """
    c, N = prob.c, prob.N
    R = B0.shape[0]
    ncols = N * c
    nvar = 2 * R * ncols
    neq = 2 * len(prob.class_words) * c * c
    B = B0.copy()
    res = prob.stacked_residual(B)
    for _ in range(max_steps):
        if res <= tol:
            break
        J = np.zeros((neq, nvar))
        Bc = B.conj()
        for i, j, cid in prob.pairs:
            row_base = cid * 2 * c * c
            for r in range(R):
                Bj = B[r, j * c : (j + 1) * c]
                Bi_c = Bc[r, i * c : (i + 1) * c]
                for q in range(c):
                    v_re = r * ncols + i * c + q
                    v_im = R * ncols + v_re
                    base = row_base + q * c * 2
                    for q2 in range(c):
                        er = base + q2 * 2
                        J[er, v_re] += Bj[q2].real
                        J[er + 1, v_re] += Bj[q2].imag
                        J[er, v_im] += Bj[q2].imag
                        J[er + 1, v_im] += -Bj[q2].real
                    v_re2 = r * ncols + j * c + q
                    v_im2 = R * ncols + v_re2
                    for q1 in range(c):
                        er = row_base + (q1 * c + q) * 2
                        J[er, v_re2] += Bi_c[q1].real
                        J[er + 1, v_re2] += Bi_c[q1].imag
                        J[er, v_im2] += -Bi_c[q1].imag
                        J[er + 1, v_im2] += Bi_c[q1].real
        F = prob.class_sums(B.conj().T @ B) - prob.targets
        rhs = np.empty(neq)
        rhs[0::2] = F.real.reshape(-1)
        rhs[1::2] = F.imag.reshape(-1)
        delta, *_ = np.linalg.lstsq(J, -rhs, rcond=None)
        dB = delta[: R * ncols].reshape(R, ncols) + 1j * delta[R * ncols :].reshape(R, ncols)
        step = 1.0
        improved = False
        for _ in range(25):
            Bn = B + step * dB
            rn = prob.stacked_residual(Bn)
            if rn < res:
                B, res = Bn, rn
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return B, res


def _certificate(prob, index, m, c, B, iterations) -> SosCertificate:
    drop = np.abs(B).max(axis=1, initial=0.0) > 0.0
    B = B[drop] if B.size else B
    gram = B.conj().T @ B
    factors = {w: B[:, i * c : (i + 1) * c].copy() for i, w in enumerate(index)}
    return SosCertificate(
        index=tuple(index),
        m=m,
        c=c,
        gram=gram,
        factors=factors,
        residual=prob.residual_of_factor(B),
        iterations=iterations,
    )


def factor_sos(
    p: NcPolynomial,
    tol: float = 1e-8,
    max_iter: int = 20_000,
    polish_every: int = 200,
) -> SosCertificate | InfeasibleReport:
    """Search for a sum-of-squares certificate p = q* q.

    Dykstra's alternating projections run between the PSD cone and the
    affine set of Gram matrices with the right coefficient sums; every
    ``polish_every`` iterations a Gauss-Newton solve is attempted on a
    low-rank factor seeded from the current PSD iterate.  Success returns
    a certificate whose Gram matrix is PSD by construction and whose
    coefficient residual is at most ``tol``; exhaustion returns an
    :class:`InfeasibleReport` with the terminal gap, which is NOT a proof
    of non-positivity.
    """
    if not p.is_hermitian():
        raise ValueError("sum-of-squares factorization needs a Hermitian polynomial")
    c = p.c
    index = ball(p.ctx, p.degree)
    prob = _GramProblem(p, index)
    scale = max(1.0, float(np.abs(prob.targets).max(initial=0.0)))
    X = prob.affine_project(np.zeros((prob.size, prob.size), dtype=complex))
    correction = np.zeros_like(X)
    ladder = sorted({min(c, prob.size), min(2 * c, prob.size), min(3 * c + 1, prob.size)})
    polish_budget = 12
    Y = X
    affine_gap = np.inf
    psd_gap = np.inf
    for it in range(1, max_iter + 1):
        Z = X + correction
        w, V = np.linalg.eigh(Z)
        Y = (V * np.clip(w, 0.0, None)) @ V.conj().T
        Y = (Y + Y.conj().T) / 2.0
        correction = Z - Y
        X = prob.affine_project(Y)
        last = it == max_iter
        if it % 25 == 0 or last:
            affine_gap = prob.affine_gap(Y)
            psd_gap = max(0.0, -float(np.linalg.eigvalsh(X).min()))
            if affine_gap <= tol / 10 and psd_gap <= tol / 10:
                B = _top_rank_factor(Y)
                if prob.residual_of_factor(B) <= tol:
                    return _certificate(prob, index, p.ctx.m, c, B, it)
        if (it % polish_every == 0 or last) and polish_budget > 0:
            if prob.affine_gap(Y) <= max(100 * tol, 1e-2 * scale):
                polish_budget -= 1
                w, V = np.linalg.eigh(Y)
                for R in ladder:
                    seed = np.sqrt(np.clip(w[-R:], 0.0, None))[:, None] * V[:, -R:].conj().T
                    B, res = _gauss_newton_polish(prob, seed, tol / 10)
                    if res <= tol / 10:
                        return _certificate(prob, index, p.ctx.m, c, B, it)
    return InfeasibleReport(
        gap=float(np.linalg.norm(Y - X)),
        affine_residual=affine_gap,
        psd_residual=psd_gap,
        iterations=max_iter,
    )


def _top_rank_factor(G: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh((G + G.conj().T) / 2.0)
    keep = w > max(1e-14, 1e-12 * max(w.max(initial=0.0), 0.0))
    return np.sqrt(w[keep])[:, None] * V[:, keep].conj().T


def split_squares(cert: SosCertificate) -> list[NcPolynomial]:
    """Slice a certificate into square polynomials with sum_j Q_j* Q_j = p.

    The factor rows are grouped c at a time (the last group zero-padded),
    each group giving one polynomial Q_j.
    """
    c = cert.c
    some = next(iter(cert.factors.values()))
    R = some.shape[0]
    n_groups = max(1, -(-R // c))
    ctx = GroupContext(cert.m)
    out = []
    for g in range(n_groups):
        terms = {}
        for w, B in cert.factors.items():
            rows = B[g * c : (g + 1) * c]
            if rows.shape[0] < c:
                rows = np.vstack([rows, np.zeros((c - rows.shape[0], c), dtype=complex)])
            terms[w] = rows
        out.append(NcPolynomial(ctx, c, terms))
    return out


def certificate_to_json(cert: SosCertificate) -> dict:
    return {
        "schema": "cert.v1",
        "m": cert.m,
        "c": cert.c,
        "index": [jsonio.word_to_json(w) for w in cert.index],
        "gram": jsonio.matrix_to_json(cert.gram),
        "factors": [
            {"word": jsonio.word_to_json(w), "value": jsonio.matrix_to_json(cert.factors[w])}
            for w in cert.index
        ],
        "residual": cert.residual,
        "iterations": cert.iterations,
    }


def certificate_from_json(doc: dict) -> SosCertificate:
    jsonio.expect_schema(doc, "cert.v1")
    m = jsonio.require(doc, "m")
    c = jsonio.require(doc, "c")
    if not (isinstance(m, int) and m >= 1 and isinstance(c, int) and c >= 1):
        raise jsonio.SchemaError(f"invalid dimensions m={m!r}, c={c!r}")
    index = [jsonio.word_from_json(w, m) for w in jsonio.require(doc, "index")]
    gram = jsonio.matrix_from_json(jsonio.require(doc, "gram"))
    factors = {}
    for entry in jsonio.require(doc, "factors"):
        word = jsonio.word_from_json(jsonio.require(entry, "word"), m)
        factors[word] = jsonio.matrix_from_json(jsonio.require(entry, "value"))
    return SosCertificate(
        index=tuple(index),
        m=m,
        c=c,
        gram=gram,
        factors=factors,
        residual=float(jsonio.require(doc, "residual")),
        iterations=int(jsonio.require(doc, "iterations")),
    )
