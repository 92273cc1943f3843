"""Step-by-step extension of positive definite functions over the class order.

Each class nu contributes one new value Phi(s_nu).  The completion window
is the clique containing {e, s_nu} whose other members are already known;
hiding the (e, s_nu) entry of its Gram matrix leaves a partially positive
matrix with a single missing pair, and every positive extension of the
function corresponds to a contraction parameter of that completion.  The
zero parameter at every step yields the central extension, which does not
depend on the letter ordering and is characterized by a residual
orthogonality across each one-step distance gap (checked by
:func:`check_max_orthogonal`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import jsonio
from .cayley import clique_C, sigma_set
from .completion import (
    DefectData,
    GAMMA_NORM_SLACK,
    ContractionNormError,
    PartialBlockMatrix,
    analyze,
    complete,
    extract_gamma,
)
from .linalg import DEFAULT_TOL, Tolerance, gram_factor, pinv
from .pdfun import PdFunction, gram
from .words import (
    E,
    ClassCursor,
    GroupContext,
    Word,
    ball,
    classes_of_length,
    inverse,
    minimal_word,
    mul,
)

#: Oracle contract: (class cursor, defect data) -> contraction parameter
#: of shape ``defects.gamma_shape``.
ParamOracle = Callable[[ClassCursor, DefectData], np.ndarray]


def zero_oracle(cursor: ClassCursor, defects: DefectData) -> np.ndarray:
    """The central choice: gamma = 0 at every step."""
    return np.zeros(defects.gamma_shape, dtype=complex)


def oracle_from_params(params: Mapping[ClassCursor, np.ndarray]) -> ParamOracle:
    """Replay a recorded parameter sequence; missing classes are an error."""

    def oracle(cursor: ClassCursor, defects: DefectData) -> np.ndarray:
        try:
            return np.asarray(params[cursor], dtype=complex)
        except KeyError:
            raise KeyError(f"no recorded parameter for the class of {cursor.rep}") from None

    return oracle


@dataclass(frozen=True)
class ExtensionStep:
    """One completed class: window, central value, parameter, filled value."""

    cursor: ClassCursor
    clique: tuple[Word, ...]
    central: np.ndarray
    gamma: np.ndarray
    filled: np.ndarray


@dataclass(frozen=True)
class ExtensionTrace:
    """Audit log of an extension run; replaying it is bit-exact."""

    ctx: GroupContext
    k: int
    start_n: int
    steps: tuple[ExtensionStep, ...]

    def params(self) -> dict[ClassCursor, np.ndarray]:
        return {step.cursor: step.gamma for step in self.steps}

    def to_json_dict(self) -> dict:
        return {
            "schema": "trace.v1",
            "m": self.ctx.m,
            "k": self.k,
            "letter_order": list(self.ctx.letter_order),
            "start_n": self.start_n,
            "steps": [
                {
                    "class": jsonio.word_to_json(step.cursor.rep),
                    "clique": [jsonio.word_to_json(w) for w in step.clique],
                    "central": jsonio.matrix_to_json(step.central),
                    "gamma": jsonio.matrix_to_json(step.gamma),
                    "filled": jsonio.matrix_to_json(step.filled),
                }
                for step in self.steps
            ],
        }


def params_to_json(
    ctx: GroupContext,
    k: int,
    from_n: int,
    to_n: int,
    params: Mapping[ClassCursor, np.ndarray],
) -> dict:
    """The ``params.v1`` document: an explicit contraction sequence by class."""
    ordered = sorted(params, key=lambda cur: cur.key())
    return {
        "schema": "params.v1",
        "m": ctx.m,
        "k": k,
        "letter_order": list(ctx.letter_order),
        "from_n": from_n,
        "to_n": to_n,
        "params": [
            {
                "class": jsonio.word_to_json(cur.rep),
                "gamma": jsonio.matrix_to_json(params[cur]),
            }
            for cur in ordered
        ],
    }


def params_from_json(doc: dict) -> tuple[GroupContext, int, int, int, dict[ClassCursor, np.ndarray]]:
    jsonio.expect_schema(doc, "params.v1")
    m = jsonio.require(doc, "m")
    k = jsonio.require(doc, "k")
    ctx = GroupContext(m, tuple(jsonio.require(doc, "letter_order")))
    params: dict[ClassCursor, np.ndarray] = {}
    for item in jsonio.require(doc, "params"):
        rep = jsonio.word_from_json(jsonio.require(item, "class"), m)
        params[ClassCursor(rep, ctx)] = jsonio.matrix_from_json(jsonio.require(item, "gamma"))
    return ctx, k, jsonio.require(doc, "from_n"), jsonio.require(doc, "to_n"), params


def trace_from_json(doc: dict) -> ExtensionTrace:
    jsonio.expect_schema(doc, "trace.v1")
    m = jsonio.require(doc, "m")
    k = jsonio.require(doc, "k")
    ctx = GroupContext(m, tuple(jsonio.require(doc, "letter_order")))
    steps = []
    for item in jsonio.require(doc, "steps"):
        rep = jsonio.word_from_json(jsonio.require(item, "class"), m)
        clique = tuple(jsonio.word_from_json(w, m) for w in jsonio.require(item, "clique"))
        steps.append(
            ExtensionStep(
                cursor=ClassCursor(rep, ctx),
                clique=clique,
                central=jsonio.matrix_from_json(jsonio.require(item, "central"), (k, k)),
                gamma=jsonio.matrix_from_json(jsonio.require(item, "gamma")),
                filled=jsonio.matrix_from_json(jsonio.require(item, "filled"), (k, k)),
            )
        )
    return ExtensionTrace(ctx=ctx, k=k, start_n=jsonio.require(doc, "start_n"), steps=tuple(steps))


def _completion_window(
    phi: PdFunction, cursor: ClassCursor
) -> tuple[PartialBlockMatrix, list[Word]]:
    """Partial Gram matrix over the clique of cursor, with (e, s_nu) hidden."""
    clique = clique_C(cursor)
    k = phi.k
    i_e = clique.index(E)
    i_s = clique.index(cursor.rep)
    N = len(clique)
    A = np.zeros((N * k, N * k), dtype=complex)
    for i, s in enumerate(clique):
        s_inv = inverse(s)
        for j, t in enumerate(clique):
            if {i, j} == {i_e, i_s}:
                continue
            A[i * k : (i + 1) * k, j * k : (j + 1) * k] = phi.value(mul(s_inv, t))
    return PartialBlockMatrix(A, (i_e, i_s), k), clique


def step_defects(
    phi: PdFunction, cursor: ClassCursor, tol: Tolerance = DEFAULT_TOL
) -> DefectData:
    """Defect data of the completion window at a prospective class."""
    P, _ = _completion_window(phi, cursor)
    return analyze(P, tol)


def extend_one(
    phi: PdFunction,
    cursor: ClassCursor,
    gamma,
    tol: Tolerance = DEFAULT_TOL,
) -> PdFunction:
    """Extend phi by the single class ``cursor`` using the parameter ``gamma``.

    phi must be positive definite on the ideal right below the cursor;
    the result carries the value central + F_e* gamma F_s at s_nu (and its
    adjoint at the inverse) and is positive definite on the grown ideal.
    """
    phi2, _ = _extend_one_traced(phi, cursor, lambda c, d: gamma, tol)
    return phi2


def _extend_one_traced(
    phi: PdFunction,
    cursor: ClassCursor,
    oracle: ParamOracle,
    tol: Tolerance,
) -> tuple[PdFunction, ExtensionStep]:
    P, clique = _completion_window(phi, cursor)
    defects = analyze(P, tol)
    gamma = np.asarray(oracle(cursor, defects), dtype=complex)
    if gamma.ndim == 0:
        gamma = gamma.reshape(1, 1)
    if gamma.size:
        norm = np.linalg.norm(gamma, 2)
        if norm > 1.0 + GAMMA_NORM_SLACK:
            raise ContractionNormError(
                f"oracle returned a parameter of norm {norm:.12g} at class "
                f"{cursor.rep}; beyond unit-ball slack"
            )
        if norm > 1.0:
            gamma = gamma / norm
    full = complete(P, gamma, tol)
    i_e, i_s = P.missing
    k = phi.k
    filled = full[i_e * k : (i_e + 1) * k, i_s * k : (i_s + 1) * k]
    step = ExtensionStep(
        cursor=cursor,
        clique=tuple(clique),
        central=defects.central,
        gamma=gamma,
        filled=filled,
    )
    return phi.with_class_value(cursor, filled), step


def extend_to_ball(
    phi: PdFunction,
    N: int,
    oracle: ParamOracle = zero_oracle,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[PdFunction, ExtensionTrace]:
    """Extend a positive definite function from S_n to S_N, class by class.

    The oracle chooses the contraction parameter at each class; with
    :func:`zero_oracle` this is the central extension.  The run is
    recorded in a trace whose replay (via :func:`oracle_from_params`)
    reproduces the output bit-for-bit.
    """
    n = phi.ball_radius()
    if N < n:
        raise ValueError(f"cannot extend from S_{n} down to S_{N}")
    ball(phi.ctx, N)  # enforce the enumeration cap before any work
    steps: list[ExtensionStep] = []
    current = phi
    if N > n:
        cursor = ClassCursor(minimal_word(n + 1, phi.ctx), phi.ctx)
        while cursor.length <= N:
            current, step = _extend_one_traced(current, cursor, oracle, tol)
            steps.append(step)
            cursor = cursor.successor()
        current = current.as_ball(N)
    return current, ExtensionTrace(ctx=phi.ctx, k=phi.k, start_n=n, steps=tuple(steps))


def extract_params(
    phi: PdFunction, n: int, tol: Tolerance = DEFAULT_TOL
) -> dict[ClassCursor, np.ndarray]:
    """Recover the contraction parameters of phi beyond S_n.

    For each class past S_n, the (e, s_nu) entry of its window is hidden,
    the window analyzed, and the parameter of the actual value extracted;
    replaying :func:`extend_to_ball` with the result reproduces phi
    (exactly on full-rank defects, minimal-norm representative otherwise).
    """
    N = phi.ball_radius()
    out: dict[ClassCursor, np.ndarray] = {}
    for length in range(n + 1, N + 1):
        for cursor in classes_of_length(phi.ctx, length):
            P, _ = _completion_window(phi, cursor)
            out[cursor] = extract_gamma(P, phi.value(cursor.rep), tol)
    return out


@dataclass(frozen=True)
class OrthogonalityReport:
    """Worst residual pairing across the checked distance gap."""

    ok: bool
    worst_violation: float
    worst_class: ClassCursor | None

    def __bool__(self) -> bool:
        return self.ok


def check_max_orthogonal(
    phi: PdFunction,
    n: int,
    tol: float = 1e-8,
    lin_tol: Tolerance = DEFAULT_TOL,
) -> OrthogonalityReport:
    """Check the defining orthogonality of the central extension at gap n + 1.

    For each class representative t of length n + 1, take the set Sigma of
    words within distance n of both e and t, factor the Gram matrix of
    Sigma + {e, t} into Kolmogorov columns, and require the residuals of
    omega_e and omega_t after projection onto span{omega_r : r in Sigma}
    to be orthogonal within ``tol``.  By translation invariance the
    representatives cover all pairs at distance n + 1.
    """
    N = phi.ball_radius()
    if N < n + 1:
        raise ValueError(f"needs values on S_{n + 1}, but the domain is S_{N}")
    k = phi.k
    worst = 0.0
    worst_class: ClassCursor | None = None
    for cursor in classes_of_length(phi.ctx, n + 1):
        t = cursor.rep
        sigma = sigma_set(phi.ctx, E, t, n)
        S = sigma + [w for w in (E, t) if w not in sigma]
        S.sort(key=phi.ctx.sort_key)
        G = gram(phi, S)
        W = gram_factor(G.blocks, lin_tol)
        cols = {w: W[:, i * k : (i + 1) * k] for i, w in enumerate(S)}
        if sigma:
            Q = np.hstack([cols[r] for r in sigma])
            proj = Q @ pinv(Q, lin_tol)
            rho_e = cols[E] - proj @ cols[E]
            rho_t = cols[t] - proj @ cols[t]
        else:
            rho_e, rho_t = cols[E], cols[t]
        violation = float(np.linalg.norm(rho_e.conj().T @ rho_t, 2))
        if violation > worst:
            worst = violation
            worst_class = cursor
    return OrthogonalityReport(ok=worst <= tol, worst_violation=worst, worst_class=worst_class)
