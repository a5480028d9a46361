"""Named constructors for the concrete maps used throughout the package,
each returning a MapRep with a verified equivariance declaration.

All formulas act on A in M_n; B denotes the unnormalized Bell matrix.

    identity_map     A -> A
    transpose_map    A -> A^t
    bhat_map         A -> alpha A + beta Tr(A) 1       (the whole (0,1) space)
    choi_map         A -> (n-1) Tr(A) 1 - A            (= bhat(-1, n-1))
    tomiyama_map     A -> (lam/n) Tr(A) 1 + (1-lam) A  (= bhat(1-lam, lam/n))
    collins_map      A -> A^t x 1 + 1 x A + Tr(A)(alpha 1 + beta B)
    collins3_map     collins_map + gamma (B (1 x A) + (1 x A) B)
    conjugation_map  A -> M A M*
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .choi import Equivariance, MapRep, bell_matrix
from .errors import ContractViolation, ParameterError
from .equivariant import (
    EquivariantSpec,
    build_equivariant,
    check_ab_equivariance,
)
from .linalg import as_matrix, frobenius_norm, kron, matrix_rank
from .perms import Permutation
from .positivity import DEFAULT_TOL, k_positivity

_VERIFY_SEED = 0xA11CE
_VERIFY_TRIALS = 4
_VERIFY_TOL = 1e-9
_UNITARY_TOL = 1e-6


def _fmt(x: float) -> str:
    return f"{x:g}"


def _verified(rep: MapRep) -> MapRep:
    # Constructors are closed formulas; this guards against regressions
    # in the formulas themselves, not against user input.
    eq = rep.equivariance
    report = check_ab_equivariance(
        rep.choi, rep.n, eq.a, eq.b,
        trials=_VERIFY_TRIALS, seed=_VERIFY_SEED, tol=_VERIFY_TOL,
    )
    if not report.passed:
        raise ContractViolation(
            f"declared ({eq.a},{eq.b}) equivariance failed verification for "
            f"{rep.label}: commutator norm {report.max_rel_commutator_norm:.3e}"
        )
    return rep


def _check_n(n: int) -> None:
    if n < 2:
        raise ParameterError(f"dimension must be at least 2, got {n}")


def _check_real(**params) -> None:
    for name, value in params.items():
        if isinstance(value, complex):
            if value.imag != 0:
                raise ParameterError(f"{name} must be real, got {value}")


def identity_map(n: int) -> MapRep:
    """A -> A; Choi is the unnormalized Bell matrix."""
    _check_n(n)
    return _verified(MapRep(
        n=n, N=n, choi=bell_matrix(n),
        label=f"identity(n={n})",
        equivariance=Equivariance("ab", 0, 1),
    ))


def transpose_map(n: int) -> MapRep:
    """A -> A^t; Choi is the swap operator."""
    _check_n(n)
    return _verified(MapRep(
        n=n, N=n, choi=_swap_matrix(n),
        label=f"transpose(n={n})",
        equivariance=Equivariance("ab", 1, 0),
    ))


def _swap_matrix(n: int) -> np.ndarray:
    S = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            S[i * n + j, j * n + i] = 1.0
    return S


def bhat_map(n: int, alpha: float, beta: float) -> MapRep:
    """A -> alpha A + beta Tr(A) 1; spans all maps of signature (0, 1)."""
    _check_n(n)
    _check_real(alpha=alpha, beta=beta)
    choi = float(alpha) * bell_matrix(n) + float(beta) * np.eye(n * n)
    return _verified(MapRep(
        n=n, N=n, choi=choi,
        label=f"bhat(n={n},alpha={_fmt(alpha)},beta={_fmt(beta)})",
        equivariance=Equivariance("ab", 0, 1),
    ))


def choi_map(n: int) -> MapRep:
    """A -> (n-1) Tr(A) 1 - A; the classic positive-not-CP example.

    Equal to bhat_map(n, -1, n-1); (n-1)-positive but not n-positive.
    """
    _check_n(n)
    rep = bhat_map(n, -1.0, float(n - 1))
    return replace(rep, label=f"choi(n={n})")


def tomiyama_map(n: int, lam: float) -> MapRep:
    """A -> (lam/n) Tr(A) 1 + (1-lam) A.

    k-positive exactly for 0 <= lam <= 1 + 1/(n k - 1), which makes the
    family sweep out every positivity degree as lam grows.
    """
    _check_n(n)
    _check_real(lam=lam)
    rep = bhat_map(n, 1.0 - float(lam), float(lam) / n)
    return replace(rep, label=f"tomiyama(n={n},lambda={_fmt(lam)})")


_S3_E = Permutation.identity(3)
_S3_12 = Permutation((1, 0, 2))
_S3_13 = Permutation((2, 1, 0))
_S3_23 = Permutation((0, 2, 1))
_S3_123 = Permutation((1, 2, 0))
_S3_132 = Permutation((2, 0, 1))


def collins_map(n: int, alpha: float, beta: float, allow_small_n: bool = False) -> MapRep:
    """A -> A^t x 1 + 1 x A + Tr(A)(alpha 1 + beta B) on M_n -> M_{n^2}.

    Built as the signature (1, 1) combination with coefficients 1 and 1
    on the transpositions (1 2) and (1 3), alpha on the identity and
    beta on (2 3).  Stated for n >= 3; pass allow_small_n=True to
    explore n = 2 (labelled unvalidated).
    """
    return collins3_map(n, alpha, beta, 0.0, allow_small_n=allow_small_n, _two_param=True)


def collins3_map(
    n: int,
    alpha: float,
    beta: float,
    gamma: float,
    allow_small_n: bool = False,
    _two_param: bool = False,
) -> MapRep:
    """Three-parameter extension of collins_map: adds
    gamma (B (1 x A) + (1 x A) B), i.e. gamma on both 3-cycles."""
    _check_n(n)
    _check_real(alpha=alpha, beta=beta, gamma=gamma)
    if n < 3 and not allow_small_n:
        raise ParameterError(
            f"this family is stated for n >= 3 (got n={n}); "
            "pass allow_small_n=True to explore anyway"
        )
    coeffs = {
        _S3_12: 1.0,
        _S3_13: 1.0,
        _S3_E: float(alpha),
        _S3_23: float(beta),
    }
    if gamma != 0.0:
        coeffs[_S3_123] = float(gamma)
        coeffs[_S3_132] = float(gamma)
    rep = build_equivariant(EquivariantSpec(n=n, a=1, b=1, coeffs=coeffs))
    name = "collins" if _two_param else "collins3"
    params = f"n={n},alpha={_fmt(alpha)},beta={_fmt(beta)}"
    if not _two_param:
        params += f",gamma={_fmt(gamma)}"
    suffix = ",unvalidated-n" if n < 3 else ""
    return _verified(replace(rep, label=f"{name}({params}{suffix})"))


def conjugation_map(M) -> MapRep:
    """A -> M A M*.

    Always completely positive.  For invertible M the map is
    equivariant (conjugate the argument by U, the output by M U M^-1);
    when M is moreover unitary the intertwiner is unitary too.  The
    declaration records which case holds; singular M gets none.
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ParameterError(f"conjugation needs a square matrix, got {M.shape}")
    n = M.shape[0]
    _check_n(n)
    choi = kron(np.eye(n), M) @ bell_matrix(n) @ kron(np.eye(n), M).conj().T
    if frobenius_norm(M.conj().T @ M - np.eye(n)) <= _UNITARY_TOL:
        eq = Equivariance("unitary")
    elif matrix_rank(M, 1e-10) == n:
        eq = Equivariance("equivariant")
    else:
        eq = None
    return MapRep(
        n=n, N=n, choi=choi,
        label=f"conj({n}x{n})",
        equivariance=eq,
    )


@dataclass(frozen=True, eq=False)
class ZooEntry:
    """A constructed map together with the grammar name and parameters
    that produced it."""

    name: str
    params: dict
    rep: MapRep


MAP_GRAMMAR = """map spec grammar: NAME[:KEY=VALUE,...]
  identity:n=3              transpose:n=3
  choi:n=3                  tomiyama:n=3,lambda=1.2
  bhat:n=3,alpha=1,beta=0   collins:n=3,alpha=2,beta=-1
  collins3:n=3,alpha=2,beta=-1,gamma=0.5
  conj:file=A.json          (matrix JSON file)"""


def _parse_params(text: str) -> dict:
    params: dict = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise ParameterError(f"expected KEY=VALUE, got {item!r}\n{MAP_GRAMMAR}")
        key, value = item.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ParameterError(f"empty key or value in {item!r}\n{MAP_GRAMMAR}")
        try:
            params[key] = int(value)
        except ValueError:
            try:
                params[key] = float(value)
            except ValueError:
                params[key] = value
    return params


def _take(params: dict, name: str, spec: str, kind=float):
    if name not in params:
        raise ParameterError(f"map spec {spec!r} is missing {name!r}\n{MAP_GRAMMAR}")
    value = params.pop(name)
    if kind is int and not isinstance(value, int):
        raise ParameterError(f"{name} must be an integer in {spec!r}")
    if kind is float and isinstance(value, str):
        raise ParameterError(f"{name} must be a number in {spec!r}")
    return value


def parse_map_spec(text: str) -> ZooEntry:
    """Parse the NAME:KEY=VALUE,... grammar into a constructed map."""
    from . import serialize  # deferred; serialize needs MapRep

    spec = text.strip()
    name, _, rest = spec.partition(":")
    name = name.strip()
    params = _parse_params(rest)
    given = dict(params)
    if name == "identity":
        rep = identity_map(_take(params, "n", spec, int))
    elif name == "transpose":
        rep = transpose_map(_take(params, "n", spec, int))
    elif name == "choi":
        rep = choi_map(_take(params, "n", spec, int))
    elif name == "tomiyama":
        rep = tomiyama_map(_take(params, "n", spec, int), _take(params, "lambda", spec))
    elif name == "bhat":
        rep = bhat_map(
            _take(params, "n", spec, int),
            _take(params, "alpha", spec),
            _take(params, "beta", spec),
        )
    elif name == "collins":
        rep = collins_map(
            _take(params, "n", spec, int),
            _take(params, "alpha", spec),
            _take(params, "beta", spec),
        )
    elif name == "collins3":
        rep = collins3_map(
            _take(params, "n", spec, int),
            _take(params, "alpha", spec),
            _take(params, "beta", spec),
            _take(params, "gamma", spec),
        )
    elif name == "conj":
        path = _take(params, "file", spec, str)
        rep = conjugation_map(serialize.load_matrix(str(path)))
    else:
        raise ParameterError(f"unknown map name {name!r}\n{MAP_GRAMMAR}")
    if params:
        raise ParameterError(
            f"unknown keys {sorted(params)} in map spec {spec!r}\n{MAP_GRAMMAR}"
        )
    return ZooEntry(name=name, params=given, rep=rep)


def positivity_scan(
    n: int,
    alphas,
    betas,
    gamma: float | None = None,
    tol: float = DEFAULT_TOL,
) -> list[dict]:
    """Grid scan of the two-parameter family (three-parameter when gamma
    is given): per point, the block verdicts at k=1 (positivity) and
    k=n (complete positivity)."""
    rows = []
    for alpha in alphas:
        for beta in betas:
            if gamma is None:
                rep = collins_map(n, float(alpha), float(beta))
            else:
                rep = collins3_map(n, float(alpha), float(beta), float(gamma))
            pos, e1 = k_positivity(rep, 1, tol)
            cp, en = k_positivity(rep, n, tol)
            row = {
                "alpha": float(alpha),
                "beta": float(beta),
                "k1MinEig": e1,
                "knMinEig": en,
                "positive": pos,
                "cp": cp,
                "positiveNotCp": pos and not cp,
            }
            if gamma is not None:
                row["gamma"] = float(gamma)
            rows.append(row)
    return rows
