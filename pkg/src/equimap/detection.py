"""Entanglement detection through positive maps.

A state rho on C^m x C^n is moved through id_m x Phi; a negative output
eigenvalue certifies that rho cannot be written with Schmidt number at
most t whenever Phi is t-positive.  Combined with the block criterion
for t-positivity this yields computable Schmidt-number lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .choi import MapRep, apply_map, bell_matrix, extend_map
from .errors import ContractViolation, ParameterError, ShapeError
from .linalg import (
    as_matrix,
    complex_gaussian,
    frobenius_norm,
    haar_from_rng,
    hermitian_eig,
    kron,
    rng_from_seed,
    subseed,
)
from .positivity import DEFAULT_TOL, k_positivity

_DENSITY_TRACE_TOL = 1e-10
_DENSITY_EIG_FLOOR = -1e-10


def _check_density(mat: np.ndarray, what: str = "matrix") -> None:
    vals, _ = hermitian_eig(mat)  # enforces Hermiticity
    tr = float(np.trace(mat).real)
    if abs(tr - 1.0) > _DENSITY_TRACE_TOL:
        raise ContractViolation(f"{what} has trace {tr!r}, expected 1")
    if vals[0] < _DENSITY_EIG_FLOOR:
        raise ContractViolation(
            f"{what} has negative eigenvalue {vals[0]:.3e}"
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Bipartite state on C^dim_a x C^dim_b; validated at construction."""

    dim_a: int
    dim_b: int
    mat: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ParameterError(
                f"dimensions must be positive, got ({self.dim_a}, {self.dim_b})"
            )
        arr = as_matrix(self.mat)
        d = self.dim_a * self.dim_b
        if arr.shape != (d, d):
            raise ShapeError(f"state shape {arr.shape} does not match {d} x {d}")
        _check_density(arr, "density matrix")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "mat", arr)

    @classmethod
    def from_pure(cls, psi, m: int, n: int) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-10:
            raise ContractViolation(f"vector norm {norm!r} is not 1")
        return cls(dim_a=m, dim_b=n, mat=np.outer(psi, psi.conj()))


def schmidt_rank(psi, m: int, n: int, tol: float = 1e-9) -> int:
    """Number of singular values of the m x n matricization above tol."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != m * n:
        raise ShapeError(f"vector length {psi.size} does not match m*n = {m * n}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-10:
        raise ContractViolation(f"vector norm {norm!r} is not 1")
    s = np.linalg.svd(psi.reshape(m, n), compute_uv=False)
    return int(np.count_nonzero(s > tol))


def isotropic_state(n: int, p: float) -> DensityMatrix:
    """Mixture p * B/n + (1-p) * 1/n^2 of the normalized Bell state with
    white noise; partial transposition detects it exactly for p > 1/(n+1)."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"mixing parameter must lie in [0, 1], got {p}")
    mat = p * bell_matrix(n) / n + (1.0 - p) * np.eye(n * n) / (n * n)
    return DensityMatrix(dim_a=n, dim_b=n, mat=mat)


def bell_state(n: int) -> DensityMatrix:
    return isotropic_state(n, 1.0)


def product_state(rho_a, rho_b) -> DensityMatrix:
    """Tensor product of two (validated) single-system states."""
    rho_a = as_matrix(rho_a)
    rho_b = as_matrix(rho_b)
    for mat, name in ((rho_a, "left factor"), (rho_b, "right factor")):
        if mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"{name} is not square: {mat.shape}")
        _check_density(mat, name)
    return DensityMatrix(
        dim_a=rho_a.shape[0], dim_b=rho_b.shape[0], mat=kron(rho_a, rho_b)
    )


def random_pure(m: int, n: int, r: int, seed) -> np.ndarray:
    """Seeded pure state on C^m x C^n with Schmidt rank exactly r.

    Schmidt coefficients are drawn away from zero, then rotated by
    independent Haar unitaries on each factor.
    """
    if not 1 <= r <= min(m, n):
        raise ParameterError(f"Schmidt rank {r} outside 1..{min(m, n)}")
    rng = rng_from_seed(seed)
    lam = rng.uniform(0.5, 1.5, size=r)
    lam = lam / np.linalg.norm(lam)
    U = haar_from_rng(rng, m)
    V = haar_from_rng(rng, n)
    psi = np.zeros(m * n, dtype=complex)
    for i in range(r):
        psi += lam[i] * np.kron(U[:, i], V[:, i])
    return psi


@dataclass(frozen=True, eq=False)
class DetectionVerdict:
    map_label: str
    min_eigenvalue: float
    detected: bool
    witness: np.ndarray | None


def detect(rho: DensityMatrix, rep: MapRep, tol: float = DEFAULT_TOL) -> DetectionVerdict:
    """Verdict of the map on the state: apply id_m x Phi and look for a
    negative eigenvalue below the relative tolerance."""
    if rep.n != rho.dim_b:
        raise ShapeError(
            f"map acts on M_{rep.n} but the state's second factor is C^{rho.dim_b}"
        )
    out = apply_map(extend_map(rep, rho.dim_a), rho.mat)
    vals, vecs = hermitian_eig(out)
    min_eig = float(vals[0])
    detected = min_eig < -tol * max(1.0, frobenius_norm(out))
    return DetectionVerdict(
        map_label=rep.label,
        min_eigenvalue=min_eig,
        detected=detected,
        witness=vecs[:, 0].copy() if detected else None,
    )


@dataclass(frozen=True)
class SchmidtNumberCertificate:
    """Outcome of a Schmidt-number lower-bound attempt."""

    certified: bool
    t: int
    map_label: str
    t_positive: bool
    kpos_min_eig: float
    detect_min_eig: float | None
    claim: str | None
    reason: str


def sn_certificate(
    rho: DensityMatrix, rep: MapRep, t: int, tol: float = DEFAULT_TOL
) -> SchmidtNumberCertificate:
    """Certify Schmidt number >= t+1 when a t-positive map detects rho.

    First certifies t-positivity of the map through the block criterion
    (refusing, with a reason, if that fails), then runs detection.  Both
    margins are reported.
    """
    if not 1 <= t <= rep.n:
        raise ParameterError(f"t = {t} outside 1..{rep.n}")
    t_pos, kpos_eig = k_positivity(rep, t, tol)
    if not t_pos:
        return SchmidtNumberCertificate(
            certified=False, t=t, map_label=rep.label, t_positive=False,
            kpos_min_eig=kpos_eig, detect_min_eig=None, claim=None,
            reason=f"map is not {t}-positive (block min eigenvalue {kpos_eig:.3e}); "
                   "no conclusion about the state",
        )
    verdict = detect(rho, rep, tol)
    if not verdict.detected:
        return SchmidtNumberCertificate(
            certified=False, t=t, map_label=rep.label, t_positive=True,
            kpos_min_eig=kpos_eig, detect_min_eig=verdict.min_eigenvalue,
            claim=None,
            reason="map did not detect the state; Schmidt number may still be small",
        )
    return SchmidtNumberCertificate(
        certified=True, t=t, map_label=rep.label, t_positive=True,
        kpos_min_eig=kpos_eig, detect_min_eig=verdict.min_eigenvalue,
        claim=f"schmidt number >= {t + 1}",
        reason=f"{t}-positive map produced eigenvalue {verdict.min_eigenvalue:.3e} < 0",
    )


@dataclass(frozen=True, eq=False)
class DetectorFamily:
    """Base map together with Haar unitaries for the sampled detector.

    Unitaries derive from (seed, index), so the family for a samples is
    a prefix of the family for a+1 with the same seed and the detected
    set can only shrink as a grows.
    """

    base: MapRep
    unitaries: tuple[np.ndarray, ...]
    seed: int


def sampled_detector(rep: MapRep, a: int, seed) -> DetectorFamily:
    if a < 1:
        raise ParameterError(f"family size must be positive, got {a}")
    unitaries = tuple(
        haar_from_rng(rng_from_seed(subseed(seed, i)), rep.n) for i in range(a)
    )
    return DetectorFamily(base=rep, unitaries=unitaries, seed=int(seed))


def family_block_minima(rho: DensityMatrix, family: DetectorFamily) -> np.ndarray:
    """Per-unitary minimum output eigenvalues min eig of
    (id_m x phi)((1 x U_i) rho (1 x U_i)*)."""
    rep = family.base
    if rep.n != rho.dim_b:
        raise ShapeError(
            f"family base acts on M_{rep.n} but the state's second factor is C^{rho.dim_b}"
        )
    m = rho.dim_a
    ext = extend_map(rep, m)
    eye = np.eye(m)
    minima = []
    for U in family.unitaries:
        rot = kron(eye, U)
        out = apply_map(ext, rot @ rho.mat @ rot.conj().T)
        vals, _ = hermitian_eig(out)
        minima.append(float(vals[0]))
    return np.array(minima)


def detect_with_family(
    rho: DensityMatrix, family: DetectorFamily, tol: float = DEFAULT_TOL
) -> DetectionVerdict:
    """Min-over-family verdict; monotone in the family size by the
    prefix property of sampled_detector."""
    minima = family_block_minima(rho, family)
    idx = int(np.argmin(minima))
    # Recompute the minimizing block for the witness vector.
    rep = family.base
    m = rho.dim_a
    rot = kron(np.eye(m), family.unitaries[idx])
    out = apply_map(extend_map(rep, m), rot @ rho.mat @ rot.conj().T)
    vals, vecs = hermitian_eig(out)
    min_eig = float(vals[0])
    detected = min_eig < -tol * max(1.0, frobenius_norm(out))
    return DetectionVerdict(
        map_label=f"family({rep.label},a={len(family.unitaries)})",
        min_eigenvalue=min_eig,
        detected=detected,
        witness=vecs[:, 0].copy() if detected else None,
    )


STATE_GRAMMAR = """state spec grammar: NAME:KEY=VALUE,...
  isotropic:n=3,p=0.9       bell:n=3
  pure:m=3,n=3,r=2,seed=7   product:fileA=a.json,fileB=b.json
  file:rho.json             ({"m":..,"n":..,"mat":<matrix>})"""


def parse_state_spec(text: str) -> DensityMatrix:
    """Parse the state mini-grammar shared with the command line tool."""
    from . import serialize
    from .zoo import _parse_params, _take

    spec = text.strip()
    name, sep, rest = spec.partition(":")
    name = name.strip()
    if name == "file":
        if not rest:
            raise ParameterError(f"state spec {spec!r} needs a path\n{STATE_GRAMMAR}")
        return serialize.load_state(rest)
    params = _parse_params(rest)
    if name == "isotropic":
        state = isotropic_state(
            _take(params, "n", spec, int), float(_take(params, "p", spec))
        )
    elif name == "bell":
        state = bell_state(_take(params, "n", spec, int))
    elif name == "pure":
        m = _take(params, "m", spec, int)
        n = _take(params, "n", spec, int)
        r = _take(params, "r", spec, int)
        seed = _take(params, "seed", spec, int)
        state = DensityMatrix.from_pure(random_pure(m, n, r, seed), m, n)
    elif name == "product":
        a = serialize.load_matrix(str(_take(params, "fileA", spec, str)))
        b = serialize.load_matrix(str(_take(params, "fileB", spec, str)))
        state = product_state(a, b)
    else:
        raise ParameterError(f"unknown state name {name!r}\n{STATE_GRAMMAR}")
    if params:
        raise ParameterError(
            f"unknown keys {sorted(params)} in state spec {spec!r}\n{STATE_GRAMMAR}"
        )
    return state
