"""JSON formats for matrices, maps, coefficient lists, and states.

Matrices are {"rows": r, "cols": c, "re": [...], "im": [...]} with
row-major entry order; every other format embeds this one.
"""

from __future__ import annotations

import json

import numpy as np

from .choi import MapRep
from .detection import DensityMatrix
from .equivariant import EquivariantSpec
from .errors import ParameterError
from .perms import Permutation

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "map_to_json",
    "map_from_json",
    "spec_to_json",
    "spec_from_json",
    "state_to_json",
    "state_from_json",
    "load_json",
    "save_json",
    "load_matrix",
    "load_state",
]


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ParameterError(f"expected a matrix, got array of ndim {M.ndim}")
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "re": [float(x) for x in M.real.reshape(-1)],
        "im": [float(x) for x in M.imag.reshape(-1)],
    }


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParameterError(f"{where} is missing key {key!r}")
    return obj[key]


def matrix_from_json(obj) -> np.ndarray:
    rows = int(_need(obj, "rows", "matrix object"))
    cols = int(_need(obj, "cols", "matrix object"))
    re = _need(obj, "re", "matrix object")
    im = _need(obj, "im", "matrix object")
    if rows < 1 or cols < 1:
        raise ParameterError(f"matrix dims must be positive, got {rows} x {cols}")
    if len(re) != rows * cols or len(im) != rows * cols:
        raise ParameterError(
            f"entry lists have lengths {len(re)}/{len(im)}, expected {rows * cols}"
        )
    arr = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ParameterError("matrix entries must be finite numbers")
    return arr.reshape(rows, cols)


def map_to_json(rep: MapRep) -> dict:
    return {
        "n": rep.n,
        "N": rep.N,
        "label": rep.label,
        "choi": matrix_to_json(rep.choi),
    }


def map_from_json(obj) -> MapRep:
    """Rebuild a MapRep; equivariance declarations do not survive the
    round trip and must be re-attested if the block criterion is wanted."""
    return MapRep(
        n=int(_need(obj, "n", "map object")),
        N=int(_need(obj, "N", "map object")),
        choi=matrix_from_json(_need(obj, "choi", "map object")),
        label=str(obj.get("label", "")),
    )


def spec_to_json(spec: EquivariantSpec) -> dict:
    coeffs = []
    for p, c in spec.coeffs.items():
        coeffs.append({"perm": p.cycle_string(), "re": float(c.real), "im": float(c.imag)})
    return {"n": spec.n, "a": spec.a, "b": spec.b, "coeffs": coeffs}


def spec_from_json(obj) -> EquivariantSpec:
    n = int(_need(obj, "n", "coefficient object"))
    a = int(_need(obj, "a", "coefficient object"))
    b = int(_need(obj, "b", "coefficient object"))
    entries = _need(obj, "coeffs", "coefficient object")
    degree = a + b + 1
    coeffs: dict[Permutation, complex] = {}
    for i, entry in enumerate(entries):
        where = f"coeffs[{i}]"
        perm = Permutation.from_cycles(str(_need(entry, "perm", where)), degree)
        value = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        if perm in coeffs:
            raise ParameterError(f"{where} repeats permutation {perm}")
        coeffs[perm] = value
    return EquivariantSpec(n=n, a=a, b=b, coeffs=coeffs)


def state_to_json(rho: DensityMatrix) -> dict:
    return {"m": rho.dim_a, "n": rho.dim_b, "mat": matrix_to_json(rho.mat)}


def state_from_json(obj) -> DensityMatrix:
    return DensityMatrix(
        dim_a=int(_need(obj, "m", "state object")),
        dim_b=int(_need(obj, "n", "state object")),
        mat=matrix_from_json(_need(obj, "mat", "state object")),
    )


def load_json(path: str):
    """Parse a JSON file; decoding errors propagate with their byte offset."""
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def save_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_matrix(path: str) -> np.ndarray:
    return matrix_from_json(load_json(path))


def load_state(path: str) -> DensityMatrix:
    return state_from_json(load_json(path))
