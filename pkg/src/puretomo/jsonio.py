"""JSON encoding for states, operator sets and outcome vectors.

Complex numbers are ``[re, im]`` pairs. Rank-1 elements are written by their
generator vector, others as a full ``dim x dim`` matrix. Floats use Python's
shortest round-trip representation, so ``read(write(x)) == x`` exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import BadParams, DimensionMismatch
from .povm import OperatorSet, Povm
from .states import NORM_TOL, PureState, canonicalize


def vector_to_json(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128).ravel()]


def vector_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise BadParams("complex vectors are lists of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def matrix_to_json(m) -> list[list[list[float]]]:
    return [vector_to_json(row) for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise BadParams("complex matrices are nested lists of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(state: PureState) -> dict:
    return {"dim": state.dim, "amplitudes": vector_to_json(state.amplitudes)}


def state_from_json(data: dict) -> PureState:
    try:
        amps = vector_from_json(data["amplitudes"])
    except KeyError:
        raise BadParams("state JSON needs an 'amplitudes' field") from None
    if "dim" in data and int(data["dim"]) != amps.shape[0]:
        raise DimensionMismatch(f"dim {data['dim']} but {amps.shape[0]} amplitudes")
    state = canonicalize(amps)
    # Keep already-canonical input bit-for-bit instead of renormalizing it.
    if np.allclose(state.amplitudes, amps, rtol=0.0, atol=NORM_TOL):
        return PureState(amps)
    return state


def operator_set_to_json(s: OperatorSet) -> dict:
    elements = []
    for e, g in zip(s.elements, s.generators):
        if g is not None:
            elements.append({"generator": vector_to_json(g)})
        else:
            elements.append({"matrix": matrix_to_json(e)})
    out = {"dim": s.dim, "elements": elements}
    if s.resolution_subset is not None:
        out["resolution_subset"] = list(s.resolution_subset)
    if s.name:
        out["name"] = s.name
    return out


def operator_set_from_json(data: dict) -> OperatorSet:
    """Parse an operator set; returns a :class:`Povm` when the elements sum to ``I``."""
    try:
        dim = int(data["dim"])
        raw = data["elements"]
    except KeyError as exc:
        raise BadParams(f"operator-set JSON is missing {exc}") from None
    mats, gens = [], []
    for k, el in enumerate(raw):
        if "generator" in el:
            g = vector_from_json(el["generator"])
            gens.append(g)
            mats.append(np.outer(g, g.conj()))
        elif "matrix" in el:
            gens.append(None)
            mats.append(matrix_from_json(el["matrix"]))
        else:
            raise BadParams(f"element {k} has neither 'generator' nor 'matrix'")
        if mats[-1].shape != (dim, dim):
            raise DimensionMismatch(f"element {k} does not match dim {dim}")
    subset = data.get("resolution_subset")
    s = OperatorSet(mats, gens, subset, name=data.get("name"))
    return Povm.from_set(s) if s.is_povm() else s


def outcomes_to_json(values, **extra) -> dict:
    return {"values": [float(x) for x in np.asarray(values, dtype=float)], **extra}


def outcomes_from_json(data) -> np.ndarray:
    if isinstance(data, dict):
        data = data.get("values")
    if data is None:
        raise BadParams("outcome JSON needs a 'values' list")
    return np.asarray(data, dtype=float)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
