"""File formats: game JSON, state JSON, report JSON, trajectory CSV, manifests.

Complex matrices are stored as flat row-major lists of ``[re, im]`` pairs.
Floats are written in Python's shortest round-trip decimal form (at most 17
significant digits), so every value parses back to the identical double and
identical inputs always produce byte-identical files.  CSV output is UTF-8
with LF line endings and a fixed, documented header row.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np

from .equilibria import EquilibriumReport, ValueCertificate
from .games import PolymatrixGame, QuantumGame
from .learning import Trajectory
from .tensor import spectral_norm


def encode_matrix(m: np.ndarray) -> list[list[float]]:
    m = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in m.reshape(-1)]


def decode_matrix(entries: list[list[float]], rows: int, cols: int) -> np.ndarray:
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return flat.reshape(rows, cols)


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path, obj: Any) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_canonical(obj))


def read_json(path) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        h.update(f.read())
    return h.hexdigest()


# -- games --------------------------------------------------------------


def game_to_obj(game: QuantumGame | PolymatrixGame, seed: int | None = None) -> dict:
    if isinstance(game, PolymatrixGame):
        edges = []
        norms = []
        for (i, j), (r_ij, r_ji) in sorted(game.edges.items()):
            edges.append(
                {
                    "i": i,
                    "j": j,
                    "r_ij": encode_matrix(r_ij),
                    "r_ji": encode_matrix(r_ji),
                }
            )
            norms += [spectral_norm(r_ij), spectral_norm(r_ji)]
        obj = {"kind": "polymatrix", "dims": list(game.dims), "edges": edges, "spectral_norms": norms}
    else:
        obj = {
            "kind": "zero_sum" if game.zero_sum else "general",
            "dims": list(game.dims),
            "tensors": [encode_matrix(r) for r in game.tensors],
            "spectral_norms": [spectral_norm(r) for r in game.tensors],
        }
    if seed is not None:
        obj["seed"] = seed
    return obj


def obj_to_game(obj: dict) -> QuantumGame | PolymatrixGame:
    kind = obj["kind"]
    dims = tuple(int(d) for d in obj["dims"])
    if kind == "polymatrix":
        edges = {}
        for e in obj["edges"]:
            i, j = int(e["i"]), int(e["j"])
            nij = dims[i] * dims[j]
            edges[(i, j)] = (
                decode_matrix(e["r_ij"], nij, nij),
                decode_matrix(e["r_ji"], nij, nij),
            )
        return PolymatrixGame(dims, edges)
    n = 1
    for d in dims:
        n *= d
    tensors = tuple(decode_matrix(t, n, n) for t in obj["tensors"])
    return QuantumGame(dims, tensors, zero_sum=(kind == "zero_sum"))


def save_game(path, game, seed: int | None = None) -> None:
    write_json(path, game_to_obj(game, seed))


def load_game(path) -> tuple[str, QuantumGame | PolymatrixGame]:
    obj = read_json(path)
    return obj["kind"], obj_to_game(obj)


# -- states ---------------------------------------------------------------


def save_state(path, rho: np.ndarray, dims) -> None:
    rho = np.asarray(rho, dtype=complex)
    write_json(path, {"dims": [int(d) for d in dims], "matrix": encode_matrix(rho)})


def load_state(path) -> tuple[tuple[int, ...], np.ndarray]:
    obj = read_json(path)
    dims = tuple(int(d) for d in obj["dims"])
    n = 1
    for d in dims:
        n *= d
    return dims, decode_matrix(obj["matrix"], n, n)


# -- reports --------------------------------------------------------------


def report_to_obj(rep: EquilibriumReport) -> dict:
    obj = {
        "certificate": rep.kind,
        "gaps": list(rep.gaps),
        "max_gap": rep.max_gap,
        "tol": rep.tol,
        "verdict": rep.verdict,
    }
    if rep.product_defect is not None:
        obj["product_defect"] = rep.product_defect
    return obj


def certificate_to_obj(cert: ValueCertificate, tol: float) -> dict:
    return {
        "certificate": "zs_value",
        "lower": cert.lower,
        "value_at": cert.value_at,
        "upper": cert.upper,
        "width": cert.width,
        "tol": tol,
        "verdict": cert.is_eps_qne(tol),
    }


# -- trajectories ----------------------------------------------------------


def trajectory_header(dims) -> list[str]:
    k = len(dims)
    n = 1
    for d in dims:
        n *= d
    cols = ["t"]
    cols += [f"u_{i}" for i in range(k)]
    cols += [f"avg_regret_{i}" for i in range(k)]
    cols += [f"gap_{i}" for i in range(k)]
    cols += ["bound"]
    cols += [f"joint_eig_{j}" for j in range(n)]
    cols += [f"avg_joint_eig_{j}" for j in range(n)]
    for i, d in enumerate(dims):
        if d == 2:
            cols += [f"bloch_{i}_x", f"bloch_{i}_y", f"bloch_{i}_z"]
    return cols


def write_trajectory_csv(path, traj: Trajectory) -> None:
    qubit_players = [i for i, d in enumerate(traj.dims) if d == 2]
    lines = [",".join(trajectory_header(traj.dims))]
    for row, t in enumerate(traj.checkpoints):
        cells: list[str] = [str(int(t))]
        cells += [repr(float(x)) for x in traj.utils[row]]
        cells += [repr(float(x)) for x in traj.avg_regret[row]]
        cells += [repr(float(x)) for x in traj.gaps[row]]
        cells.append(repr(float(traj.bound[row])))
        cells += [repr(float(x)) for x in traj.joint_eigs[row]]
        cells += [repr(float(x)) for x in traj.avg_joint_eigs[row]]
        for i in qubit_players:
            cells += [repr(float(x)) for x in traj.bloch[i][row]]
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def manifest_obj(
    game_hash: str,
    seeds: dict,
    learner_kinds: list[str],
    schedule: dict,
    T: int,
    stride: int,
    gap_mode: str,
    bound_scale: float,
    tool_version: str,
) -> dict:
    return {
        "game_hash": game_hash,
        "seeds": seeds,
        "learner_kinds": learner_kinds,
        "schedule": schedule,
        "T": T,
        "stride": stride,
        "gap_mode": gap_mode,
        "bound_scale": bound_scale,
        "tool_version": tool_version,
    }
