"""Command-line front end over a JSON matrix interchange format.

Matrices travel as ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with
row-major data. Results are a single JSON object on stdout carrying the
command echo, verdicts/values, residuals, any matrices, and elapsed_ms.
Floats are emitted through repr, which round-trips every binary64 value
exactly; elapsed_ms is 0.0 unless --timing is passed so identical inputs
produce byte-identical output.

Exit codes: 0 success; 2 computed-but-negative verdict (or failed
precondition) on test-like commands; 1 error, with a machine-readable
error object on stdout.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import BadJson, MrangeError, UnknownCommand
from .linalg import Tolerances, as_cmat, op_norm

COMMANDS = (
    "numrad", "boundary", "ando", "lmi", "ucp-e21", "dilate2", "bilateral",
    "pdcheck", "nilpotent-cond", "nilpotent-dilate", "fejer-riesz",
    "toeplitz-check", "toeplitz-measure", "block-measure", "member",
    "spatial", "smith-ward", "probe", "suite",
)


def matrix_to_json(M):
    A = as_cmat(M)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in A.reshape(-1)],
    }


def matrix_from_json(obj):
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise BadJson(f"matrix object needs rows/cols/data: {exc}")
    if len(data) != rows * cols:
        raise BadJson(f"data length {len(data)} != rows*cols = {rows * cols}")
    try:
        flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise BadJson(f"matrix entries must be [re, im] pairs: {exc}")
    M = flat.reshape(rows, cols)
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag)):
        raise BadJson("matrix entries must be finite")
    return M


def complex_from_json(pair):
    return complex(pair[0], pair[1])


def complex_to_json(z):
    return [float(np.real(z)), float(np.imag(z))]


def _load_input(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadJson(f"cannot read input JSON: {exc}")


def _require_matrix(payload, key="matrix"):
    if isinstance(payload, dict) and "rows" in payload and "data" in payload:
        return matrix_from_json(payload)
    if isinstance(payload, dict) and key in payload:
        return matrix_from_json(payload[key])
    raise BadJson(f"input must be a matrix object or carry a '{key}' field")


def _tolerances(args):
    base = os.environ.get("MRANGE_TOL")
    eps = args.tol if args.tol is not None else (float(base) if base else None)
    if eps is None:
        return Tolerances()
    return Tolerances(psd_eps=eps, feas_eps=max(eps, 1e-7))


def build_parser():
    p = argparse.ArgumentParser(
        prog="mrange",
        description="numerical radius / matricial range / dilation toolkit")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=False, help="input JSON file")
    p.add_argument("--tol", type=float, default=None, help="psd tolerance override")
    p.add_argument("--grid", type=int, default=None, help="angle or node grid size")
    p.add_argument("--seed", type=int, default=2024, help="random seed")
    p.add_argument("--order", type=int, default=2, help="nilpotent order / subspace size")
    p.add_argument("--window", type=int, default=8, help="dilation window half-width")
    p.add_argument("--nodes", type=int, default=64, help="witness node count")
    p.add_argument("--count", type=int, default=100, help="sample count")
    p.add_argument("--set", dest="target_set", choices=("e21", "shift", "normal"),
                   default="e21", help="membership target set")
    p.add_argument("--out", default=None, help="also write the JSON result here")
    p.add_argument("--timing", action="store_true",
                   help="report real elapsed_ms (breaks byte-determinism)")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; results are identical")
    p.add_argument("--version", action="version", version=__version__)
    return p


def _run_command(cmd, args):
    """Returns (payload dict, exit code)."""
    from . import ando as ando_mod
    from . import dilation, matrange, numrange, toeplitz
    from .cpmaps import choi, is_cp

    tol = _tolerances(args)
    if args.grid is not None:
        tol = Tolerances(psd_eps=tol.psd_eps, rank_rel=tol.rank_rel,
                         fixpoint_eps=tol.fixpoint_eps, feas_eps=tol.feas_eps,
                         grid_angles=args.grid)
    payload = _load_input(args.input) if args.input else None

    if cmd == "numrad":
        T = _require_matrix(payload)
        return {"radius": numrange.num_radius(T, tol)}, 0

    if cmd == "boundary":
        T = _require_matrix(payload)
        K = args.count
        pts = numrange.range_boundary(T, K, tol)
        return {"points": [complex_to_json(z) for z in pts]}, 0

    if cmd == "ando":
        T = _require_matrix(payload)
        dec = ando_mod.ando_decompose(T, tol)
        return {
            "X": matrix_to_json(dec.X),
            "Y_max": matrix_to_json(dec.Y_max),
            "Y_min": matrix_to_json(dec.Y_min),
            "Z": matrix_to_json(dec.Z),
            "C": matrix_to_json(dec.C),
            "iterations": dec.iterations,
            "residuals": {k: float(v) for k, v in dec.residuals.items()},
        }, 0

    if cmd == "lmi":
        T = _require_matrix(payload)
        ok, A = ando_mod.radius_lmi(T, tol)
        out = {"feasible": ok}
        if ok:
            out["A"] = matrix_to_json(A)
        return out, 0 if ok else 2

    if cmd == "ucp-e21":
        T = _require_matrix(payload)
        phi = ando_mod.ucp_from_e21(T, tol)
        cp_ok, min_eig = is_cp(phi, tol)
        return {
            "values": {f"E{i}{j}": matrix_to_json(phi.value(i, j))
                       for i in (1, 2) for j in (1, 2)},
            "choi": matrix_to_json(choi(phi).block),
            "cp": cp_ok,
            "choi_min_eig": min_eig,
        }, 0

    if cmd == "dilate2":
        T = _require_matrix(payload)
        win = dilation.two_dilation(T, args.window, tol)
        residual = 0.0
        Tn = np.eye(T.shape[0], dtype=complex)
        for n in range(1, args.window // 2):
            Tn = Tn @ as_cmat(T)
            residual = max(residual, op_norm(win.center_block_of_power(n) - Tn / 2.0))
        return {
            "window": args.window,
            "block_dim": win.block_dim,
            "compression_residual": residual,
            "U": matrix_to_json(win.dense()),
        }, 0

    if cmd == "bilateral":
        rep = dilation.bilateral_e21_model(args.window)
        ok = rep.is_lower_unit and rep.flipped_is_upper_unit and rep.square_is_zero
        return {
            "compression": matrix_to_json(rep.compression),
            "compression_flipped": matrix_to_json(rep.compression_flipped),
            "square_compression": matrix_to_json(rep.square_compression),
            "model_verified": ok,
        }, 0 if ok else 2

    if cmd == "pdcheck":
        blocks = [matrix_from_json(b) for b in payload["blocks"]]
        ok, min_eig = dilation.pd_function_check(blocks, tol)
        return {"positive_definite": ok, "min_eig": min_eig}, 0 if ok else 2

    if cmd == "nilpotent-cond":
        T = _require_matrix(payload)
        margin = dilation.nilpotent_condition(T, args.order, args.grid, tol)
        ok = margin >= -tol.psd_eps
        return {"order": args.order, "margin": margin, "holds": ok}, 0 if ok else 2

    if cmd == "nilpotent-dilate":
        T = _require_matrix(payload)
        nd = dilation.nilpotent_dilation(T, args.order, tol)
        A = as_cmat(T)
        Vh = np.conj(nd.V).T
        comp = max(op_norm(Vh @ np.linalg.matrix_power(nd.N, j) @ nd.V
                           - np.linalg.matrix_power(A, j))
                   for j in range(args.order))
        return {
            "order": nd.order,
            "multiplicity": nd.r,
            "isometry_residual": op_norm(Vh @ nd.V - np.eye(A.shape[0])),
            "compression_residual": comp,
            "V": matrix_to_json(nd.V),
            "N": matrix_to_json(nd.N),
        }, 0

    if cmd == "fejer-riesz":
        coeffs = np.array([complex_from_json(c) for c in payload["coeffs"]])
        poly = toeplitz.TrigPoly(coeffs=coeffs)
        p = toeplitz.fejer_riesz(poly, tol)
        lam = np.exp(2j * np.pi * np.arange(4096) / 4096)
        resid = float(np.abs(poly.eval_at_angle(np.angle(lam))
                             - np.abs(np.polyval(p[::-1], lam)) ** 2).max())
        return {
            "factor": [complex_to_json(z) for z in p],
            "grid_residual": resid,
        }, 0

    if cmd == "toeplitz-check":
        spec = _toeplitz_spec(payload)
        ok, min_eig = toeplitz.toeplitz_psd(spec, tol)
        return {"psd": ok, "min_eig": min_eig}, 0 if ok else 2

    if cmd == "toeplitz-measure":
        spec = _toeplitz_spec(payload)
        mu = toeplitz.measure_from_toeplitz(spec, args.grid, tol)
        moments = [mu.moment(k) for k in range(spec.n)]
        return {
            "nodes": [float(x) for x in mu.nodes],
            "weights": [float(x) for x in mu.weights],
            "moments": [complex_to_json(z) for z in moments],
            "moment_residual": float(np.abs(np.array(moments)
                                            - spec.coeffs).max()),
        }, 0

    if cmd == "block-measure":
        spec = _toeplitz_spec(payload)
        mu = toeplitz.block_measure_from_toeplitz(spec, args.grid, tol)
        resid = max(op_norm(mu.moment(k) - spec.blocks[k])
                    for k in range(spec.n))
        return {
            "nodes": [float(x) for x in mu.nodes],
            "weights": [matrix_to_json(G) for G in mu.weights],
            "moment_residual": resid,
        }, 0

    if cmd == "member":
        X = _require_matrix(payload)
        if args.target_set == "e21":
            verdict = matrange.member_e21(X, tol)
        elif args.target_set == "shift":
            verdict = matrange.member_shift_ball(X, args.nodes, tol)
        else:
            spectrum = [complex_from_json(z) for z in payload["spectrum"]]
            verdict = matrange.member_normal(spectrum, X, tol)
        return {
            "set": args.target_set,
            "member": verdict.member,
            "margin": float(verdict.margin),
            "witness_verified": verdict.witness is not None,
            "unverified": verdict.unverified,
        }, 0 if verdict.member else 2

    if cmd == "spatial":
        T = _require_matrix(payload)
        mats = matrange.spatial_samples(T, args.order, args.count, args.seed, tol)
        radii = [numrange.num_radius(M, tol) for M in mats]
        return {
            "count": len(mats),
            "max_radius": max(radii) if radii else 0.0,
            "samples": [matrix_to_json(M) for M in mats[:8]],
        }, 0

    if cmd == "smith-ward":
        T = _require_matrix(payload)
        nu, comp = matrange.smith_ward_nu(T, args.order)
        return {
            "nu_lower": nu,
            "op_norm": op_norm(T),
            "compression": matrix_to_json(comp),
        }, 0

    if cmd == "probe":
        S = matrix_from_json(payload["S"])
        T = matrix_from_json(payload["T"])
        rep = matrange.opsys_probe(S, T, args.order, args.count, args.seed)
        return {"samples": rep.samples, "max_gap": rep.max_gap}, 0

    if cmd == "suite":
        T = _require_matrix(payload)
        rep = matrange.equivalence_suite(T, tol)
        conds = rep.all_conditions()
        return {
            "radius": rep.radius,
            "conditions": list(conds),
            "all_true": all(conds),
        }, 0 if all(conds) else 2

    raise UnknownCommand(cmd)


def _toeplitz_spec(payload):
    from .toeplitz import BlockToeplitzSpec, ToeplitzSpec

    if "coeffs" in payload:
        return ToeplitzSpec(coeffs=np.array(
            [complex_from_json(c) for c in payload["coeffs"]]))
    if "blocks" in payload:
        return BlockToeplitzSpec(blocks=tuple(
            matrix_from_json(b) for b in payload["blocks"]))
    raise BadJson("Toeplitz input needs 'coeffs' or 'blocks'")


def run(argv):
    head = next((a for a in argv if not a.startswith("-")), None)
    if head is not None and head not in COMMANDS:
        _emit({"error": {"name": "UnknownCommand", "message": head}}, None)
        return 1
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        payload, code = _run_command(args.command, args)
    except MrangeError as exc:
        out = {"command": args.command, "error": {"name": exc.name, "message": str(exc)}}
        _emit(out, args.out)
        return 1
    except AssertionError as exc:
        out = {"command": args.command,
               "error": {"name": "VerificationFailed", "message": str(exc)}}
        _emit(out, args.out)
        return 1
    elapsed = (time.perf_counter() - started) * 1000.0 if args.timing else 0.0
    result = {"command": args.command, **payload, "elapsed_ms": elapsed}
    _emit(result, args.out)
    return code


def _emit(obj, out_path):
    text = json.dumps(obj)
    sys.stdout.write(text + "\n")
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")


def main():
    sys.exit(run(sys.argv[1:]))
