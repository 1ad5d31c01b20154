"""Command-line front end: JSON in, one JSON document out, optional CSV side files.

Exit codes are 0 on success, 2 for bad input or an unknown command, and 1
when a numerical routine fails. Errors are reported on stdout as
``{"error": code, "detail": text}``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import gaussian, gridlab, matcore, oscillator, symplectic
from .capacity import (
    PhaseSpaceEllipsoid,
    capacity,
    containment_margin,
    eh_capacities,
    inscribed_quantum_blob,
    is_quantum_blob,
)
from .config import using
from .errors import InputError, NumericalError

WIGNER_WINDOW = 64


class BadInput(Exception):
    pass


class UnknownCommand(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message or "required: command" in message:
            raise UnknownCommand(message)
        raise BadInput(message)


# -- serialization ---------------------------------------------------------------

def _encode(obj) -> str:
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            raise NumericalError(f"non-finite value {v} in output")
        return format(v, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON with every float written to 17 significant digits."""
    return _encode(obj)


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path} is not valid JSON: {exc}") from exc


def _matrix(path: str) -> np.ndarray:
    obj = _load(path)
    if isinstance(obj, dict) and "entries" not in obj:
        for key in ("M", "M_F", "Gmat", "shape", "matrix"):
            if key in obj:
                return matcore.matrix_from_json(obj[key])
    return matcore.matrix_from_json(obj)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise BadInput(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise BadInput(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _state(path: str) -> gaussian.GaussianState:
    return gaussian.GaussianState.from_json(_load(path))


def _ellipsoid(path: str) -> PhaseSpaceEllipsoid:
    return PhaseSpaceEllipsoid.from_json(_load(path))


# -- commands --------------------------------------------------------------------

def cmd_williamson(args) -> dict:
    S, lam = symplectic.williamson(_matrix(args.input))
    return {"n": len(lam), "S": matcore.matrix_to_json(S), "values": lam}


def cmd_spectrum(args) -> dict:
    return symplectic.spectrum_to_json(symplectic.symplectic_spectrum(_matrix(args.input)))


def cmd_capacity(args) -> dict:
    return {"capacity": capacity(_ellipsoid(args.ellipsoid))}


def cmd_eh(args) -> list:
    if args.k < 1:
        raise BadInput(f"-k must be positive, got {args.k}")
    return eh_capacities(_ellipsoid(args.ellipsoid), args.k)


def cmd_fermi(args) -> dict:
    G = _state(args.state)
    form = gaussian.fermi_form(G)
    return {
        "M_F": matcore.matrix_to_json(form.matrix),
        "level": form.level,
        "S": matcore.matrix_to_json(gaussian.fermi_factorization(G)),
        "Gmat": matcore.matrix_to_json(gaussian.wigner_matrix(G)),
        "capacity": gaussian.fermi_capacity(G),
        "ellipsoid": form.as_ellipsoid().to_json(),
    }


def cmd_blob_check(args) -> dict:
    E = _ellipsoid(args.ellipsoid)
    lam = symplectic.symplectic_spectrum(E.shape / E.level)
    return {"isBlob": is_quantum_blob(E, tol=args.tol, hbar=args.hbar),
            "values": lam, "capacity": capacity(E)}


def cmd_inscribe(args) -> dict:
    E = _ellipsoid(args.ellipsoid)
    blob = inscribed_quantum_blob(E, hbar=args.hbar, seed=args.seed)
    out = blob.to_json()
    out["margin"] = containment_margin(E, blob, seed=args.seed)
    out["ellipsoid"] = blob.as_ellipsoid().to_json()
    return out


def _wigner_window(G: gaussian.GaussianState):
    xs, ps = gridlab.phase_space_window(gaussian.covariance(G), WIGNER_WINDOW)
    Z = np.stack(np.meshgrid(xs, ps, indexing="ij"), axis=-1)
    return xs, ps, gaussian.wigner_closed_form(G, Z)


def cmd_wigner(args) -> dict:
    G = _state(args.state)
    out = {"Gmat": matcore.matrix_to_json(gaussian.wigner_matrix(G)),
           "covariance": matcore.matrix_to_json(gaussian.covariance(G)),
           "peak": (math.pi * G.hbar) ** (-G.n)}
    if not (args.numeric or args.csv):
        return out
    if G.n != 1:
        raise BadInput("sampled Wigner output is available for n = 1 only")
    xs, ps, W = _wigner_window(G)
    if args.numeric:
        psi = gridlab.sample_gaussian(G, gridlab.Grid1D.default(G.hbar, args.grid_points))
        Wn = gridlab.wigner_numeric(psi, xs, ps)
        out["maxError"] = float(np.max(np.abs(Wn - W)))
        W = Wn
    if args.csv:
        gridlab.write_phase_space_csv(args.csv, xs, ps, W)
        out["csv"] = args.csv
    return out


def cmd_rs_check(args) -> dict:
    return gaussian.rs_check(_state(args.state)).to_json()


def cmd_hermite(args) -> dict:
    if args.N < 0:
        raise BadInput(f"--N must be non-negative, got {args.N}")
    if not args.omega > 0:
        raise BadInput(f"--omega must be positive, got {args.omega}")
    out = {"N": args.N, "omega": args.omega, "hbar": args.hbar,
           "energy": oscillator.energy_level([args.omega], [args.N], args.hbar)}
    grid = gridlab.Grid1D.default(args.hbar, args.grid_points)
    if args.residual:
        out["residual"] = gridlab.eigen_residual(args.N, args.omega, grid, args.hbar)
    if args.csv:
        psi = gridlab.sample_hermite(args.N, grid, args.omega, args.hbar)
        gridlab.write_field_csv(args.csv, grid.x, psi.values)
        out["csv"] = args.csv
    return out


def cmd_claim_check(args) -> dict:
    omegas, N = _floats(args.omega), _ints(args.N)
    if len(omegas) != len(N):
        raise BadInput(f"{len(omegas)} frequencies but {len(N)} quantum numbers")
    H = oscillator.QuadraticHamiltonian.from_frequencies(omegas, args.hbar)
    return oscillator.claim_check(H, N).to_json()


def cmd_fermi_pde(args) -> dict:
    grid, R, Phi = gridlab.read_fields_csv(args.fields, args.hbar)
    res = gridlab.fermi_operator_residual(R, Phi, grid, args.hbar)
    return {"residualNorm": res.residual_norm, "points": grid.count,
            "unmasked": int(np.count_nonzero(res.field_mask))}


def cmd_contour(args) -> dict:
    grid, R, Phi = gridlab.read_fields_csv(args.fields, args.hbar)
    pmax = 6.0 * math.sqrt(args.hbar) if args.pmax is None else args.pmax
    if not pmax > 0:
        raise BadInput(f"--pmax must be positive, got {pmax}")
    pts = gridlab.fermi_contour(R, Phi, grid, np.linspace(-pmax, pmax, grid.count), args.hbar)
    gridlab.write_contour_csv(args.csv, pts)
    return {"points": int(pts.shape[0]), "csv": args.csv}


def _metaplectic_data(path: str, alternate: bool) -> gridlab.MetaplecticData:
    md = gridlab.MetaplecticData.from_json(_load(path))
    return md.alternate() if alternate else md


def cmd_metaplectic(args) -> dict:
    md = _metaplectic_data(args.S, args.alternate)
    G = _state(args.state)
    if G.n != 1:
        raise BadInput("metaplectic quadrature is available for n = 1 only")
    grid = gridlab.metaplectic_grid(md, G)
    psi = gridlab.sample_gaussian(G, grid)
    image = gridlab.metaplectic_apply(md, psi)
    out = {"S": md.to_json(), "normRatio": image.norm() / psi.norm(),
           "points": grid.count}
    if args.covariance:
        out.update(gridlab.covariance_check(md, G, grid))
    if args.csv:
        gridlab.write_field_csv(args.csv, grid.x, image.values)
        out["csv"] = args.csv
    return out


# -- parser ----------------------------------------------------------------------

def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--hbar", type=float, help="reduced Planck constant (default 1)", **kw)
    p.add_argument("--tol", type=float, help="comparison tolerance (default 1e-8)", **kw)
    p.add_argument("--grid-points", type=int, help="1D grid size (default 2048)", **kw)
    p.add_argument("--seed", type=int, help="random seed (default 0)", **kw)
    return p


COMMANDS = {
    "williamson": (cmd_williamson, "Williamson normal form of an SPD matrix"),
    "spectrum": (cmd_spectrum, "symplectic eigenvalues of an SPD matrix"),
    "capacity": (cmd_capacity, "symplectic capacity of an ellipsoid"),
    "eh": (cmd_eh, "first k Ekeland-Hofer capacities"),
    "fermi": (cmd_fermi, "Fermi form, factorization and Wigner matrix of a Gaussian"),
    "blob-check": (cmd_blob_check, "is an ellipsoid a quantum blob"),
    "inscribe": (cmd_inscribe, "largest-frame quantum blob inside an ellipsoid"),
    "wigner": (cmd_wigner, "Wigner function of a Gaussian"),
    "rs-check": (cmd_rs_check, "Robertson-Schrodinger inequalities"),
    "hermite": (cmd_hermite, "Hermite eigenstate energy and residual"),
    "claim-check": (cmd_claim_check, "capacity of an excited energy ellipsoid vs (N+1/2)h"),
    "fermi-pde": (cmd_fermi_pde, "finite-difference Fermi operator residual"),
    "contour": (cmd_contour, "zero set of the Fermi function"),
    "metaplectic": (cmd_metaplectic, "apply a metaplectic operator to a Gaussian"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fermiblob", parents=[_global_flags(False)],
                     description="Symplectic capacities, Fermi ellipsoids and grid checks.")
    parser.set_defaults(hbar=1.0, tol=1e-8, grid_points=2048, seed=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    parents = [_global_flags(True)]

    def add(name):
        return sub.add_parser(name, parents=parents, help=COMMANDS[name][1])

    for name in ("williamson", "spectrum"):
        add(name).add_argument("-i", "--input", required=True, help="matrix JSON")
    for name in ("capacity", "blob-check", "inscribe"):
        add(name).add_argument("--ellipsoid", required=True, help="ellipsoid JSON")
    p = add("eh")
    p.add_argument("--ellipsoid", required=True)
    p.add_argument("-k", type=int, required=True, help="number of capacities")
    for name in ("fermi", "rs-check"):
        add(name).add_argument("--state", required=True, help="Gaussian state JSON")
    p = add("wigner")
    p.add_argument("--state", required=True)
    p.add_argument("--numeric", action="store_true", help="also evaluate by quadrature (n=1)")
    p.add_argument("--csv", help="write x,p,value samples here")
    p = add("hermite")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--residual", action="store_true")
    p.add_argument("--csv", help="write x,re,im samples here")
    p = add("claim-check")
    p.add_argument("--omega", required=True, help="comma-separated frequencies")
    p.add_argument("--N", required=True, help="comma-separated quantum numbers")
    add("fermi-pde").add_argument("--fields", required=True, help="CSV with x,R,Phi or x,re,im")
    p = add("contour")
    p.add_argument("--fields", required=True)
    p.add_argument("--csv", required=True, help="write x,p contour points here")
    p.add_argument("--pmax", type=float, help="momentum window half-width (default 6 sqrt(hbar))")
    p = add("metaplectic")
    p.add_argument("--S", required=True, help="JSON with A,B,C,D[,maslov] or a 2x2 matrix")
    p.add_argument("--state", required=True)
    p.add_argument("--covariance", action="store_true", help="check Wigner covariance")
    p.add_argument("--alternate", action="store_true", help="use the Maslov branch m+2")
    p.add_argument("--csv", help="write the transformed samples (x,re,im) here")
    return parser


def run_command(argv, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout

    def emit(obj):
        stdout.write(dumps(obj) + "\n")

    try:
        args = build_parser().parse_args(argv)
        with using(hbar=args.hbar, tol=args.tol, grid_points=args.grid_points, seed=args.seed):
            result = COMMANDS[args.command][0](args)
        text = dumps(result)
    except UnknownCommand as exc:
        emit({"error": "UnknownCommand", "detail": str(exc)})
        return 2
    except ArithmeticError as exc:
        emit({"error": "NumericalFailure", "detail": f"{type(exc).__name__}: {exc}"})
        return 1
    except (BadInput, InputError, ValueError, KeyError, TypeError, OSError) as exc:
        emit({"error": "BadInput", "detail": f"{type(exc).__name__}: {exc}"})
        return 2
    stdout.write(text + "\n")
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
