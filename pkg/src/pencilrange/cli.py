"""Command-line front end.

Subcommands analyze pencils and polynomials from JSON matrix files and emit
JSON reports (analysis) or CSV plus a rendered figure (boundary, raster).
Exit codes: 0 analyzed, 2 input error, 3 indeterminate, 4 recovery or
verification failure. All randomized procedures take --seed (default 0) and
reports embed every parameter, so identical inputs reproduce identical
reports apart from wall time.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, hermitian, jointrange, matpoly, numrange, pencil
from . import matrixio as mio
from ._util import scale_of
from .errors import (BoundaryAmbiguous, FailedRecovery, Indeterminate,
                     InvalidInput, NotDissipative, NotFullPlane,
                     NumericallySingular, PencilRangeError, Unresolved)
from .linalg import HERMITIAN_REJECT, as_hermitian, cartesian_split, lambda_min

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INDETERMINATE = 3
EXIT_RECOVERY = 4


def _is_hermitian(M) -> bool:
    try:
        as_hermitian(M)
        return True
    except InvalidInput:
        return False


def _certificate_json(cert: jointrange.HullCertificate) -> dict:
    if cert.in_hull:
        return {
            "status": "in_hull",
            "witnesses": [
                {"vector": mio.vector_to_json(v), "weight": float(w)}
                for v, w in zip(cert.witness_vectors, cert.witness_weights)
            ],
            "combo_norm": float(cert.combo_norm),
        }
    return {
        "status": "not_in_hull",
        "separator": [float(x) for x in cert.separator],
        "margin": float(cert.margin),
    }


def _emit(report: dict, out, t0: float) -> None:
    report["wall_time_s"] = round(time.perf_counter() - t0, 6)
    text = mio.write_report(report, out)
    if not out:
        sys.stdout.write(text)


def cmd_pencil_analyze(args) -> int:
    t0 = time.perf_counter()
    A, provA = mio.load_matrix(args.a)
    B, provB = mio.load_matrix(args.b)
    sign = 1.0 if args.convention == "plus" else -1.0
    # library pencil convention is lambda*A + B; classify reads lambda*A - B
    P = pencil.Pencil(A, sign * B)
    report = {
        "operation": "pencil-analyze",
        "tool": {"name": "pencilrange", "version": __version__},
        "convention": args.convention,
        "inputs": {"A": provA, "B": provB},
        "parameters": {"tol": args.tol, "seed": args.seed,
                       "restarts": args.restarts, "angles": args.angles},
    }
    try:
        res = pencil.full_plane_test(P, tol=args.tol, restarts=args.restarts,
                                     seed=args.seed)
    except Indeterminate as e:
        report["status"] = "indeterminate"
        report["detail"] = str(e)
        _emit(report, args.out, t0)
        return EXIT_INDETERMINATE
    report["status"] = "full_plane" if res.full_plane else "not_full_plane"
    report["full_plane"] = res.full_plane
    report["certificate"] = _certificate_json(res.certificate)
    report["excluded_point"] = (mio.complex_to_json(res.excluded)
                                if res.excluded is not None else None)
    if _is_hermitian(A) and _is_hermitian(B):
        try:
            desc = hermitian.classify(A, -sign * B, tol=args.tol,
                                      restarts=args.restarts, seed=args.seed)
            report["descriptor"] = desc.to_json()
            report["descriptor_text"] = desc.describe()
            if desc.witness is not None:
                report["isotropic_witness"] = mio.vector_to_json(desc.witness)
        except (BoundaryAmbiguous, NumericallySingular, Unresolved) as e:
            report["status"] = "indeterminate"
            report["detail"] = f"classification: {e}"
            _emit(report, args.out, t0)
            return EXIT_INDETERMINATE
    _emit(report, args.out, t0)
    return EXIT_OK


def cmd_isotropic(args) -> int:
    t0 = time.perf_counter()
    loaded = [mio.load_matrix(p) for p in args.matrices]
    mats = [M for M, _ in loaded]
    report = {
        "operation": "isotropic",
        "tool": {"name": "pencilrange", "version": __version__},
        "inputs": {"matrices": [prov for _, prov in loaded]},
        "parameters": {"tol": args.tol, "seed": args.seed,
                       "restarts": args.restarts},
    }
    n = mats[0].shape[0]

    def found(vec, method) -> int:
        res = [abs(complex(np.vdot(vec, M @ vec))) for M in mats]
        report.update(status="found", method=method,
                      witness=mio.vector_to_json(vec),
                      residuals=[float(r) for r in res],
                      certified_nonexistence=False)
        _emit(report, args.out, t0)
        return EXIT_OK

    if len(mats) == 2 and all(_is_hermitian(M) for M in mats):
        A, B = as_hermitian(mats[0]), as_hermitian(mats[1])
        try:
            v = hermitian.common_isotropic_hermitian(
                A, B, tol=args.tol, restarts=args.restarts, seed=args.seed)
        except BoundaryAmbiguous as e:
            report.update(status="indeterminate", method="hermitian-exact",
                          detail=str(e))
            _emit(report, args.out, t0)
            return EXIT_INDETERMINATE
        if v is not None:
            return found(v, "hermitian-exact")
        _, margin, theta = numrange.zero_inside(A + 1j * B, tol=args.tol)
        report.update(status="none", method="hermitian-exact",
                      certified_nonexistence=True,
                      nonexistence_certificate={
                          "separator_angle": float(theta),
                          "margin": float(margin)})
        _emit(report, args.out, t0)
        return EXIT_OK

    if len(mats) == 2 and n > 2:
        try:
            w = pencil.dissipative_isotropic(
                pencil.Pencil(mats[0], mats[1]), tol=args.tol,
                restarts=args.restarts, seed=args.seed)
            return found(w.vector, "dissipative")
        except NotDissipative:
            pass
        except NotFullPlane as e:
            report.update(status="none", method="dissipative",
                          certified_nonexistence=True,
                          certificate=_certificate_json(e.certificate),
                          excluded_point=mio.complex_to_json(e.excluded))
            _emit(report, args.out, t0)
            return EXIT_OK
        except Indeterminate as e:
            report.update(status="indeterminate", method="dissipative",
                          detail=str(e))
            _emit(report, args.out, t0)
            return EXIT_INDETERMINATE
        except FailedRecovery as e:
            sys.stderr.write(f"recovery failed: {e}\n")
            return EXIT_RECOVERY

    w = jointrange.isotropic_minimize(mats, restarts=args.restarts,
                                      seed=args.seed, tol=args.tol)
    if w is not None:
        return found(w.vector, "optimizer")
    report.update(status="not_found", method="optimizer",
                  certified_nonexistence=False,
                  note="the optimizer found no witness; this does not prove "
                       "nonexistence")
    _emit(report, args.out, t0)
    return EXIT_OK


def _figure_path(args) -> str | None:
    if args.no_plot:
        return None
    if args.plot:
        return args.plot
    if args.out:
        return str(Path(args.out).with_suffix(".png"))
    return None


def cmd_boundary(args) -> int:
    M, _ = mio.load_matrix(args.matrix)
    poly = numrange.boundary_polygon(M, args.angles)
    rows = [(float(t), float(v.real), float(v.imag))
            for t, v in zip(poly.angles, poly.vertices)]
    if args.out:
        mio.write_csv(args.out, "theta,re,im", rows)
    else:
        sys.stdout.write("theta,re,im\n")
        for r in rows:
            sys.stdout.write(",".join(f"{v:.17g}" for v in r) + "\n")
    fig = _figure_path(args)
    if fig:
        from . import plots
        plots.render_boundary(poly, fig)
    return EXIT_OK


def cmd_raster(args) -> int:
    loaded = [mio.load_matrix(p) for p in args.coefficients]
    P = matpoly.MatrixPolynomial([M for M, _ in loaded])
    if args.window:
        try:
            window = tuple(float(t) for t in args.window.split(","))
            assert len(window) == 4
        except (ValueError, AssertionError):
            raise InvalidInput("--window expects re0,re1,im0,im1")
    else:
        window = matpoly.default_window(P, tol=args.tol)
    try:
        nx, ny = (int(t) for t in args.res.split(","))
    except ValueError:
        raise InvalidInput("--res expects nx,ny")
    grid = matpoly.region_raster(P, window, (nx, ny), tol=args.tol,
                                 angles=args.angles)
    rows = []
    for i, re in enumerate(grid.re_axis):
        for j, im in enumerate(grid.im_axis):
            rows.append((float(re), float(im), int(grid.cells[i, j])))
    if args.out:
        mio.write_csv(args.out, "re,im,inside", rows)
    else:
        sys.stdout.write("re,im,inside\n")
        for r in rows:
            sys.stdout.write(f"{r[0]:.17g},{r[1]:.17g},{r[2]}\n")
    fig = _figure_path(args)
    if fig:
        from . import plots
        plots.render_raster(grid, fig)
    return EXIT_OK


def _verify_pencil_report(report: dict, failures: list[str]) -> None:
    tol = float(report["parameters"]["tol"])
    A = mio.reload_input(report["inputs"]["A"])
    B = mio.reload_input(report["inputs"]["B"])
    sign = 1.0 if report["convention"] == "plus" else -1.0
    P = pencil.Pencil(A, sign * B)
    scale = scale_of(*P.hermitian_parts())
    cert = report.get("certificate")
    if cert and cert["status"] == "not_in_hull":
        c = np.asarray(cert["separator"], float)
        margin = lambda_min(sum(ci * H for ci, H in
                                zip(c, P.hermitian_parts())))
        if margin <= tol * scale or margin < 0.5 * cert["margin"]:
            failures.append(f"separator margin re-check failed: {margin:.3e}")
    if cert and cert["status"] == "in_hull":
        Hs = P.hermitian_parts()
        combo = np.zeros(len(Hs))
        for item in cert["witnesses"]:
            v = mio.vector_from_json(item["vector"])
            pt = np.array([float(np.real(np.vdot(v, H @ v))) for H in Hs])
            combo += item["weight"] * pt
        if float(np.linalg.norm(combo)) > 10 * tol * scale:
            failures.append(
                f"hull witness combination norm {np.linalg.norm(combo):.3e}")
    excl = report.get("excluded_point")
    if excl is not None:
        lam = complex(excl[0], excl[1])
        if pencil.membership(P, lam, tol=tol):
            failures.append(f"excluded point {lam} is actually a member")
    wit = report.get("isotropic_witness")
    if wit is not None:
        v = mio.vector_from_json(wit)
        for name, M in (("A", A), ("B", B)):
            r = abs(complex(np.vdot(v, M @ v)))
            if r > 10 * tol * scale_of(A, B):
                failures.append(f"isotropic witness residual on {name}: {r:.3e}")
    desc = report.get("descriptor")
    if desc and desc["kind"] != "full_plane":
        gap_point = hermitian.RangeDescriptor(
            kind=desc["kind"], alpha=desc.get("alpha"), beta=desc.get("beta"),
            case=desc.get("case", "")).excluded_real_point()
        # classify(A, -sign*B) describes exactly the analysis pencil P
        if pencil.membership(P, complex(gap_point), tol=tol):
            failures.append(
                f"descriptor-excluded real point {gap_point} is a member")


def _verify_isotropic_report(report: dict, failures: list[str]) -> None:
    tol = float(report["parameters"]["tol"])
    mats = [mio.reload_input(e) for e in report["inputs"]["matrices"]]
    scale = scale_of(*mats)
    if report["status"] == "found":
        v = mio.vector_from_json(report["witness"])
        for i, M in enumerate(mats):
            r = abs(complex(np.vdot(v, M @ v)))
            if r > 10 * tol * scale:
                failures.append(f"witness residual on matrix {i}: {r:.3e}")
    elif report.get("nonexistence_certificate"):
        ncert = report["nonexistence_certificate"]
        A, B = as_hermitian(mats[0]), as_hermitian(mats[1])
        M = A + 1j * B
        theta = float(ncert["separator_angle"])
        H = 0.5 * (np.exp(1j * theta) * M + np.exp(-1j * theta) * M.conj().T)
        margin = float(np.linalg.eigvalsh(H)[0])
        if margin <= tol * scale:
            failures.append(
                f"nonexistence separator margin re-check failed: {margin:.3e}")
    elif report["status"] == "none" and report.get("certificate"):
        cert = report["certificate"]
        P = pencil.Pencil(mats[0], mats[1])
        c = np.asarray(cert["separator"], float)
        margin = lambda_min(sum(ci * H for ci, H in
                                zip(c, P.hermitian_parts())))
        if margin <= tol * scale:
            failures.append(f"hull separator re-check failed: {margin:.3e}")


def cmd_verify(path) -> int:
    report = mio.load_report(path)
    op = report.get("operation")
    failures: list[str] = []
    if op == "pencil-analyze":
        _verify_pencil_report(report, failures)
    elif op == "isotropic":
        _verify_isotropic_report(report, failures)
    else:
        raise InvalidInput(f"cannot verify reports for operation {op!r}")
    if failures:
        for f in failures:
            sys.stderr.write(f"FAIL: {f}\n")
        return EXIT_RECOVERY
    sys.stdout.write(f"report {path}: all certificates re-verified\n")
    return EXIT_OK


def _add_common(p, angles: bool = True):
    p.add_argument("--tol", type=float, default=1e-9,
                   help="relative tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized stages (default 0)")
    p.add_argument("--restarts", type=int, default=64,
                   help="optimizer restarts (default 64)")
    if angles:
        p.add_argument("--angles", type=int, default=720,
                       help="support-function grid size (default 720)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pencilrange",
        description="Numerical ranges of matrix pencils and polynomials")
    ap.add_argument("--verify", metavar="REPORT",
                    help="re-verify every certificate in a JSON report")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("pencil-analyze",
                       help="full-plane test and Hermitian classification")
    p.add_argument("a", metavar="A.json")
    p.add_argument("b", metavar="B.json")
    p.add_argument("--convention", choices=("plus", "minus"), default="plus",
                   help="pencil reads lambda*A+B (plus) or lambda*A-B (minus)")
    p.add_argument("--out", help="write the JSON report here (default stdout)")
    _add_common(p)

    p = sub.add_parser("isotropic", help="common isotropic vector search")
    p.add_argument("matrices", nargs="+", metavar="M.json")
    p.add_argument("--out", help="write the JSON report here (default stdout)")
    _add_common(p, angles=False)
    p.set_defaults(angles=720)

    p = sub.add_parser("boundary", help="numerical range boundary CSV")
    p.add_argument("matrix", metavar="M.json")
    p.add_argument("--angles", type=int, default=720)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--plot", help="figure path (default: out path with .png)")
    p.add_argument("--no-plot", action="store_true")

    p = sub.add_parser("raster", help="membership raster of a polynomial")
    p.add_argument("coefficients", nargs="+", metavar="A0.json",
                   help="coefficient files in ascending degree")
    p.add_argument("--window", help="re0,re1,im0,im1 (default: heuristic)")
    p.add_argument("--res", default="101,101", help="nx,ny (default 101,101)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--plot", help="figure path (default: out path with .png)")
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--angles", type=int, default=720)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.verify:
            if args.command:
                ap.error("--verify does not combine with a subcommand")
            return cmd_verify(args.verify)
        if args.command == "pencil-analyze":
            return cmd_pencil_analyze(args)
        if args.command == "isotropic":
            return cmd_isotropic(args)
        if args.command == "boundary":
            return cmd_boundary(args)
        if args.command == "raster":
            return cmd_raster(args)
        ap.print_help()
        return EXIT_INPUT
    except InvalidInput as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT
    except FailedRecovery as e:
        sys.stderr.write(f"recovery failed: {e}\n")
        return EXIT_RECOVERY
    except (Indeterminate, BoundaryAmbiguous) as e:
        sys.stderr.write(f"indeterminate: {e}\n")
        return EXIT_INDETERMINATE
    except PencilRangeError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
