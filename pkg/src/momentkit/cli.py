"""Command-line front end.

Every subcommand is a thin client over the HTTP service: it builds the JSON
request, posts it (in-process ASGI by default, a remote server with
--server), and renders the response as a CSV grid or a JSON report.  All
analysis logic lives behind the service boundary so the CLI and any remote
client see byte-identical behavior.

Exit codes: 0 success, 1 analysis-negative verdict, 2 input/schema error,
3 numerical failure (non-convergence, infeasibility, failed smoothing).
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile


def _set_thread_env() -> None:
    threads = os.environ.get("MOMENTKIT_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)


def _client(server: str | None):
    import httpx

    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
    # in-process: same request/response path as a live server, no socket
    from starlette.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _read_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path} is not valid JSON: {exc}")


class _InputError(Exception):
    pass


def _emit(text: str, output: str | None) -> None:
    """Write to stdout, or atomically (temp + rename) to a file."""
    if not output or output == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(prefix=".momentkit-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _floats(raw: str, what: str) -> list[float]:
    try:
        return [float(t) for t in raw.split(",") if t.strip() != ""]
    except ValueError:
        raise _InputError(f"{what}: expected comma-separated numbers, got {raw!r}")


def _points(raw: str, what: str):
    """Scalars "a,b,c" or vectors "x1 x2; y1 y2" (semicolon-separated)."""
    if ";" in raw:
        out = []
        for part in raw.split(";"):
            part = part.strip()
            if part:
                try:
                    out.append([float(t) for t in part.split()])
                except ValueError:
                    raise _InputError(f"{what}: bad vector {part!r}")
        return out
    return _floats(raw, what)


def _grid_payload(raw: str, what: str) -> dict:
    """start:stop:step becomes a grid_spec; otherwise a comma list."""
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise _InputError(f"{what}: expected start:stop:step, got {raw!r}")
        try:
            start, stop, step = (float(t) for t in parts)
        except ValueError:
            raise _InputError(f"{what}: expected numbers in start:stop:step")
        return {"grid_spec": {"start": start, "stop": stop, "step": step}}
    return {"grid": _points(raw, what)}


def _beta(raw: str) -> list[int]:
    try:
        return [int(t) for t in raw.split(",")]
    except ValueError:
        raise _InputError(f"--beta: expected comma-separated ints, got {raw!r}")


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="momentkit",
        description="Signed moment-sequence analysis: boundedness ladders, "
                    "characteristic series, density reconstruction, atomic fits.")
    p.add_argument("--server", help="URL of a running service (default: in-process)")
    sub = p.add_subparsers(dest="command", required=True)

    def seq_cmd(name: str, help_: str):
        q = sub.add_parser(name, help=help_)
        q.add_argument("input", help="sequence JSON path, or - for stdin")
        q.add_argument("--output", "-o", help="output path (default stdout)")
        return q

    q = sub.add_parser("moments", help="moments of a density spec")
    q.add_argument("--density", required=True,
                   help="indicator:lo,hi | gaussian:mean,var | a named density | inline JSON")
    q.add_argument("--max-degree", type=int, required=True)
    q.add_argument("--exact", dest="exact", action="store_true", default=None)
    q.add_argument("--float", dest="exact", action="store_false")
    q.add_argument("--output", "-o")

    q = seq_cmd("dseq", "distributional derivative of a sequence")
    q.add_argument("--beta", required=True, help="multi-index, e.g. 2 or 1,0")

    q = seq_cmd("hausdorff", "binomial absolute-sum profile")
    q.add_argument("--d-max", type=int, required=True)

    q = seq_cmd("abscont", "density-existence ladder (s and its derivative)")
    q.add_argument("--d-max", type=int, required=True)

    q = seq_cmd("cr-test", "C^r regularity ladder")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--d-max", type=int, required=True)

    q = seq_cmd("mirror-verify", "verify an orthant decomposition")
    q.add_argument("--components", required=True,
                   help="JSON file mapping sign keys (e.g. '+', '-') to sequence docs")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--d-max", type=int, required=True)
    q.add_argument("--defect-tol", type=float, default=1e-12)

    q = seq_cmd("charfn", "characteristic series values on points (CSV)")
    q.add_argument("--points", help="comma scalars or 'x1 x2;y1 y2' vectors")
    q.add_argument("--grid", help="start:stop:step (one-dimensional)")
    q.add_argument("--tol", type=float, default=1e-12)
    q.add_argument("--backend", default="auto", choices=["auto", "float", "exact", "mp"])

    q = seq_cmd("radius", "support-radius estimate from even moments")
    q.add_argument("--k-min", type=int, default=1)
    q.add_argument("--k-max", type=int, required=True)

    q = seq_cmd("bochner", "positive-definiteness kernel test")
    q.add_argument("--points", help="explicit points (comma scalars or vectors)")
    q.add_argument("--random", type=int, help="sample this many points instead")
    q.add_argument("--box", default="-1,1", help="sampling box lo,hi")
    q.add_argument("--seed", type=int)
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--series-tol", type=float, default=1e-10)
    q.add_argument("--rescale", action="store_true")

    q = seq_cmd("reconstruct", "inverse-transform density on a grid (CSV)")
    q.add_argument("--R", type=float, required=True)
    q.add_argument("--grid", required=True, help="start:stop:step or comma list")
    q.add_argument("--damping", default="none", choices=["none", "fejer"])
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--check-nonneg", type=float, metavar="TOL",
                   help="also run the nonnegativity check; negative verdict exits 1")

    q = seq_cmd("levy", "interval mass by inversion up to T")
    q.add_argument("--a", type=float, required=True)
    q.add_argument("--b", type=float, required=True)
    q.add_argument("--T", type=float, required=True)
    q.add_argument("--tol", type=float, default=1e-8)

    q = seq_cmd("smooth-mass", "Gaussian test-function mass at x0")
    q.add_argument("--x0", required=True, help="scalar or comma vector")
    q.add_argument("--sigma", type=float, required=True)
    q.add_argument("--R", type=float, required=True)
    q.add_argument("--tol", type=float, default=1e-8)

    q = sub.add_parser("richter", help="atomic decomposition of a functional")
    q.add_argument("functional", help="functional JSON path (domain/basis/values)")
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--grid-points", type=int, default=401)
    q.add_argument("--output", "-o")

    q = sub.add_parser("smooth", help="smooth an atomic fit with a Dirac family")
    q.add_argument("functional", help="functional JSON path (domain/basis/values)")
    q.add_argument("--family", default="gaussian", choices=["gaussian", "mollifier", "box"])
    q.add_argument("--sigma-grid", required=True, help="comma list, e.g. 0.1,0.05,0.01")
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--atomic-tol", type=float, default=1e-10)
    q.add_argument("--density-grid", help="also emit the density on start:stop:step")
    q.add_argument("--output", "-o")
    return p


def _request(args) -> tuple[str, dict]:
    """(route, payload) for the parsed invocation."""
    cmd = args.command
    if cmd == "moments":
        density = args.density
        if density.lstrip().startswith("{"):
            density = json.loads(density)
        payload = {"density": density, "max_degree": args.max_degree}
        if args.exact is not None:
            payload["exact"] = args.exact
        return "/moments", payload

    if cmd in ("richter", "smooth"):
        functional = _read_json(args.functional)
        if cmd == "richter":
            return "/richter", {"functional": functional, "tol": args.tol,
                                "grid_points": args.grid_points}
        payload = {"functional": functional, "family": args.family,
                   "sigmas": _floats(args.sigma_grid, "--sigma-grid"),
                   "tol": args.tol, "atomic_tol": args.atomic_tol}
        if args.density_grid:
            spec = _grid_payload(args.density_grid, "--density-grid")
            if "grid_spec" in spec:
                gs = spec["grid_spec"]
                count = int(round((gs["stop"] - gs["start"]) / gs["step"])) + 1
                payload["density_grid"] = [round(gs["start"] + i * gs["step"], 12)
                                           for i in range(count)]
            else:
                payload["density_grid"] = spec["grid"]
        return "/smooth", payload

    sequence = _read_json(args.input)
    if cmd == "dseq":
        return "/dseq", {"sequence": sequence, "beta": _beta(args.beta)}
    if cmd == "hausdorff":
        return "/hausdorff", {"sequence": sequence, "d_max": args.d_max}
    if cmd == "abscont":
        return "/abscont", {"sequence": sequence, "d_max": args.d_max}
    if cmd == "cr-test":
        return "/cr-test", {"sequence": sequence, "r": args.r, "d_max": args.d_max}
    if cmd == "mirror-verify":
        return "/mirror-verify", {"sequence": sequence,
                                  "components": _read_json(args.components),
                                  "r": args.r, "d_max": args.d_max,
                                  "defect_tol": args.defect_tol}
    if cmd == "charfn":
        if (args.points is None) == (args.grid is None):
            raise _InputError("charfn needs exactly one of --points or --grid")
        if args.points is not None:
            pts = _points(args.points, "--points")
        else:
            spec = _grid_payload(args.grid, "--grid")
            if "grid" in spec:
                pts = spec["grid"]
            else:
                gs = spec["grid_spec"]
                count = int(round((gs["stop"] - gs["start"]) / gs["step"])) + 1
                pts = [round(gs["start"] + i * gs["step"], 12) for i in range(count)]
        return "/charfn", {"sequence": sequence, "points": pts,
                           "tol": args.tol, "backend": args.backend}
    if cmd == "radius":
        return "/radius", {"sequence": sequence, "k_min": args.k_min, "k_max": args.k_max}
    if cmd == "bochner":
        payload = {"sequence": sequence, "tol": args.tol, "series_tol": args.series_tol,
                   "rescale": args.rescale}
        if args.points is not None:
            payload["points"] = _points(args.points, "--points")
        elif args.random is not None:
            box = _floats(args.box, "--box")
            if len(box) != 2:
                raise _InputError("--box: expected lo,hi")
            payload.update({"random_count": args.random, "box": box, "seed": args.seed})
        else:
            raise _InputError("bochner needs --points or --random")
        return "/bochner", payload
    if cmd == "reconstruct":
        payload = {"sequence": sequence, "R": args.R, "tol": args.tol,
                   "damping": args.damping}
        payload.update(_grid_payload(args.grid, "--grid"))
        if args.check_nonneg is not None:
            payload["nonneg_tol"] = args.check_nonneg
        return "/reconstruct", payload
    if cmd == "levy":
        return "/levy", {"sequence": sequence, "a": args.a, "b": args.b,
                         "T": args.T, "tol": args.tol}
    if cmd == "smooth-mass":
        x0 = _floats(args.x0, "--x0")
        return "/smooth-mass", {"sequence": sequence,
                                "x0": x0[0] if len(x0) == 1 else x0,
                                "sigma": args.sigma, "R": args.R, "tol": args.tol}
    raise _InputError(f"unknown command {cmd!r}")


def _render(cmd: str, doc: dict, args) -> tuple[str, int]:
    """(artifact text, exit code) from a successful response."""
    if cmd == "charfn":
        rows = []
        for v in doc["values"]:
            z = v["z"]
            rows.append((z[0] if len(z) == 1 else " ".join(repr(t) for t in z),
                         float(v["re"]), float(v["im"]), float(v["cancellation"])))
        return _csv(["z", "re_f", "im_f", "cancellation"], rows), 0

    if cmd == "reconstruct":
        rows = []
        for x, g, res in zip(doc["grid"], doc["values"], doc["imag_residues"]):
            xs = x if not isinstance(x, list) else " ".join(repr(t) for t in x)
            rows.append((xs, float(g), float(res)))
        text = _csv(["x", "g", "imag_residue"], rows)
        code = 0
        nn = doc.get("nonnegativity")
        if args.check_nonneg is not None and nn is not None:
            sys.stderr.write(_dump(nn))
            code = 0 if nn["nonnegative"] else 1
        return text, code

    code = 0
    if cmd in ("abscont", "cr-test", "mirror-verify") and not doc.get("positive", False):
        code = 1
    if cmd == "bochner" and not doc.get("all_psd", False):
        code = 1
    return _dump(doc), code


def main(argv=None) -> int:
    _set_thread_env()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        route, payload = _request(args)
    except _InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2

    try:
        with _client(args.server) as client:
            response = client.post(route, json=payload)
    except Exception as exc:  # connection failures, transport errors
        sys.stderr.write(f"error: request failed: {exc}\n")
        return 3

    if response.status_code != 200:
        try:
            doc = response.json()
        except ValueError:
            doc = {"error": "HTTPError", "message": response.text,
                   "category": "input" if response.status_code < 500 else "numerical"}
        sys.stderr.write(_dump(doc))
        if response.status_code in (400, 422):
            return 2
        return 3

    text, code = _render(args.command, response.json(), args)
    _emit(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
