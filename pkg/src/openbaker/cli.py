"""Command-line front end.

Each subcommand is a thin client of the HTTP service: by default the
service runs in process (no sockets, no network), and --server points the
same client at a remote instance instead. Results are written to --out as
CSV (17 significant digits), JSON (stable key order), and 16-bit NetPBM
grids, always next to a meta.json that records every resolved parameter,
so a run can be reproduced bit for bit from its outputs alone.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 refusal on a near-defective resonance.
"""

import argparse
import asyncio
import os
import sys
from typing import List, Optional

import httpx
import numpy as np

from . import __version__
from .errors import (EXIT_OK, ConfigurationError, NearDefectiveResonanceError,
                     NumericalFailureError, OpenBakerError)
from .formats import write_csv, write_json, write_pgm16

__all__ = ["main"]


class ServiceClient:
    """POSTs one request per command, in process unless --server is given."""

    def __init__(self, server: Optional[str] = None):
        self.server = server

    def post(self, path: str, payload: dict) -> dict:
        if self.server is None:
            response = self._post_in_process(path, payload)
        else:
            response = httpx.post(self.server.rstrip("/") + path, json=payload,
                                  timeout=600.0)
        return self._unwrap(response)

    def _post_in_process(self, path: str, payload: dict) -> httpx.Response:
        from .service import create_app

        async def go():
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://service.internal",
                                         timeout=None) as client:
                return await client.post(path, json=payload)

        return asyncio.run(go())

    @staticmethod
    def _unwrap(response: httpx.Response) -> dict:
        if response.status_code == 200:
            return response.json()
        try:
            detail = response.json().get("detail")
        except ValueError:
            detail = response.text
        message = f"{detail}" if isinstance(detail, str) else f"{detail!r}"
        if response.status_code in (400, 422):
            raise ConfigurationError(message)
        if response.status_code == 409:
            raise NearDefectiveResonanceError(message)
        raise NumericalFailureError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _meta(command: str, **params) -> dict:
    return {"command": command, "version": __version__, **params}


def _complex_grid(data: dict) -> np.ndarray:
    return np.array(data["values_re"]) + 1j * np.array(data["values_im"])


def _write_grid_files(outdir: str, stem: str, values: np.ndarray) -> dict:
    """Modulus and phase PGMs plus a full-precision q,p,re,im CSV.

    Returns the PGM scaling bounds so meta.json lets readers map gray
    levels back to numbers.
    """
    nq, npp = values.shape
    mod_bounds = write_pgm16(os.path.join(outdir, f"{stem}_modulus.pgm"), np.abs(values))
    phase_bounds = write_pgm16(os.path.join(outdir, f"{stem}_phase.pgm"), np.angle(values))
    q_cent = (np.arange(nq) + 0.5) / nq
    p_cent = (np.arange(npp) + 0.5) / npp
    rows = ((q_cent[a], p_cent[b], values[a, b].real, values[a, b].imag)
            for a in range(nq) for b in range(npp))
    write_csv(os.path.join(outdir, f"{stem}.csv"), ["q", "p", "re", "im"], rows)
    return {
        "modulus_scale": {"min": mod_bounds[0], "max": mod_bounds[1]},
        "phase_scale": {"min": phase_bounds[0], "max": phase_bounds[1]},
    }


def cmd_spectrum(args, client: ServiceClient) -> None:
    data = client.post("/api/spectrum", {
        "family": args.family, "N": args.N, "l": args.l,
        "closed": args.closed, "eps_null": args.eps_null})
    rows = [(r["index"], r["re"], r["im"], r["modulus"], r["gamma"], r["tau"],
             r["parity"], r["overlap_abs"]) for r in data["resonances"]]
    write_csv(os.path.join(args.out, "spectrum.csv"),
              ["index", "re", "im", "modulus", "gamma", "tau", "parity", "overlap_abs"],
              rows)
    write_json(os.path.join(args.out, "meta.json"),
               _meta("spectrum", family=args.family, N=args.N, l=args.l,
                     closed=args.closed, eps_null=args.eps_null,
                     nullDim=data["nullDim"], vCondition=data["vCondition"],
                     retained=len(rows)))


def cmd_husimi(args, client: ServiceClient) -> None:
    data = client.post("/api/husimi", {
        "family": args.family, "N": args.N, "l": args.l, "closed": args.closed,
        "index": args.index, "kind": args.kind,
        "grid_q": args.grid_q, "grid_p": args.grid_p})
    scales = _write_grid_files(args.out, "husimi", _complex_grid(data))
    write_json(os.path.join(args.out, "meta.json"),
               _meta("husimi", family=args.family, N=args.N, l=args.l,
                     closed=args.closed, index=args.index, kind=args.kind,
                     grid_q=args.grid_q, grid_p=args.grid_p,
                     lambda_re=data["meta"]["lambda_re"],
                     lambda_im=data["meta"]["lambda_im"], **scales))


def cmd_autocorr(args, client: ServiceClient) -> None:
    data = client.post("/api/autocorr", {
        "family": args.family, "N": args.N, "l": args.l, "closed": args.closed,
        "n": args.n, "grid_q": args.grid_q, "grid_p": args.grid_p})
    scales = _write_grid_files(args.out, "autocorr", _complex_grid(data))
    write_json(os.path.join(args.out, "meta.json"),
               _meta("autocorr", family=args.family, N=args.N, l=args.l,
                     closed=args.closed, n=args.n,
                     grid_q=args.grid_q, grid_p=args.grid_p, **scales))


def cmd_repeller(args, client: ServiceClient) -> None:
    data = client.post("/api/repeller", {
        "family": args.family, "t_back": args.t_back, "t_fwd": args.t_fwd,
        "l": args.l})
    write_json(os.path.join(args.out, "repeller.json"), data)
    write_json(os.path.join(args.out, "meta.json"),
               _meta("repeller", family=args.family, t_back=args.t_back,
                     t_fwd=args.t_fwd, l=args.l,
                     rectangles=len(data["rectangles"]),
                     areaFraction=data["areaFraction"]))


def cmd_tau(args, client: ServiceClient) -> None:
    data = client.post("/api/tau", {
        "N": args.N, "ls": args.ls, "eps_null": args.eps_null})
    rows = [(r["l"], r["index"], r["modulus"], r["tau"]) for r in data["rows"]]
    write_csv(os.path.join(args.out, "tau.csv"),
              ["l", "index", "modulus", "tau"], rows)
    write_json(os.path.join(args.out, "meta.json"),
               _meta("tau", N=args.N, ls=args.ls, eps_null=args.eps_null,
                     slopes=data["slopes"], fit_modulus=data["meta"]["fit_modulus"]))


def cmd_weyl(args, client: ServiceClient) -> None:
    data = client.post("/api/weyl", {
        "family": args.family, "Ns": args.Ns, "l": args.l,
        "closed": args.closed, "nu_c": args.nu_c})
    write_csv(os.path.join(args.out, "weyl.csv"), ["N", "count"],
              [(n, c) for n, c in data["points"]])
    write_json(os.path.join(args.out, "meta.json"),
               _meta("weyl", family=args.family, Ns=args.Ns, l=args.l,
                     closed=args.closed, nu_c=args.nu_c,
                     exponent=data["exponent"],
                     dimensionEstimate=data["dimensionEstimate"]))


def cmd_entropy(args, client: ServiceClient) -> None:
    data = client.post("/api/entropy", {"l": args.l})
    write_json(os.path.join(args.out, "entropy.json"),
               {"l": data["l"], "leadingEigenvalue": data["leadingEigenvalue"],
                "entropy": data["entropy"]})
    write_json(os.path.join(args.out, "meta.json"), _meta("entropy", l=args.l))


def cmd_escape(args, client: ServiceClient) -> None:
    data = client.post("/api/escape", {
        "family": args.family, "l": args.l, "samples": args.samples,
        "steps": args.steps, "seed": args.seed})
    write_json(os.path.join(args.out, "escape.json"),
               {"gamma": data["gamma"], "stderr": data["stderr"],
                "samples": data["samples"], "steps": data["steps"]})
    write_json(os.path.join(args.out, "meta.json"),
               _meta("escape", family=args.family, l=args.l,
                     samples=args.samples, steps=args.steps, seed=args.seed))


def cmd_serve(args, client: ServiceClient) -> None:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="openbaker",
        description="Resonance spectra, phase-space fields, and classical escape "
                    "statistics of open baker maps on the torus.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(sp):
        sp.add_argument("--out", default=".", help="output directory (default: .)")
        sp.add_argument("--server", default=None,
                        help="base URL of a running service; default computes in process")

    def map_flags(sp, family_required=True):
        sp.add_argument("--family", choices=["dyadic", "triadic"],
                        required=family_required,
                        default=None if family_required else "dyadic")
        sp.add_argument("--N", type=int, required=True, help="Hilbert dimension")
        sp.add_argument("--l", type=int, default=None,
                        help="opening depth (dyadic family only)")
        sp.add_argument("--closed", action="store_true", help="use the closed map")

    sp = sub.add_parser("spectrum", help="resonance eigenvalues and overlaps to CSV")
    map_flags(sp)
    sp.add_argument("--eps-null", type=float, default=1e-8, dest="eps_null",
                    help="modulus below which a mode counts as null (default 1e-8)")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("husimi", help="phase-space field of one resonance")
    map_flags(sp)
    sp.add_argument("--index", type=int, required=True, help="resonance index")
    sp.add_argument("--kind", choices=["right", "left", "h"], default="h")
    sp.add_argument("--grid-q", type=int, default=256, dest="grid_q")
    sp.add_argument("--grid-p", type=int, default=256, dest="grid_p")
    common(sp)
    sp.set_defaults(func=cmd_husimi)

    sp = sub.add_parser("autocorr", help="coherent-state autocorrelation of the n-th iterate")
    map_flags(sp)
    sp.add_argument("--n", type=int, required=True, help="iteration count")
    sp.add_argument("--grid-q", type=int, default=256, dest="grid_q")
    sp.add_argument("--grid-p", type=int, default=256, dest="grid_p")
    common(sp)
    sp.set_defaults(func=cmd_autocorr)

    sp = sub.add_parser("repeller", help="finite-time trapped-set rectangles to JSON")
    sp.add_argument("--family", choices=["dyadic", "triadic"], default="dyadic")
    sp.add_argument("--t-back", type=int, required=True, dest="t_back")
    sp.add_argument("--t-fwd", type=int, required=True, dest="t_fwd")
    sp.add_argument("--l", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_repeller)

    sp = sub.add_parser("tau", help="time-reversal weights and their modulus scaling")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--ls", type=_int_list, default=None,
                    help="comma-separated opening depths; omit for the closed map")
    sp.add_argument("--eps-null", type=float, default=1e-8, dest="eps_null")
    common(sp)
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("weyl", help="resonance counts against Hilbert dimension")
    sp.add_argument("--family", choices=["dyadic", "triadic"], default="dyadic")
    sp.add_argument("--Ns", type=_int_list, required=True,
                    help="comma-separated Hilbert dimensions (at least 3)")
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--closed", action="store_true")
    sp.add_argument("--nu-c", type=float, required=True, dest="nu_c",
                    help="modulus threshold in (0,1)")
    common(sp)
    sp.set_defaults(func=cmd_weyl)

    sp = sub.add_parser("entropy", help="topological entropy of the pruned subshift")
    sp.add_argument("--l", type=int, required=True, help="run limit (2..16)")
    common(sp)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("escape", help="Monte Carlo classical escape rate")
    sp.add_argument("--family", choices=["dyadic", "triadic"], required=True)
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True,
                    help="RNG seed; runs are reproducible bit for bit")
    common(sp)
    sp.set_defaults(func=cmd_escape)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(func=cmd_serve, out=".", server=None)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:        # argparse already printed the message
        return int(exc.code or 0)
    client = ServiceClient(args.server)
    try:
        args.func(args, client)
    except OpenBakerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except httpx.HTTPError as exc:
        print(f"error: could not reach service: {exc}", file=sys.stderr)
        return NumericalFailureError.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
