"""HTTP facade over the library.

Every computation the CLI offers is an endpoint here, so results can be
served remotely or consumed in process through an ASGI transport. Errors
raised by the library surface as JSON with the status code matching the
error class: 400 for bad configuration, 409 for a refused near-defective
resonance, 500 for numerical failures.
"""

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..classical import escape_rate_mc, finite_time_repeller, transition_matrix
from ..errors import (EXIT_CONFIG, EXIT_NEAR_DEFECTIVE, ConfigurationError,
                      OpenBakerError)
from ..phasespace import autocorrelation, h_distribution, husimi
from ..quantization import OpeningSpec, QuantumMap, TorusHilbert, baker_closed, baker_open
from ..spectral import resonance_set, weyl_count, weyl_fit
from . import schemas

TAU_FIT_MODULUS = 0.3        # slope of ln tau vs ln |lambda| fitted above this

_STATUS = {EXIT_CONFIG: 400, EXIT_NEAR_DEFECTIVE: 409}


def _build_map(family: str, N: int, l, closed: bool) -> QuantumMap:
    hilbert = TorusHilbert(N)
    if closed:
        if l is not None:
            raise ConfigurationError("closed maps take no opening depth")
        return baker_closed(hilbert, family)
    if family == "dyadic" and l is None:
        raise ConfigurationError("dyadic open map needs an opening depth l")
    spec = OpeningSpec(family=family, l=l if family == "dyadic" else None)
    return baker_open(hilbert, spec)


def _grid_response(values: np.ndarray, meta: dict) -> schemas.GridResponse:
    values = np.asarray(values, dtype=complex)
    return schemas.GridResponse(
        grid_q=values.shape[0], grid_p=values.shape[1],
        values_re=values.real.tolist(), values_im=values.imag.tolist(),
        meta=meta)


def create_app() -> FastAPI:
    app = FastAPI(title="openbaker", version=__version__)

    @app.exception_handler(OpenBakerError)
    async def _library_error(request, exc: OpenBakerError):
        return JSONResponse(status_code=_STATUS.get(exc.exit_code, 500),
                            content={"detail": str(exc)})

    @app.get("/api/version")
    def version():
        return {"version": __version__}

    @app.post("/api/spectrum", response_model=schemas.SpectrumResponse)
    def spectrum(req: schemas.SpectrumRequest):
        rset = resonance_set(req.family, req.N, l=req.l, closed=req.closed,
                             eps_null=req.eps_null)
        rows = [schemas.ResonanceRow(
            index=r.index, re=r.lam.real, im=r.lam.imag, modulus=r.modulus,
            gamma=r.gamma, tau=r.tau, parity=r.parity, overlap_abs=abs(r.overlap))
            for r in rset.resonances]
        meta = {"family": req.family, "N": req.N, "l": req.l, "closed": req.closed,
                "eps_null": req.eps_null, "nullDim": rset.nullDim,
                "vCondition": rset.vCondition, "version": __version__}
        return schemas.SpectrumResponse(resonances=rows, nullDim=rset.nullDim,
                                        vCondition=rset.vCondition, meta=meta)

    @app.post("/api/husimi", response_model=schemas.GridResponse)
    def husimi_endpoint(req: schemas.HusimiRequest):
        rset = resonance_set(req.family, req.N, l=req.l, closed=req.closed)
        if not 0 <= req.index < len(rset):
            raise ConfigurationError(
                f"resonance index {req.index} outside [0, {len(rset)})")
        r = rset[req.index]
        hilbert = TorusHilbert(req.N)
        grid = (req.grid_q, req.grid_p)
        if req.kind == "right":
            pg = husimi(hilbert, r.psiR, grid, kind="husimiR")
        elif req.kind == "left":
            pg = husimi(hilbert, r.psiL, grid, kind="husimiL")
        else:
            pg = h_distribution(r, hilbert, grid)
        meta = {"family": req.family, "N": req.N, "l": req.l, "closed": req.closed,
                "index": req.index, "kind": req.kind,
                "lambda_re": r.lam.real, "lambda_im": r.lam.imag,
                "modulus": r.modulus, "version": __version__}
        return _grid_response(pg.values, meta)

    @app.post("/api/autocorr", response_model=schemas.GridResponse)
    def autocorr(req: schemas.AutocorrRequest):
        qmap = _build_map(req.family, req.N, req.l, req.closed)
        pg = autocorrelation(qmap, req.n, (req.grid_q, req.grid_p))
        meta = {"family": req.family, "N": req.N, "l": req.l, "closed": req.closed,
                "n": req.n, "version": __version__}
        return _grid_response(pg.values, meta)

    @app.post("/api/repeller", response_model=schemas.RepellerResponse)
    def repeller(req: schemas.RepellerRequest):
        rep = finite_time_repeller(req.t_back, req.t_fwd, l=req.l, family=req.family)
        rects = [schemas.Rectangle(q_lo=a, q_hi=b, p_lo=c, p_hi=d)
                 for a, b, c, d in rep.rectangles]
        return schemas.RepellerResponse(tBack=rep.tBack, tFwd=rep.tFwd,
                                        family=rep.family, l=rep.l,
                                        rectangles=rects,
                                        areaFraction=rep.areaFraction)

    @app.post("/api/tau", response_model=schemas.TauResponse)
    def tau(req: schemas.TauRequest):
        rows = []
        slopes = {}
        if req.ls:
            for l in req.ls:
                rset = resonance_set("dyadic", req.N, l=l, eps_null=req.eps_null)
                rows.extend(schemas.TauRow(l=l, index=r.index, modulus=r.modulus,
                                           tau=r.tau) for r in rset.resonances)
                sel = [(r.modulus, r.tau) for r in rset.resonances
                       if r.modulus > TAU_FIT_MODULUS and r.tau > 0.0]
                if len(sel) >= 2:
                    logm = np.log([m for m, _ in sel])
                    logt = np.log([t for _, t in sel])
                    slopes[str(l)] = float(np.polyfit(logm, logt, 1)[0])
        else:
            rset = resonance_set("dyadic", req.N, closed=True, eps_null=req.eps_null)
            rows.extend(schemas.TauRow(l=0, index=r.index, modulus=r.modulus,
                                       tau=r.tau) for r in rset.resonances)
        meta = {"N": req.N, "ls": req.ls, "eps_null": req.eps_null,
                "fit_modulus": TAU_FIT_MODULUS, "version": __version__}
        return schemas.TauResponse(rows=rows, slopes=slopes, meta=meta)

    @app.post("/api/weyl", response_model=schemas.WeylResponse)
    def weyl(req: schemas.WeylRequest):
        pts = []
        for N in req.Ns:
            rset = resonance_set(req.family, N, l=req.l, closed=req.closed)
            pts.append((N, weyl_count(rset, req.nu_c)))
        fit = weyl_fit(pts, req.nu_c)
        return schemas.WeylResponse(points=fit.points, exponent=fit.exponent,
                                    dimensionEstimate=fit.dimensionEstimate,
                                    nu_c=req.nu_c)

    @app.post("/api/entropy", response_model=schemas.EntropyResponse)
    def entropy(req: schemas.EntropyRequest):
        system = transition_matrix(req.l)
        return schemas.EntropyResponse(l=req.l,
                                       leadingEigenvalue=system.leadingEigenvalue,
                                       entropy=system.entropy)

    @app.post("/api/escape", response_model=schemas.EscapeResponse)
    def escape(req: schemas.EscapeRequest):
        est = escape_rate_mc(req.family, req.samples, req.steps, req.seed, l=req.l)
        return schemas.EscapeResponse(gamma=est.gamma, stderr=est.stderr,
                                      samples=est.samples, steps=est.steps)

    return app
