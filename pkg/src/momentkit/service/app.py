"""HTTP face of the toolkit: one POST route per analysis.

Core exceptions map to status codes by category: input-contract violations
become 400, numerical failures become 500, both with a JSON body
{"error": <class>, "message": <str>, "category": <input|numerical>} so that
clients can relay the diagnostic without parsing prose.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..charfn import bochner_test, char_eval, radius_estimate
from ..density import moments_from_density
from ..errors import MomentError, SchemaError
from ..hausdorff import abs_cont_test, cr_test, signed_hausdorff_test, verify_mirror_decomposition
from ..recon import gaussian_test_mass, levy_interval_mass, nonnegativity_check, reconstruct_density
from ..richter import (DiracFamily, TruncatedFunctional, atomic_decompose, basis_from_spec,
                       emit_density, smooth_representation)
from ..sequence import derivative_seq
from ..seqio import density_from_dict, parse_density_arg, sequence_from_dict, sequence_to_dict
from . import schemas as sc


def _sequence(model: sc.SequenceModel):
    return sequence_from_dict(model.as_document())


def _sign_vector(key: str, dimension: int):
    if len(key) != dimension or any(ch not in "+-" for ch in key):
        raise SchemaError(f"component key {key!r} must be {dimension} chars of '+'/'-'")
    return tuple(1 if ch == "+" else -1 for ch in key)


def _functional(model: sc.FunctionalModel) -> TruncatedFunctional:
    basis = basis_from_spec([e.model_dump(exclude_none=True) for e in model.basis])
    values = tuple(float(Fraction(v)) if isinstance(v, str) else float(v)
                   for v in model.values)
    return TruncatedFunctional(basis, values, (model.domain[0], model.domain[1]))


def create_app() -> FastAPI:
    app = FastAPI(title="momentkit", version="0.1.0")

    @app.exception_handler(MomentError)
    async def moment_error(_: Request, exc: MomentError):
        status = 400 if exc.category == "input" else 500
        return JSONResponse(status_code=status, content={
            "error": type(exc).__name__, "message": str(exc), "category": exc.category})

    @app.exception_handler(ValueError)
    async def value_error(_: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={
            "error": "ValueError", "message": str(exc), "category": "input"})

    @app.post("/moments", response_model=sc.SequenceModel, response_model_exclude_none=True)
    def moments(req: sc.MomentsRequest):
        spec = parse_density_arg(req.density) if isinstance(req.density, str) \
            else density_from_dict(req.density)
        s = moments_from_density(spec, req.max_degree, exact=req.exact)
        return sequence_to_dict(s)

    @app.post("/dseq", response_model=sc.SequenceModel, response_model_exclude_none=True)
    def dseq(req: sc.DseqRequest):
        s = _sequence(req.sequence)
        beta = (req.beta,) * s.dimension if isinstance(req.beta, int) and s.dimension == 1 \
            else tuple(req.beta) if not isinstance(req.beta, int) else (req.beta,)
        return sequence_to_dict(derivative_seq(s, beta))

    @app.post("/hausdorff", response_model=sc.HausdorffReportModel, response_model_exclude_none=True)
    def hausdorff(req: sc.HausdorffRequest):
        return signed_hausdorff_test(_sequence(req.sequence), req.d_max).as_dict()

    @app.post("/abscont", response_model=sc.LadderVerdictModel, response_model_exclude_none=True)
    def abscont(req: sc.AbsContRequest):
        return abs_cont_test(_sequence(req.sequence), req.d_max).as_dict()

    @app.post("/cr-test", response_model=sc.LadderVerdictModel, response_model_exclude_none=True)
    def cr(req: sc.CrTestRequest):
        return cr_test(_sequence(req.sequence), req.r, req.d_max).as_dict()

    @app.post("/mirror-verify", response_model=sc.MirrorVerifyModel, response_model_exclude_none=True)
    def mirror_verify(req: sc.MirrorVerifyRequest):
        s = _sequence(req.sequence)
        comps = {_sign_vector(key, s.dimension): _sequence(model)
                 for key, model in req.components.items()}
        v = verify_mirror_decomposition(comps, s, req.r, req.d_max, req.defect_tol)
        return v.as_dict()

    @app.post("/charfn", response_model=sc.CharfnResponse, response_model_exclude_none=True)
    def charfn(req: sc.CharfnRequest):
        s = _sequence(req.sequence)
        out = []
        for p in req.points:
            z = (float(p),) if not isinstance(p, list) else tuple(float(t) for t in p)
            r = char_eval(s, z, tol=req.tol, backend=req.backend, adaptive=req.adaptive)
            out.append({"z": list(z), "re": r.value.real, "im": r.value.imag,
                        "cancellation": r.cancellation, "degree_used": r.degree_used,
                        "converged": r.converged, "backend": r.backend,
                        "reliable": r.reliable})
        return {"values": out, "tol": req.tol}

    @app.post("/radius", response_model=sc.RadiusModel, response_model_exclude_none=True)
    def radius(req: sc.RadiusRequest):
        if req.k_max < req.k_min:
            raise SchemaError("k_max must be >= k_min")
        r = radius_estimate(_sequence(req.sequence), range(req.k_min, req.k_max + 1))
        return r.as_dict()

    @app.post("/bochner", response_model=sc.BochnerModel, response_model_exclude_none=True)
    def bochner(req: sc.BochnerRequest):
        s = _sequence(req.sequence)
        if req.points is not None:
            pts = [(float(p),) if not isinstance(p, list) else tuple(float(t) for t in p)
                   for p in req.points]
        elif req.random_count is not None:
            rng = np.random.default_rng(req.seed)
            arr = rng.uniform(req.box[0], req.box[1], (req.random_count, s.dimension))
            pts = [tuple(row) for row in arr]
        else:
            raise SchemaError("bochner needs either points or random_count")
        rep = bochner_test(s, pts, tol=req.tol, series_tol=req.series_tol, rescale=req.rescale)
        doc = rep.as_dict()
        doc["seed"] = req.seed
        return doc

    @app.post("/reconstruct", response_model=sc.ReconstructionModel, response_model_exclude_none=True)
    def reconstruct(req: sc.ReconstructRequest):
        s = _sequence(req.sequence)
        if (req.grid is None) == (req.grid_spec is None):
            raise SchemaError("provide exactly one of grid or grid_spec")
        if req.grid is not None:
            grid = [tuple(float(t) for t in p) if isinstance(p, list) else float(p)
                    for p in req.grid]
        else:
            gs = req.grid_spec
            count = int(round((gs.stop - gs.start) / gs.step)) + 1
            if count < 1 or count > 100_000:
                raise SchemaError("grid_spec produces an empty or oversized grid")
            grid = [round(gs.start + i * gs.step, 12) for i in range(count)]
        r = reconstruct_density(s, grid, req.R, tol=req.tol, damping=req.damping)
        doc = r.as_dict()
        if req.nonneg_tol is not None:
            doc["nonnegativity"] = nonnegativity_check(r, req.nonneg_tol).as_dict()
        return doc

    @app.post("/levy", response_model=sc.LevyModel, response_model_exclude_none=True)
    def levy(req: sc.LevyRequest):
        return levy_interval_mass(_sequence(req.sequence), req.a, req.b, req.T, tol=req.tol)

    @app.post("/smooth-mass", response_model=sc.SmoothMassModel, response_model_exclude_none=True)
    def smooth_mass(req: sc.SmoothMassRequest):
        x0 = req.x0 if isinstance(req.x0, list) else [req.x0]
        return gaussian_test_mass(_sequence(req.sequence), x0, req.sigma, req.R, tol=req.tol)

    @app.post("/richter", response_model=sc.AtomicModel, response_model_exclude_none=True)
    def richter(req: sc.RichterRequest):
        L = _functional(req.functional)
        rep = atomic_decompose(L, candidate_grid=req.candidate_grid, tol=req.tol,
                               grid_points=req.grid_points)
        return rep.as_dict()

    @app.post("/smooth", response_model=sc.SmoothedModel, response_model_exclude_none=True)
    def smooth(req: sc.SmoothRequest):
        L = _functional(req.functional)
        atomic = atomic_decompose(L, tol=req.atomic_tol, grid_points=req.grid_points)
        family = DiracFamily(req.family, tuple(req.sigmas))
        rep = smooth_representation(atomic, L, family, tol=req.tol)
        doc = rep.as_dict()
        doc["atomic"] = atomic.as_dict()
        if req.density_grid is not None:
            doc["density"] = {"grid": list(req.density_grid),
                              "values": emit_density(rep, req.density_grid)}
        return doc

    return app


app = create_app()
