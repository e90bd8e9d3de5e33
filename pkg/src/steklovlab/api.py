"""FastAPI service exposing every experiment as a POST endpoint.

Run with `steklovlab serve` or `uvicorn steklovlab.api:app`.
"""

import functools

from fastapi import FastAPI, HTTPException

from . import __version__, service
from .errors import InvalidArgument, InvalidPolygon, SteklovLabError

app = FastAPI(
    title="steklovlab",
    version=__version__,
    description="Biharmonic Steklov plate eigenvalue laboratory",
)


def _guarded(handler):
    @functools.wraps(handler)
    def run(req):
        try:
            return handler(req)
        except (InvalidArgument, InvalidPolygon) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except SteklovLabError as exc:
            raise HTTPException(
                status_code=500,
                detail={"error": type(exc).__name__, "message": str(exc)},
            ) from exc

    return run


@app.get("/v1/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/v1/spectrum", response_model=service.SpectrumResponse)
def spectrum(req: service.SpectrumRequest):
    return _guarded(service.run_spectrum)(req)


@app.post("/v1/modes", response_model=service.ModesResponse)
def modes(req: service.ModesRequest):
    return _guarded(service.run_modes)(req)


@app.post("/v1/concentrate", response_model=service.ConcentrateResponse)
def concentrate(req: service.ConcentrateRequest):
    return _guarded(service.run_concentrate)(req)


@app.post("/v1/rayleigh", response_model=service.RayleighResponse)
def rayleigh(req: service.RayleighRequest):
    return _guarded(service.run_rayleigh)(req)


@app.post("/v1/iso", response_model=service.IsoResponse)
def iso(req: service.IsoRequest):
    return _guarded(service.run_iso)(req)


@app.post("/v1/hadamard", response_model=service.HadamardResponse)
def hadamard(req: service.HadamardRequest):
    return _guarded(service.run_hadamard)(req)


@app.post("/v1/selftest", response_model=service.SelftestResponse)
def selftest(req: service.SelftestRequest):
    return _guarded(service.run_selftest)(req)
