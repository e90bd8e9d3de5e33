"""Request/response models and handlers for every experiment.

This is the single compute surface: the FastAPI app exposes these handlers
over HTTP and the CLI drives them in-process (or remotely), so both front
doors produce identical, reproducible artifacts.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, Field

from . import ball_spectrum, geometry_iso, hadamard, rayleigh, selftest
from .errors import InvalidArgument
from .harmonics import sphere_area
from .radial_solver import concentration_experiment


# ---------------------------------------------------------------------------
# spectrum


class SpectrumRequest(BaseModel):
    dim: int = 2
    tau: float = 1.0
    count: int = Field(default=8, ge=1)


class SpectrumRow(BaseModel):
    index: int
    l: int
    lam: float
    multiplicity: int


class SpectrumResponse(BaseModel):
    rows: list[SpectrumRow]


def run_spectrum(req: SpectrumRequest) -> SpectrumResponse:
    params = ball_spectrum.ProblemParams(req.dim, req.tau)
    entries = ball_spectrum.enumerate_spectrum(params, req.count)
    rows = []
    index = 1
    for e in entries:
        rows.append(SpectrumRow(index=index, l=e.l, lam=e.lam, multiplicity=e.m))
        index += e.m
    return SpectrumResponse(rows=rows)


# ---------------------------------------------------------------------------
# radial mode samples


class ModesRequest(BaseModel):
    dim: int = 2
    tau: float = 1.0
    l: int = Field(default=2, ge=0)
    samples: int = Field(default=21, ge=2)
    max_derivative: int = Field(default=2, ge=0, le=3)


class ModesRow(BaseModel):
    r: float
    values: list[float]  # derivatives 0..max_derivative


class ModesResponse(BaseModel):
    l: int
    lam: float
    rows: list[ModesRow]


def run_modes(req: ModesRequest) -> ModesResponse:
    params = ball_spectrum.ProblemParams(req.dim, req.tau)
    lam = ball_spectrum.eigenvalue(params, req.l)
    rows = []
    for i in range(req.samples):
        r = i / (req.samples - 1)
        vals = [
            ball_spectrum.radial_profile(params, req.l, r, d)
            for d in range(req.max_derivative + 1)
        ]
        rows.append(ModesRow(r=r, values=vals))
    return ModesResponse(l=req.l, lam=lam, rows=rows)


# ---------------------------------------------------------------------------
# mass concentration


class ConcentrateRequest(BaseModel):
    l: int = Field(default=1, ge=0)
    dim: int = 2
    tau: float = 1.0
    mass: float | None = None  # None = auto = |boundary sphere|
    eps: list[float] = Field(default_factory=lambda: [0.08, 0.04, 0.02, 0.01])


class ConcentrateRow(BaseModel):
    eps: float
    lam: float
    target: float
    rel_error: float


class ConcentrateResponse(BaseModel):
    l: int
    mass: float
    rows: list[ConcentrateRow]


def run_concentrate(req: ConcentrateRequest) -> ConcentrateResponse:
    mass = req.mass if req.mass is not None else sphere_area(req.dim)
    rows = concentration_experiment(req.l, req.dim, req.tau, mass, tuple(req.eps))
    return ConcentrateResponse(
        l=req.l,
        mass=mass,
        rows=[
            ConcentrateRow(eps=r.eps, lam=r.lam, target=r.target, rel_error=r.rel_error)
            for r in rows
        ],
    )


# ---------------------------------------------------------------------------
# Rayleigh quotients


class RayleighRequest(BaseModel):
    experiment: str = "eigenmodes"  # 'eigenmodes' | 'annulus'
    dim: int = 2
    tau: float = 1.0
    max_l: int = Field(default=5, ge=0)
    inner_radii: list[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])


class RayleighRow(BaseModel):
    label: str
    l: int
    numerator: float
    denominator: float
    quotient: float
    reference: float


class RayleighResponse(BaseModel):
    rows: list[RayleighRow]


def run_rayleigh(req: RayleighRequest) -> RayleighResponse:
    rows: list[RayleighRow] = []
    if req.experiment == "eigenmodes":
        params = ball_spectrum.ProblemParams(req.dim, req.tau)
        for l in range(req.max_l + 1):
            prof = rayleigh.ball_mode_profile(params, l)
            rep = rayleigh.rayleigh_quotient(prof, l, req.dim, req.tau)
            rows.append(
                RayleighRow(
                    label=f"R_{l}Y_{l}", l=l, numerator=rep.numerator,
                    denominator=rep.denominator, quotient=rep.quotient,
                    reference=ball_spectrum.eigenvalue(params, l),
                )
            )
    elif req.experiment == "annulus":
        ball_value = float(ball_spectrum.tau0_eigenvalue(req.dim, 2))
        for a in req.inner_radii:
            aa, bb = rayleigh.equal_measure_annulus(a, req.dim)
            rep = rayleigh.annulus_trial_quotient(aa, bb, req.dim, tau=0.0)
            rows.append(
                RayleighRow(
                    label=f"annulus[{aa:g}..{bb:.6g}]", l=2,
                    numerator=rep.numerator, denominator=rep.denominator,
                    quotient=rep.quotient, reference=ball_value,
                )
            )
    else:
        raise InvalidArgument(f"unknown rayleigh experiment {req.experiment!r}")
    return RayleighResponse(rows=rows)


# ---------------------------------------------------------------------------
# isoperimetric reports


class IsoRequest(BaseModel):
    polygons: list[list[tuple[float, float]]]
    tau: float = 1.0


class IsoReportModel(BaseModel):
    area: float
    perimeter: float
    boundary_centroid: tuple[float, float]
    moment2: float
    asymmetry: float
    asymmetry_center: tuple[float, float]
    c_constant: float
    delta: float
    moment_lhs: float
    moment_rhs: float
    lambda2_upper_bound: float
    lambda2_ball: float
    quantitative_bound: float
    moment_inequality_holds: bool
    upper_bound_below_ball: bool
    quantitative_holds: bool


class IsoResponse(BaseModel):
    reports: list[IsoReportModel]
    all_hold: bool


def run_iso(req: IsoRequest) -> IsoResponse:
    reports = []
    for verts in req.polygons:
        poly = geometry_iso.PlanarPolygon.from_vertices(verts)
        rep = geometry_iso.isoperimetric_report(poly, req.tau)
        reports.append(
            IsoReportModel(
                area=rep.area, perimeter=rep.perimeter,
                boundary_centroid=rep.boundary_centroid, moment2=rep.moment2,
                asymmetry=rep.asymmetry, asymmetry_center=rep.asymmetry_center,
                c_constant=rep.c_constant, delta=rep.delta,
                moment_lhs=rep.moment_lhs, moment_rhs=rep.moment_rhs,
                lambda2_upper_bound=rep.lambda2_upper_bound,
                lambda2_ball=rep.lambda2_ball,
                quantitative_bound=rep.quantitative_bound,
                moment_inequality_holds=rep.moment_inequality_holds,
                upper_bound_below_ball=rep.upper_bound_below_ball,
                quantitative_holds=rep.quantitative_holds,
            )
        )
    all_hold = all(
        r.moment_inequality_holds and r.upper_bound_below_ball and r.quantitative_holds
        for r in reports
    )
    return IsoResponse(reports=reports, all_hold=all_hold)


# ---------------------------------------------------------------------------
# Hadamard derivatives


class HadamardRequest(BaseModel):
    problem: str = "steklov"  # 'steklov' | 'neumann'
    dim: int = 2
    tau: float = 1.0
    orders: list[int] = Field(default_factory=lambda: [1, 2, 3])
    s_values: list[int] = Field(default_factory=lambda: [1, 2])
    fd_step: float = 1e-4
    seed: int = 0


class HadamardRow(BaseModel):
    problem: str
    l: int
    s: int
    lam: float
    derivative: float
    scaling_oracle: float
    rel_difference: float
    criticality_deviation: float
    volume_preserving_derivative: float


class HadamardResponse(BaseModel):
    rows: list[HadamardRow]


def run_hadamard(req: HadamardRequest) -> HadamardResponse:
    rows = []
    for l in req.orders:
        for s in req.s_values:
            if s > hadamard.multiplicity(l, req.dim):
                continue
            if req.problem == "steklov":
                m = hadamard.steklov_multiplet(l, req.dim, req.tau, s=s)
            elif req.problem == "neumann":
                m = hadamard.neumann_multiplet(l, req.dim, req.tau, s=s)
            else:
                raise InvalidArgument(f"unknown problem {req.problem!r}")
            hd = hadamard.hadamard_derivative(m, hadamard.NormalSpeed.constant(1.0))
            so = hadamard.scaling_oracle(m, h=req.fd_step)
            dev = hadamard.criticality_check(m, seed=req.seed)
            vp = hadamard.hadamard_derivative(m, hadamard.NormalSpeed.cosine(2))
            rows.append(
                HadamardRow(
                    problem=req.problem, l=l, s=s, lam=m.lam, derivative=hd,
                    scaling_oracle=so,
                    rel_difference=abs(hd - so) / max(abs(so), 1e-300),
                    criticality_deviation=dev,
                    volume_preserving_derivative=vp,
                )
            )
    return HadamardResponse(rows=rows)


# ---------------------------------------------------------------------------
# selftest


class SelftestRequest(BaseModel):
    quick: bool = False


class SelftestRecord(BaseModel):
    name: str
    passed: bool
    detail: str


class SelftestResponse(BaseModel):
    records: list[SelftestRecord]
    all_passed: bool


def run_selftest(req: SelftestRequest) -> SelftestResponse:
    records = [
        SelftestRecord(name=name, passed=ok, detail=detail)
        for name, ok, detail in selftest.run_all(quick=req.quick)
    ]
    return SelftestResponse(records=records, all_passed=all(r.passed for r in records))


HANDLERS = {
    "spectrum": (SpectrumRequest, run_spectrum),
    "modes": (ModesRequest, run_modes),
    "concentrate": (ConcentrateRequest, run_concentrate),
    "rayleigh": (RayleighRequest, run_rayleigh),
    "iso": (IsoRequest, run_iso),
    "hadamard": (HadamardRequest, run_hadamard),
    "selftest": (SelftestRequest, run_selftest),
}
