"""
FastAPI application exposing the toolkit's verifiers and evaluators.
"""
import logging
from typing import Any, Dict, List, Optional

# Load environment variables at the very beginning
from dotenv import load_dotenv

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .bethe import eigenvalue_profile, energy, solve_bae
from .boundary import Family, verify_dual_reflection, verify_reflection
from .chain import ChainContext, spectrum
from .classify import classify_diagonal
from .cli import boundary_from_arg, parse_complex
from .config import settings
from .errors import ToolkitError
from .grading import parse_algebra
from .reports import ResultReport
from .rmatrix import verify_crossing_unitarity, verify_ybe
from .scattering import AmplitudeSpec, bulk_summary, cross_check, scatter_summary
from .thermo import KernelContext, kernel_summary

load_dotenv()

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

# Initialize the FastAPI app
app = FastAPI(title="Yangian Boundary Toolkit API")

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Pydantic models for requests
class AlgebraRequest(BaseModel):
    algebra: str = Field(..., example="so:4")


class YbeRequest(AlgebraRequest):
    mutate: bool = False


class ReflectionRequest(AlgebraRequest):
    boundary: str = Field("I", example='{"family": "D1", "params": {"c": "1/2"}}')
    dual: bool = False


class SpectrumRequest(AlgebraRequest):
    sites: int = Field(..., ge=1)
    boundary: Optional[str] = None
    lambdas: Optional[List[str]] = None


class BetheRequest(AlgebraRequest):
    sites: int = Field(..., ge=1)
    boundary: Optional[str] = None
    occupations: Dict[str, int] = Field(default_factory=dict)
    seeds: int = 12


class ThermoRequest(AlgebraRequest):
    boundary: Optional[str] = None
    holes: Optional[Dict[str, List[float]]] = None
    omega: float = 0.5


class BulkRequest(BaseModel):
    series: str = Field(..., example="so")
    n: int
    lam: float = 0.5


class BoundaryAmplitudeRequest(BaseModel):
    series: str = Field(..., example="so")
    n: int
    family: str = "I"
    xi: Dict[str, float] = Field(default_factory=dict)
    m: Optional[int] = None
    lam: float = 0.5
    integral: bool = False
    cross_check: bool = False
    part: str = "k1"


def _run(name: str, fn):
    """Run one request, mapping ill-posed input to 400 and everything else to 500."""
    try:
        logger.info(f"Received {name} request")
        return fn()
    except ToolkitError as e:
        logger.error(f"Rejected {name} request: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Error processing {name} request: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/verify/ybe")
def verify_ybe_endpoint(request: YbeRequest) -> Dict[str, Any]:
    return _run("ybe", lambda: verify_ybe(parse_algebra(request.algebra), mutate=request.mutate).to_dict())


@app.post("/verify/crossing")
def verify_crossing_endpoint(request: AlgebraRequest) -> Dict[str, Any]:
    return _run("crossing", lambda: verify_crossing_unitarity(parse_algebra(request.algebra)).to_dict())


@app.post("/verify/reflection")
def verify_reflection_endpoint(request: ReflectionRequest) -> Dict[str, Any]:
    def go():
        k = boundary_from_arg(parse_algebra(request.algebra), request.boundary)
        return (verify_dual_reflection(k) if request.dual else verify_reflection(k)).to_dict()

    return _run("reflection", go)


@app.post("/classify")
def classify_endpoint(request: AlgebraRequest) -> Dict[str, Any]:
    def go():
        spec = parse_algebra(request.algebra)
        return ResultReport(kind="classify-diagonal", algebra=spec.descriptor,
                            payload=classify_diagonal(spec).to_dict()).to_dict()

    return _run("classify", go)


@app.post("/spectrum")
def spectrum_endpoint(request: SpectrumRequest) -> Dict[str, Any]:
    def go():
        spec = parse_algebra(request.algebra)
        ctx = ChainContext(spec, request.sites, boundary_from_arg(spec, request.boundary),
                           mem_budget_bytes=int(settings.mem_budget_mb * 1024 * 1024))
        lambdas = [parse_complex(x) for x in request.lambdas] if request.lambdas else None
        record = spectrum(ctx, lambdas)
        return ResultReport(kind="spectrum", algebra=spec.descriptor, passed=not record.unconverged(),
                            payload=record.to_dict()).to_dict()

    return _run("spectrum", go)


@app.post("/bethe/solve")
def bethe_endpoint(request: BetheRequest) -> Dict[str, Any]:
    def go():
        spec = parse_algebra(request.algebra)
        states = solve_bae(spec, request.sites, request.occupations, boundary_from_arg(spec, request.boundary),
                           seed_count=request.seeds)
        out = []
        for state in states:
            item = state.to_dict()
            item["eigenvalues"] = [[z.real, z.imag] for z in eigenvalue_profile(state)]
            item["energy"] = energy(state)
            out.append(item)
        return ResultReport(kind="bethe-solve", algebra=spec.descriptor, passed=bool(states),
                            payload={"sites": request.sites, "states": out}).to_dict()

    return _run("bethe", go)


@app.post("/thermo/kernels")
def thermo_endpoint(request: ThermoRequest) -> Dict[str, Any]:
    def go():
        spec = parse_algebra(request.algebra)
        ctx = KernelContext.for_algebra(spec, boundary_from_arg(spec, request.boundary), request.holes)
        return ResultReport(kind="thermo-kernels", algebra=spec.descriptor,
                            payload=kernel_summary(ctx, request.omega)).to_dict()

    return _run("thermo", go)


@app.post("/scatter/bulk")
def scatter_bulk_endpoint(request: BulkRequest) -> Dict[str, Any]:
    def go():
        payload = bulk_summary(request.series, request.n, request.lam)
        return ResultReport(kind="scatter-bulk", algebra=f"{request.series}:{request.n}",
                            passed=payload["unitarity"] < 1e-8, payload=payload).to_dict()

    return _run("scatter bulk", go)


@app.post("/scatter/boundary")
def scatter_boundary_endpoint(request: BoundaryAmplitudeRequest) -> Dict[str, Any]:
    def go():
        aspec = AmplitudeSpec(request.series, request.n, Family(request.family.upper()), request.xi,
                              request.m, request.lam)
        payload = scatter_summary(aspec, integral=request.integral)
        passed = True
        if request.cross_check:
            check = cross_check(aspec, part=request.part)
            payload["cross_check"] = check.to_dict()
            passed = check.passed
        return ResultReport(kind="scatter-boundary", algebra=f"{aspec.series}:{aspec.n}", passed=passed,
                            payload=payload).to_dict()

    return _run("scatter boundary", go)


@app.get("/health")
async def health_check():
    """
    Health check endpoint.
    """
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host=settings.api_host, port=settings.api_port)
