"""FastAPI application exposing the solver package over HTTP.

All endpoints are stateless: each request carries its instance, so the
service can serve many clients concurrently. Run with::

    uvicorn cdvrp.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import CdvrpError, ResourceLimitError
from ..metric import FleetSpec, VehicleClass, random_instance, validate_instance
from ..oracle import OracleLimits, exact_min_tours, verify_solution
from ..solvers import (
    RoutedTour,
    RoutingSolution,
    balanced_paths_to_solution,
    reduce_dcvrp_to_bdcvrp,
    solve_bdcvrp,
    solve_min_nht,
    solve_min_nt,
)
from ..treetour import tour_from_seq
from .schemas import (
    GenerateRequest,
    HealthResponse,
    InstanceModel,
    OracleRequest,
    OracleResponse,
    PaddingModel,
    ReduceRequest,
    ReduceResponse,
    SolutionModel,
    SolveRequest,
    TourModel,
    ValidationResponse,
    VerifyRequest,
    VerifyResponse,
    VerifyViolationModel,
    ViolationModel,
)

app = FastAPI(
    title="cdvrp",
    description="Capacity- and distance-constrained vehicle routing as a service.",
    version="0.1.0",
)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=422, detail=str(exc))


def _solution_from_model(inst, model: SolutionModel) -> RoutingSolution:
    routed = tuple(
        RoutedTour(tour_from_seq(inst, tuple(t.sequence)), t.class_id)
        for t in model.tours
    )
    return RoutingSolution(tours=routed, alpha=model.alpha, meta=dict(model.meta))


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok")


@app.post("/validate", response_model=ValidationResponse)
def validate(instance: InstanceModel) -> ValidationResponse:
    try:
        report = validate_instance(instance.to_instance())
    except ValueError as exc:
        raise _bad_request(exc)
    return ValidationResponse(
        ok=report.ok,
        violations=[
            ViolationModel(kind=v.kind, where=list(v.where), magnitude=v.magnitude)
            for v in report.violations
        ],
    )


@app.post("/solve", response_model=SolutionModel)
def solve(req: SolveRequest) -> SolutionModel:
    try:
        inst = req.instance.to_instance()
        if req.algorithm == "min-nt":
            sol = solve_min_nt(inst)
        elif req.algorithm == "min-nht":
            if req.path_budget is None:
                raise HTTPException(
                    status_code=422, detail="algorithm min-nht requires path_budget"
                )
            sol = balanced_paths_to_solution(
                inst, solve_min_nht(inst, req.path_budget, pad=req.pad)
            )
        else:
            sol = solve_bdcvrp(inst, req.alpha_target)
    except (CdvrpError, ValueError) as exc:
        raise _bad_request(exc)
    return SolutionModel.from_solution(sol)


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    try:
        inst = req.instance.to_instance()
        sol = _solution_from_model(inst, req.solution)
        report = verify_solution(inst, sol, alpha_target=req.alpha_target)
    except (CdvrpError, ValueError) as exc:
        raise _bad_request(exc)
    return VerifyResponse(
        ok=report.ok,
        violations=[
            VerifyViolationModel(
                tour=v.tour, kind=v.kind, magnitude=v.magnitude, note=v.note
            )
            for v in report.violations
        ],
    )


@app.post("/oracle", response_model=OracleResponse)
def oracle(req: OracleRequest) -> OracleResponse:
    try:
        inst = req.instance.to_instance()
        sol = exact_min_tours(inst, OracleLimits(max_n=req.max_n))
    except ResourceLimitError as exc:
        raise HTTPException(status_code=413, detail=str(exc))
    except (CdvrpError, ValueError) as exc:
        raise _bad_request(exc)
    if sol is None:
        return OracleResponse(feasible=False)
    return OracleResponse(feasible=True, solution=SolutionModel.from_solution(sol))


@app.post("/generate", response_model=InstanceModel)
def generate(req: GenerateRequest) -> InstanceModel:
    try:
        fleet = FleetSpec(
            tuple(
                VehicleClass(c.capacity, c.distance_bound, c.multiplicity)
                for c in req.fleet
            )
        )
        inst = random_instance(
            n=req.n,
            seed=req.seed,
            box=req.box,
            demand_range=(req.demand_min, req.demand_max),
            fleet=fleet,
        )
    except (CdvrpError, ValueError) as exc:
        raise _bad_request(exc)
    return InstanceModel.from_instance(inst)


@app.post("/reduce", response_model=ReduceResponse)
def reduce(req: ReduceRequest) -> ReduceResponse:
    try:
        inst = req.instance.to_instance()
        sol = _solution_from_model(inst, req.solution)
        gadget = reduce_dcvrp_to_bdcvrp(
            inst, [rt.tour for rt in sol.tours], req.alpha_target
        )
    except (CdvrpError, ValueError) as exc:
        raise _bad_request(exc)
    return ReduceResponse(
        instance=InstanceModel.from_instance(gadget.instance),
        padded_tours=[
            TourModel(class_id=0, sequence=list(t.seq), length=t.length, load=t.load)
            for t in gadget.padded_tours
        ],
        padding=[
            PaddingModel(
                tour_index=r.tour_index,
                vertices=list(r.vertices),
                spacings=list(r.spacings),
                return_edge=r.return_edge,
            )
            for r in gadget.padding
        ],
        max_length=max(t.length for t in gadget.padded_tours),
    )


def main() -> None:
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)


if __name__ == "__main__":
    main()
