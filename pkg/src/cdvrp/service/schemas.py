"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..metric import FleetSpec, MetricInstance, VehicleClass, euclidean_instance
from ..solvers import RoutingSolution


class VehicleClassModel(BaseModel):
    capacity: float
    distance_bound: float
    multiplicity: Optional[int] = None


class InstanceModel(BaseModel):
    """An instance as either a full distance matrix or 2D coordinates (depot first)."""

    name: str = "unnamed"
    fleet: list[VehicleClassModel]
    demands: list[float]
    dist: Optional[list[list[float]]] = None
    coords: Optional[list[tuple[float, float]]] = None

    @model_validator(mode="after")
    def _one_geometry(self):
        if (self.dist is None) == (self.coords is None):
            raise ValueError("provide exactly one of 'dist' or 'coords'")
        return self

    def to_instance(self) -> MetricInstance:
        fleet = FleetSpec(
            tuple(
                VehicleClass(c.capacity, c.distance_bound, c.multiplicity)
                for c in self.fleet
            )
        )
        if self.coords is not None:
            return euclidean_instance(self.coords, self.demands, fleet, name=self.name)
        return MetricInstance(
            dist=self.dist, demand=self.demands, fleet=fleet, name=self.name
        )

    @classmethod
    def from_instance(cls, inst: MetricInstance) -> "InstanceModel":
        return cls(
            name=inst.name,
            fleet=[
                VehicleClassModel(
                    capacity=c.capacity,
                    distance_bound=c.distance_bound,
                    multiplicity=c.multiplicity,
                )
                for c in inst.fleet.classes
            ],
            demands=[float(q) for q in inst.demand],
            dist=[[float(x) for x in row] for row in inst.dist],
        )


class ViolationModel(BaseModel):
    kind: str
    where: list[int]
    magnitude: float


class ValidationResponse(BaseModel):
    ok: bool
    violations: list[ViolationModel]


class TourModel(BaseModel):
    class_id: int
    sequence: list[int]
    length: float
    load: float


class SolutionModel(BaseModel):
    algorithm: str
    parameters: dict
    tours: list[TourModel]
    pi: int
    alpha: float
    meta: dict

    @classmethod
    def from_solution(cls, sol: RoutingSolution) -> "SolutionModel":
        meta = dict(sol.meta)
        return cls(
            algorithm=meta.pop("algorithm", "unknown"),
            parameters=meta.pop("parameters", {}),
            tours=[
                TourModel(
                    class_id=class_id,
                    sequence=list(tour.seq),
                    length=tour.length,
                    load=tour.load,
                )
                for tour, class_id in sol.tours
            ],
            pi=sol.pi,
            alpha=sol.alpha,
            meta=meta,
        )


class SolveRequest(BaseModel):
    instance: InstanceModel
    algorithm: Literal["min-nt", "min-nht", "bdcvrp"]
    path_budget: Optional[float] = Field(
        default=None, description="path length budget (min-nht only)"
    )
    alpha_target: float = Field(default=0.5, gt=0, lt=1)
    pad: bool = False


class VerifyRequest(BaseModel):
    instance: InstanceModel
    solution: SolutionModel
    alpha_target: Optional[float] = None


class VerifyViolationModel(BaseModel):
    tour: int
    kind: str
    magnitude: float
    note: str


class VerifyResponse(BaseModel):
    ok: bool
    violations: list[VerifyViolationModel]


class OracleRequest(BaseModel):
    instance: InstanceModel
    max_n: int = Field(default=7, ge=1)


class OracleResponse(BaseModel):
    feasible: bool
    solution: Optional[SolutionModel] = None


class GenerateRequest(BaseModel):
    n: int = Field(ge=1)
    seed: int
    box: float = Field(default=1.0, gt=0)
    demand_min: float = Field(default=1.0, ge=0)
    demand_max: float = Field(default=1.0, ge=0)
    fleet: list[VehicleClassModel]


class ReduceRequest(BaseModel):
    instance: InstanceModel
    solution: SolutionModel
    alpha_target: float = Field(gt=0, lt=1)


class PaddingModel(BaseModel):
    tour_index: int
    vertices: list[int]
    spacings: list[float]
    return_edge: float


class ReduceResponse(BaseModel):
    instance: InstanceModel
    padded_tours: list[TourModel]
    padding: list[PaddingModel]
    max_length: float


class HealthResponse(BaseModel):
    status: str
