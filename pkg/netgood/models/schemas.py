"""
Pydantic Schemas
Game documents read by the CLI and the report documents it writes
"""
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from netgood.models.game import (
    BenefitFamily,
    BenefitFunction,
    CoalitionPartition,
    DependenceMatrix,
    EffortProfile,
    FAMILY_PARAMS,
    GameSpec,
    WelfareWeights,
)


# ============================================================================
# Game document
# ============================================================================

class BenefitSpec(BaseModel):
    """Benefit family and its parameters"""
    family: BenefitFamily
    params: Dict[str, float] = Field(default_factory=dict)

    @field_validator("family", mode="before")
    @classmethod
    def normalize_family(cls, v: Any) -> Any:
        return v.lower() if isinstance(v, str) else v

    @field_validator("params")
    @classmethod
    def validate_params(cls, v: Dict[str, float]) -> Dict[str, float]:
        for key, value in v.items():
            if not value > 0:
                raise ValueError(f"benefit parameter {key!r} must be positive")
        return v

    @model_validator(mode="after")
    def validate_param_keys(self) -> "BenefitSpec":
        allowed = FAMILY_PARAMS[self.family]
        unknown = sorted(set(self.params) - set(allowed))
        if unknown:
            raise ValueError(
                f"{self.family.value} benefit takes {list(allowed)}, got {unknown}")
        return self

    def build(self) -> BenefitFunction:
        return BenefitFunction.from_spec(self.family.value, self.params)


class EdgeSpec(BaseModel):
    """One weighted arc: agent `from` depends on agent `to` with this weight"""
    model_config = ConfigDict(populate_by_name=True)

    source: int = Field(..., alias="from", ge=0)
    target: int = Field(..., alias="to", ge=0)
    # JSON numbers or decimal strings
    weight: float = Field(..., allow_inf_nan=False)


class GameDocument(BaseModel):
    """Versioned JSON serialization of a game"""
    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "schema_version": "1",
                "n": 2,
                "edges": [{"from": 0, "to": 1, "weight": 0.5},
                          {"from": 1, "to": 0, "weight": 0.5}],
                "benefit": {"family": "exponential", "params": {"saturation": 1.0}},
                "costs": [0.36787944117144233, 0.36787944117144233],
            }
        },
    )

    schema_version: Literal["1"] = "1"
    n: int = Field(..., ge=1, description="Number of agents")
    edges: List[EdgeSpec] = Field(default_factory=list)
    benefit: Union[BenefitSpec, List[BenefitSpec]]
    costs: List[float] = Field(..., description="Marginal cost per agent")
    coalitions: Optional[List[List[int]]] = None
    weights: Optional[List[float]] = Field(None, alias="lambda")

    @field_validator("costs")
    @classmethod
    def validate_costs(cls, v: List[float]) -> List[float]:
        if any(not np.isfinite(c) or c <= 0 for c in v):
            raise ValueError("costs must be finite and strictly positive")
        return v

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and any(not np.isfinite(w) or w <= 0 for w in v):
            raise ValueError("lambda entries must be finite and strictly positive")
        return v

    @model_validator(mode="after")
    def validate_shape(self) -> "GameDocument":
        n = self.n
        seen = set()
        for k, edge in enumerate(self.edges):
            if edge.source >= n or edge.target >= n:
                raise ValueError(f"edges[{k}] index out of range for n = {n}")
            if edge.source == edge.target:
                raise ValueError(f"edges[{k}] is a self-loop on agent {edge.source}")
            pair = (edge.source, edge.target)
            if pair in seen:
                raise ValueError(f"edges[{k}] duplicates arc {pair}")
            seen.add(pair)
        if len(self.costs) != n:
            raise ValueError(f"costs has {len(self.costs)} entries, expected {n}")
        if isinstance(self.benefit, list) and len(self.benefit) != n:
            raise ValueError(f"benefit has {len(self.benefit)} entries, expected {n}")
        if self.weights is not None and len(self.weights) != n:
            raise ValueError(f"lambda has {len(self.weights)} entries, expected {n}")
        if self.coalitions is not None:
            members = sorted(i for block in self.coalitions for i in block)
            if any(len(block) == 0 for block in self.coalitions) or members != list(range(n)):
                raise ValueError("coalitions must partition agents 0..n-1")
        return self

    def dependence(self) -> DependenceMatrix:
        return DependenceMatrix.from_edges(
            self.n, [(e.source, e.target, e.weight) for e in self.edges])

    def to_game(self) -> GameSpec:
        specs = self.benefit if isinstance(self.benefit, list) else [self.benefit] * self.n
        return GameSpec(self.dependence(), tuple(s.build() for s in specs),
                        np.array(self.costs, dtype=float))

    def partition(self) -> Optional[CoalitionPartition]:
        if self.coalitions is None:
            return None
        return CoalitionPartition(tuple(tuple(block) for block in self.coalitions))

    def welfare_weights(self) -> Optional[WelfareWeights]:
        if self.weights is None:
            return None
        return WelfareWeights(np.array(self.weights, dtype=float))


# ============================================================================
# Reports
# ============================================================================

class ClassificationOut(BaseModel):
    n: int
    p_matrix: bool
    z_matrix: bool
    l_matrix: bool
    s_matrix: bool
    strictly_diagonally_dominant: bool
    positive_definite: bool
    symmetric: bool
    nonnegative: bool
    spectral_radius: float
    min_real_eigenvalue: Optional[float] = None
    min_eigenvalue_uniqueness: Optional[bool] = None
    uniqueness: str
    existence: str
    existence_holds: Optional[bool] = None
    citations: List[str]

    @classmethod
    def from_report(cls, report) -> "ClassificationOut":
        return cls(
            n=report.n,
            p_matrix=report.is_p,
            z_matrix=report.is_z,
            l_matrix=report.is_l,
            s_matrix=report.is_s,
            strictly_diagonally_dominant=report.is_sdd,
            positive_definite=report.is_pd,
            symmetric=report.is_symmetric,
            nonnegative=report.is_nonnegative,
            spectral_radius=report.spectral_radius,
            min_real_eigenvalue=report.min_real_eigenvalue,
            min_eigenvalue_uniqueness=report.min_eigenvalue_uniqueness,
            uniqueness=report.uniqueness_verdict.value,
            existence=report.existence_verdict.value,
            existence_holds=report.existence_holds,
            citations=list(report.citations),
        )


class ProfileOut(BaseModel):
    outcome: str
    x: List[float]
    w: Optional[List[float]] = None
    interior: bool
    degenerate: List[int] = Field(default_factory=list)
    weights: Optional[List[float]] = Field(None, serialization_alias="lambda")
    coalitions: Optional[List[List[int]]] = None

    @classmethod
    def from_profile(cls, profile: EffortProfile, interior: bool,
                     degenerate=()) -> "ProfileOut":
        return cls(
            outcome=profile.outcome.value,
            x=profile.x.tolist(),
            w=None if profile.w is None else profile.w.tolist(),
            interior=interior,
            degenerate=list(degenerate),
            weights=None if profile.weights is None else profile.weights.values.tolist(),
            coalitions=(None if profile.partition is None
                        else [list(b) for b in profile.partition.blocks]),
        )


class RayOut(BaseModel):
    pivots: int
    entering: str


class SolveOut(BaseModel):
    outcome: str
    profiles: List[ProfileOut]
    classification: Optional[ClassificationOut] = None
    targets: Optional[List[float]] = None
    perceived_costs: Optional[List[float]] = None
    ray: Optional[RayOut] = None
    reason: Optional[str] = None
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_report(cls, report) -> "SolveOut":
        return cls(
            outcome=report.outcome.value,
            profiles=[ProfileOut.from_profile(p, interior, degenerate)
                      for p, interior, degenerate in zip(report.profiles, report.interiority,
                                                         report.degenerate)],
            classification=(None if report.verdicts is None
                            else ClassificationOut.from_report(report.verdicts)),
            targets=None if report.targets is None else report.targets.tolist(),
            perceived_costs=(None if report.perceived_costs is None
                             else report.perceived_costs.tolist()),
            ray=(None if report.ray is None
                 else RayOut(pivots=report.ray.pivots, entering=report.ray.entering)),
            reason=report.reason,
            diagnostics=report.diagnostics.as_dict(),
        )


class ConvergenceOut(BaseModel):
    closed: bool
    depth: Optional[int] = None
    residual: Optional[float] = None


class MeasureOut(BaseModel):
    measure: str
    params: Dict[str, float]
    values: List[float]
    convergence: ConvergenceOut

    @classmethod
    def from_result(cls, result) -> "MeasureOut":
        conv = result.convergence
        return cls(
            measure=result.measure.value,
            params={k: float(v) for k, v in result.params.items()},
            values=result.values.tolist(),
            convergence=ConvergenceOut(closed=conv.closed, depth=conv.depth,
                                       residual=conv.residual),
        )


class IdentityOut(BaseModel):
    holds: bool
    residuals: Dict[str, float] = Field(default_factory=dict)


class CentralityOut(BaseModel):
    alpha: float
    exogenous: List[float]
    measures: List[MeasureOut]
    identity: Optional[IdentityOut] = None


class PerturbationOut(BaseModel):
    outcome: str
    edges: List[List[int]]
    old_weights: List[float]
    new_weight: float
    baseline: List[float]
    perturbed: List[float]
    delta: List[float]
    signs: List[str]

    @classmethod
    def from_result(cls, result) -> "PerturbationOut":
        return cls(
            outcome=result.baseline.outcome.value,
            edges=[list(e) for e in result.edges],
            old_weights=list(result.old_weights),
            new_weight=result.new_weight,
            baseline=result.baseline.x.tolist(),
            perturbed=result.perturbed.x.tolist(),
            delta=result.delta.tolist(),
            signs=list(result.sign_summary),
        )


class DynamicsOut(BaseModel):
    verdict: str
    iterations: int
    x: List[float]
    verified: bool
    trajectory: Optional[List[List[float]]] = None

    @classmethod
    def from_result(cls, result, trace: bool = False) -> "DynamicsOut":
        return cls(
            verdict=result.verdict.value,
            iterations=result.iterations,
            x=result.x.tolist(),
            verified=result.verified,
            trajectory=[step.tolist() for step in result.trajectory] if trace else None,
        )


class ErrorOut(BaseModel):
    """Error document written to stderr"""
    error: str
    detail: str
    field: Optional[str] = None
    line: Optional[int] = None
    agents: Optional[List[int]] = None
    values: Optional[List[float]] = None
    side: Optional[str] = None
