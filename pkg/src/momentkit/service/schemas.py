"""Pydantic request/response models for the HTTP service.

Requests forbid unknown fields so that typos fail loudly before any
computation.  Structural validation lives here; semantic validation (degree
bounds, dimension agreement, normalization) stays in the core modules and
surfaces through the error handler with its category intact.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class EntryModel(StrictModel):
    alpha: list[int]
    re: float
    im: Optional[float] = None


class RationalModel(StrictModel):
    alpha: list[int]
    num: int
    den: int


class SequenceModel(StrictModel):
    dimension: int = Field(ge=1)
    max_degree: int = Field(ge=0)
    entries: list[EntryModel] = Field(default_factory=list)
    exact: bool = False
    rationals: Optional[list[RationalModel]] = None

    def as_document(self) -> dict:
        return self.model_dump(exclude_none=True)


Scalar = Union[float, int]
Point = Union[Scalar, list[Scalar]]


class MomentsRequest(StrictModel):
    density: Union[str, dict]
    max_degree: int = Field(ge=0)
    exact: Optional[bool] = None


class DseqRequest(StrictModel):
    sequence: SequenceModel
    beta: Union[int, list[int]]


class HausdorffRequest(StrictModel):
    sequence: SequenceModel
    d_max: int = Field(ge=0)


class AbsContRequest(StrictModel):
    sequence: SequenceModel
    d_max: int = Field(ge=0)


class CrTestRequest(StrictModel):
    sequence: SequenceModel
    r: int = Field(ge=0)
    d_max: int = Field(ge=0)


class MirrorVerifyRequest(StrictModel):
    sequence: SequenceModel
    components: dict[str, SequenceModel]
    r: int = Field(ge=0)
    d_max: int = Field(ge=0)
    defect_tol: float = 1e-12


class CharfnRequest(StrictModel):
    sequence: SequenceModel
    points: list[Point]
    tol: float = 1e-12
    backend: str = "auto"
    adaptive: bool = False


class RadiusRequest(StrictModel):
    sequence: SequenceModel
    k_min: int = Field(ge=1)
    k_max: int = Field(ge=1)


class BochnerRequest(StrictModel):
    sequence: SequenceModel
    points: Optional[list[Point]] = None
    random_count: Optional[int] = Field(default=None, ge=1)
    box: tuple[float, float] = (-1.0, 1.0)
    seed: Optional[int] = None
    tol: float = 1e-8
    series_tol: float = 1e-10
    rescale: bool = False


class GridSpec(StrictModel):
    start: float
    stop: float
    step: float = Field(gt=0)


class ReconstructRequest(StrictModel):
    sequence: SequenceModel
    R: float = Field(gt=0)
    grid: Optional[list[Point]] = None
    grid_spec: Optional[GridSpec] = None
    tol: float = 1e-8
    damping: str = "none"
    nonneg_tol: Optional[float] = None


class LevyRequest(StrictModel):
    sequence: SequenceModel
    a: float
    b: float
    T: float = Field(gt=0)
    tol: float = 1e-8


class SmoothMassRequest(StrictModel):
    sequence: SequenceModel
    x0: Point
    sigma: float = Field(gt=0)
    R: float = Field(gt=0)
    tol: float = 1e-8


class BasisEntryModel(StrictModel):
    poly: list[Union[float, int, str]]
    overrides: list[tuple[float, float]] = Field(default_factory=list)
    name: Optional[str] = None


class FunctionalModel(StrictModel):
    domain: tuple[float, float]
    basis: list[BasisEntryModel]
    values: list[Union[float, int, str]]


class RichterRequest(StrictModel):
    functional: FunctionalModel
    tol: float = 1e-10
    grid_points: int = Field(default=401, ge=2)
    candidate_grid: Optional[list[float]] = None


class SmoothRequest(StrictModel):
    functional: FunctionalModel
    family: str = "gaussian"
    sigmas: list[float]
    tol: float = 1e-8
    atomic_tol: float = 1e-10
    grid_points: int = Field(default=401, ge=2)
    density_grid: Optional[list[float]] = None


# -- responses ---------------------------------------------------------------

class GrowthFitModel(BaseModel):
    exponent: float
    coefficient: float


class HausdorffReportModel(BaseModel):
    sums: list[float]
    classification: str
    growth_fit: Optional[GrowthFitModel]
    condition: float
    d_max: int


class LadderVerdictModel(BaseModel):
    base: HausdorffReportModel
    derivative: HausdorffReportModel
    positive: bool


class SigmaPairModel(BaseModel):
    first: HausdorffReportModel
    second: HausdorffReportModel


class MirrorVerifyModel(BaseModel):
    sum_defect: float
    defect_tol: float
    per_sigma: dict[str, SigmaPairModel]
    positive: bool


class CharValueModel(BaseModel):
    z: list[float]
    re: float
    im: float
    cancellation: float
    degree_used: int
    converged: bool
    backend: str
    reliable: bool


class CharfnResponse(BaseModel):
    values: list[CharValueModel]
    tol: float


class RadiusModel(BaseModel):
    per_coordinate: list[list[float]]
    k_values: list[int]
    estimate: float
    trend: str


class BochnerModel(BaseModel):
    points: list[list[float]]
    min_eigenvalues: dict[str, float]
    psd: dict[str, bool]
    all_psd: bool
    tolerance: float
    effective_tolerance: float
    hermitian_defect: float
    max_cancellation: float
    seed: Optional[int] = None


class NonnegModel(BaseModel):
    nonnegative: bool
    min_value: float
    argmin: Optional[Union[float, list[float]]]
    tol: float


class ReconstructionModel(BaseModel):
    grid: list[Union[float, list[float]]]
    values: list[float]
    imag_residues: list[float]
    R: float
    damping: str
    points_per_unit: int
    degree_used: int
    max_cancellation: float
    max_imag_residue: float
    series_tol: float
    nonnegativity: Optional[NonnegModel] = None


class LevyModel(BaseModel):
    mass: float
    imag_residue: float
    a: float
    b: float
    T: float
    points_per_unit: int
    degree_used: int
    max_cancellation: float
    series_tol: float


class SmoothMassModel(BaseModel):
    mass: float
    imag_residue: float
    x0: list[float]
    sigma: float
    R: float
    points_per_unit: int
    degree_used: int
    max_cancellation: float
    series_tol: float


class AtomicModel(BaseModel):
    atoms: list[tuple[float, float]]
    residual: float
    diagnostics: dict


class DensityTableModel(BaseModel):
    grid: list[float]
    values: list[float]


class SmoothedModel(BaseModel):
    atoms: list[tuple[float, float, float]]
    family: str
    residual: float
    diagnostics: dict
    atomic: AtomicModel
    density: Optional[DensityTableModel] = None
