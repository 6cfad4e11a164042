"""Request/response models of the computation service."""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

Family = Literal["dyadic", "triadic"]


class SpectrumRequest(BaseModel):
    family: Family
    N: int = Field(ge=2)
    l: Optional[int] = None
    closed: bool = False
    eps_null: float = Field(default=1e-8, gt=0)


class ResonanceRow(BaseModel):
    index: int
    re: float
    im: float
    modulus: float
    gamma: float
    tau: float
    parity: str
    overlap_abs: float


class SpectrumResponse(BaseModel):
    resonances: List[ResonanceRow]
    nullDim: int
    vCondition: float
    meta: Dict


class HusimiRequest(BaseModel):
    family: Family
    N: int = Field(ge=2)
    l: Optional[int] = None
    closed: bool = False
    index: int = Field(ge=0)
    kind: Literal["right", "left", "h"] = "h"
    grid_q: int = Field(default=256, ge=1)
    grid_p: int = Field(default=256, ge=1)


class GridResponse(BaseModel):
    grid_q: int
    grid_p: int
    values_re: List[List[float]]
    values_im: List[List[float]]
    meta: Dict


class AutocorrRequest(BaseModel):
    family: Family
    N: int = Field(ge=2)
    l: Optional[int] = None
    closed: bool = False
    n: int = Field(ge=1)
    grid_q: int = Field(default=256, ge=1)
    grid_p: int = Field(default=256, ge=1)


class RepellerRequest(BaseModel):
    family: Family = "dyadic"
    t_back: int = Field(ge=0)
    t_fwd: int = Field(ge=0)
    l: Optional[int] = None


class Rectangle(BaseModel):
    q_lo: float
    q_hi: float
    p_lo: float
    p_hi: float


class RepellerResponse(BaseModel):
    tBack: int
    tFwd: int
    family: Family
    l: Optional[int]
    rectangles: List[Rectangle]
    areaFraction: float


class TauRequest(BaseModel):
    N: int = Field(ge=2)
    ls: Optional[List[int]] = None          # omitted -> closed map
    eps_null: float = Field(default=1e-8, gt=0)


class TauRow(BaseModel):
    l: int                                  # 0 marks the closed map
    index: int
    modulus: float
    tau: float


class TauResponse(BaseModel):
    rows: List[TauRow]
    slopes: Dict[str, float]
    meta: Dict


class WeylRequest(BaseModel):
    family: Family = "dyadic"
    Ns: List[int]
    l: Optional[int] = None
    closed: bool = False
    nu_c: float = Field(gt=0, lt=1)


class WeylResponse(BaseModel):
    points: List[Tuple[int, int]]
    exponent: float
    dimensionEstimate: float
    nu_c: float


class EntropyRequest(BaseModel):
    l: int


class EntropyResponse(BaseModel):
    l: int
    leadingEigenvalue: float
    entropy: float


class EscapeRequest(BaseModel):
    family: Family
    l: Optional[int] = None
    samples: int
    steps: int
    seed: int


class EscapeResponse(BaseModel):
    gamma: float
    stderr: float
    samples: int
    steps: int
