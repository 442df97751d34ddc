"""
Domain types shared by every dispersia module.

Positions and tensors are plain numpy arrays (shape (3,) and (3, 3));
everything else is an immutable pydantic model.
"""
from enum import Enum
from typing import Annotated, Dict, Literal, NamedTuple, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.constants import epsilon_0

from core.errors import GeometryError

Vec3 = np.ndarray
Tensor3 = np.ndarray

EPSILON_0 = epsilon_0


def as_vec3(v) -> Vec3:
    """Coerce to a finite float vector of length 3."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise GeometryError(f"Expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"Position has non-finite components: {arr}")
    return arr


class Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# --- Coupling ---

class UnitMode(str, Enum):
    REDUCED = "reduced"
    SI = "si"


class PairCoupling(Frozen):
    lambda_ab: float = Field(1.0, gt=0)
    unit_mode: UnitMode = UnitMode.REDUCED

    @property
    def epsilon0(self) -> float:
        return EPSILON_0 if self.unit_mode == UnitMode.SI else 1.0

    @property
    def strength(self) -> float:
        """Lambda_AB / eps0^2, the factor every pair energy carries."""
        return self.lambda_ab / self.epsilon0 ** 2


class AtomPolarization(Frozen):
    d2: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    @model_validator(mode="after")
    def _nonnegative(self):
        if any(not np.isfinite(v) or v < 0 for v in self.d2):
            raise ValueError(f"d2 components must be finite and >= 0, got {self.d2}")
        return self

    @classmethod
    def isotropic(cls, mean_square: float) -> "AtomPolarization":
        """Spread a total <d^2> evenly over the three axes."""
        third = mean_square / 3.0
        return cls(d2=(third, third, third))


# --- Geometries ---

class FreeSpace(Frozen):
    kind: Literal["free"] = "free"


class Plane(Frozen):
    """Conductor at z = 0, atoms in z > 0."""
    kind: Literal["plane"] = "plane"


class Capacitor(Frozen):
    """Plates at z = -D/2 and z = +D/2."""
    kind: Literal["capacitor"] = "capacitor"
    D: float = Field(gt=0)


class SphereGrounded(Frozen):
    kind: Literal["sphere_grounded"] = "sphere_grounded"
    a: float = Field(gt=0)


class SphereIsolated(Frozen):
    """Neutral sphere at floating potential."""
    kind: Literal["sphere_isolated"] = "sphere_isolated"
    a: float = Field(gt=0)


Geometry = Annotated[
    Union[FreeSpace, Plane, Capacitor, SphereGrounded, SphereIsolated],
    Field(discriminator="kind"),
]

SPHERES = (SphereGrounded, SphereIsolated)


# --- Numerical controls ---

class SeriesCtrl(Frozen):
    rel_tol: float = Field(1e-12, gt=0, lt=1)
    n_max: int = 100_000
    min_terms: int = 8

    @model_validator(mode="after")
    def _ordering(self):
        if not (self.n_max >= self.min_terms >= 1):
            raise ValueError("SeriesCtrl requires n_max >= min_terms >= 1")
        return self


class FdCtrl(Frozen):
    # None: each consumer picks its own default relative to the local length scale
    base_step: Optional[float] = Field(None, gt=0)
    richardson_levels: int = Field(2, ge=0)


# --- Atoms ---

class AtomPair(Frozen):
    r_a: Tuple[float, float, float]
    r_b: Tuple[float, float, float]
    polarization_a: AtomPolarization = AtomPolarization()
    polarization_b: AtomPolarization = AtomPolarization()

    @property
    def positions(self) -> Tuple[Vec3, Vec3]:
        return as_vec3(self.r_a), as_vec3(self.r_b)


# --- Scans ---

class Sweep(Frozen):
    parameter: str
    start: float
    stop: float
    count: int = Field(ge=2)
    spacing: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _log_positive(self):
        if self.spacing == "log" and (self.start <= 0 or self.stop <= 0):
            raise ValueError("log spacing requires positive start and stop")
        return self

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


class ScanSpec(Frozen):
    """Geometry, atoms, sweep axis and placements of one scan."""

    geometry: Geometry
    coupling: PairCoupling = PairCoupling()
    polarization: AtomPolarization = AtomPolarization()
    sweep: Sweep
    placement: Dict[str, float] = Field(default_factory=dict)
    separations: Tuple[float, ...] = ()
    output_path: Optional[str] = None

    def place(self, key: str, default: float) -> float:
        return self.placement.get(key, default)


# --- Prefactors ---

class Prefactors(NamedTuple):
    london_coeff: float
    na1_coeff: float
    na2_coeff: float


def reduced_prefactors(coupling: PairCoupling) -> Prefactors:
    """
    Magnitudes of the London, first and second non-additive prefactors:
    Lambda/(24 pi^2 eps0^2), Lambda/(18 pi eps0^2), Lambda/(9 eps0^2).
    """
    s = coupling.strength
    return Prefactors(
        london_coeff=s / (24.0 * np.pi ** 2),
        na1_coeff=s / (18.0 * np.pi),
        na2_coeff=s / 9.0,
    )
