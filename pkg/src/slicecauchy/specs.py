"""JSON job specifications for the command line front end.

Quaternions are 4-element arrays ``[x0, x1, x2, x3]``; slice points and
contour centers are pairs ``[u, v]``.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator

from . import contour as ct
from . import quaternion as qt
from . import slicefunc as sf

Quat = Annotated[list[float], Field(min_length=4, max_length=4)]
Pair = Annotated[list[float], Field(min_length=2, max_length=2)]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


# -- functions ---------------------------------------------------------------------------------


class PolynomialSpec(_Model):
    kind: Literal["polynomial"]
    coeffs: list[Quat] = Field(min_length=1)
    n_min: int = 0
    center: float = 0.0
    chirality: Literal["left", "right"] = "left"

    def build(self, contour=None):
        return sf.polynomial(self.coeffs, self.n_min, self.center, self.chirality)


class ConstantSpec(_Model):
    kind: Literal["constant"]
    value: Quat
    chirality: Literal["left", "right"] = "left"

    def build(self, contour=None):
        return sf.constant(self.value, self.chirality)


class SampledSpec(_Model):
    kind: Literal["sampled"]
    params: list[float] = Field(min_length=4)
    values: list[Quat] = Field(min_length=4)
    chirality: Literal["left", "right"] = "left"

    def build(self, contour=None):
        if contour is None:
            raise ValueError("sampled data needs a contour")
        return sf.sampled(contour, self.params, self.values, self.chirality)


class StarRationalSpec(_Model):
    kind: Literal["star_rational"]
    num: "FunctionSpec"
    den: "FunctionSpec"

    def build(self, contour=None):
        return sf.star_rational(self.num.build(contour), self.den.build(contour))


class AbsPowerSpec(_Model):
    """``c |u - u0|^alpha`` as an even component: Hölder test data."""

    kind: Literal["abs_power"]
    u0: float = 0.0
    alpha: PositiveFloat = 0.5
    coeff: Quat = [1.0, 0.0, 0.0, 0.0]

    def build(self, contour=None):
        c = np.asarray(self.coeff)
        return sf.SliceFunction(lambda u, v: np.abs(u - self.u0)[..., None] ** self.alpha * c,
                                lambda u, v: np.zeros(np.shape(u) + (4,)), smoothness=0, name="abs_power")


FunctionSpec = Annotated[Union[PolynomialSpec, ConstantSpec, SampledSpec, StarRationalSpec, AbsPowerSpec],
                         Field(discriminator="kind")]
StarRationalSpec.model_rebuild()


# -- contours and domains -----------------------------------------------------------------------


class CircleSpec(_Model):
    kind: Literal["circle"]
    center: Pair = [0.0, 0.0]
    radius: PositiveFloat
    j: Quat = [0.0, 1.0, 0.0, 0.0]
    panels: int = Field(8, ge=8)

    def build(self):
        return ct.circle(tuple(self.center), self.radius, self.j, self.panels)


class SegmentPiece(_Model):
    type: Literal["segment"]
    start: Pair = Field(alias="from")
    end: Pair = Field(alias="to")

    def arc(self):
        return ct.Segment(complex(*self.start), complex(*self.end))


class ArcPiece(_Model):
    type: Literal["arc"]
    center: Pair
    radius: PositiveFloat
    start: float
    end: float

    def arc(self):
        c = complex(*self.center)
        if self.end > self.start:
            return ct.CircleArc(c, self.radius, self.start, self.end)
        return ct.CircleArc(c, self.radius, self.end, self.start).reversed()


class PolylineArcsSpec(_Model):
    kind: Literal["polyline_arcs"]
    j: Quat = [0.0, 1.0, 0.0, 0.0]
    closed: bool = True
    panels: PositiveInt = 4
    pieces: list[Annotated[Union[SegmentPiece, ArcPiece], Field(discriminator="type")]] = Field(min_length=1)

    def build(self):
        return ct.Contour([p.arc() for p in self.pieces], self.j, self.closed, self.panels)


ContourSpec = Annotated[Union[CircleSpec, PolylineArcsSpec], Field(discriminator="kind")]


class BallSpec(_Model):
    kind: Literal["ball"]
    center: float = 0.0
    radius: PositiveFloat = 1.0

    def build(self):
        return sf.ball(self.center, self.radius)


# -- jobs ---------------------------------------------------------------------------------------------


class Tolerances(_Model):
    quad_tol: PositiveFloat = ct.DEFAULT_TOL
    fd_step: PositiveFloat | None = None
    pole_guard: PositiveFloat | None = None


class JobSpec(_Model):
    """One CLI job: a command plus its inputs."""

    command: Literal["eval-kernel", "transform", "split", "jump-check", "holder", "series-fit",
                     "verify-fundamental", "solve-global", "report"] | None = None
    function: FunctionSpec | None = None
    contour: ContourSpec | None = None
    domain: BallSpec | None = None
    tolerances: Tolerances = Tolerances()
    seed: int = 0
    output: str | None = None

    # command inputs
    points: list[Quat] = []
    s: list[Quat] = []
    kernel: Literal["left", "right", "star_inverse", "phi"] = "left"
    chirality: Literal["left", "right"] = "left"
    q0: Pair | None = None
    distances: list[PositiveFloat] = [0.1, 0.01, 0.001]
    alpha: float = 0.5
    samples: int = Field(512, ge=2)
    center: float = 0.0
    rho: PositiveFloat = 1.0
    window: tuple[int, int] = (-8, 8)
    j: Quat = [0.0, 1.0, 0.0, 0.0]
    width: PositiveFloat = 0.25
    coeff: Quat = [1.0, 0.0, 0.0, 0.0]
    grid: tuple[PositiveInt, PositiveInt] = (24, 32)
    levels: int = Field(4, ge=1)
    convention: Literal["derived", "stated"] = "derived"
    probes: PositiveInt = 20
    ladder: Literal["quadrature", "fundamental"] = "quadrature"

    @field_validator("alpha")
    @classmethod
    def _alpha(cls, a):
        if not 0 < a < 1:
            raise ValueError("alpha must lie in (0, 1)")
        return a

    @field_validator("j")
    @classmethod
    def _unit(cls, j):
        qt.unit_imaginary(j)
        return j

    def build_contour(self):
        if self.contour is None:
            raise ValueError("this command needs a contour")
        return self.contour.build()

    def build_function(self, contour=None):
        if self.function is None:
            raise ValueError("this command needs a function")
        return self.function.build(contour)
