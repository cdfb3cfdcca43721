from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from qcoord.algebra.coeff import cyclotomic
from qcoord.algebra.monomial import make_opposite_order
from qcoord.algebra.rewrite import AlgebraConfig, BasisFlavor, Variant
from qcoord.core.config import settings


class OrderFlavor(str, Enum):
    ROWMAJOR = "rowmajor"
    OPPOSITE = "opposite"


class OutputMode(str, Enum):
    TEXT = "text"
    JSON = "json"


class RunConfig(BaseModel):
    n: int = Field(default_factory=lambda: settings.DEFAULT_N, ge=1)
    variant: Variant = Field(default_factory=lambda: Variant(settings.DEFAULT_VARIANT))
    ell: Optional[int] = None
    order: OrderFlavor = OrderFlavor.ROWMAJOR
    output: OutputMode = OutputMode.TEXT

    @field_validator("ell")
    @classmethod
    def odd_root_order(cls, ell: Optional[int]) -> Optional[int]:
        if ell is not None:
            cyclotomic(ell)
        return ell

    def algebra_config(self) -> AlgebraConfig:
        if self.order == OrderFlavor.OPPOSITE:
            return AlgebraConfig(
                n=self.n,
                variant=self.variant,
                ell=self.ell,
                order=make_opposite_order(self.n),
                flavor=BasisFlavor.OPPOSITE,
            )
        return AlgebraConfig(n=self.n, variant=self.variant, ell=self.ell)
