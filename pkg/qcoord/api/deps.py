from typing import Annotated, Optional

from fastapi import Depends, Query
from slowapi import Limiter
from slowapi.util import get_remote_address

from qcoord.algebra.rewrite import Variant
from qcoord.core.config import settings
from qcoord.schemas.run_config import OrderFlavor, RunConfig

limiter = Limiter(key_func=get_remote_address)


def get_run_config(
    n: int = Query(settings.DEFAULT_N, ge=1, le=4),
    variant: Variant = Query(Variant(settings.DEFAULT_VARIANT)),
    ell: Optional[int] = Query(None, ge=1, le=15),
    order: OrderFlavor = Query(OrderFlavor.ROWMAJOR),
) -> RunConfig:
    return RunConfig(n=n, variant=variant, ell=ell, order=order)


RunConfigDep = Annotated[RunConfig, Depends(get_run_config)]
