from typing import Any

from fastapi import APIRouter, Query, Request

import qcoord.services.computations as computation_service
from qcoord.api.deps import RunConfigDep, limiter
from qcoord.core.config import settings
from qcoord.schemas.elements import BasisOut, ElementOut

router = APIRouter()


@router.get("/det", response_model=ElementOut)
@limiter.limit(settings.EXPRESSION_RATE_LIMIT)
def determinant_endpoint(request: Request, *, run: RunConfigDep) -> Any:
    """
    The quantum determinant in the run's algebra.
    """
    return computation_service.element_out(computation_service.determinant(run), run)


@router.get("/basis", response_model=BasisOut)
@limiter.limit(settings.EXPRESSION_RATE_LIMIT)
def basis_endpoint(request: Request, *, run: RunConfigDep, limit: int = Query(100, ge=0, le=10000)) -> Any:
    """
    List module basis keys; `count` is always the full rank.
    """
    return computation_service.basis_keys(run, limit)
