from typing import Any

from fastapi import APIRouter, Request

import qcoord.services.computations as computation_service
from qcoord.api.deps import RunConfigDep, limiter
from qcoord.core.config import settings
from qcoord.schemas.reports import CheckReport
from qcoord.services.computations import CheckName

router = APIRouter()


@router.get("/{name}", response_model=CheckReport)
@limiter.limit(settings.CHECK_RATE_LIMIT)
def run_check_endpoint(request: Request, name: CheckName, run: RunConfigDep) -> Any:
    """
    Run a verification suite and return its report.
    """
    return computation_service.run_check(name, run)
