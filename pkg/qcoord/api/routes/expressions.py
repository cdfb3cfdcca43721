from typing import Any

from fastapi import APIRouter, Request

import qcoord.services.computations as computation_service
from qcoord.api.deps import RunConfigDep, limiter
from qcoord.core.config import settings
from qcoord.schemas.elements import (
    ClassicalOut,
    ElementOut,
    ExpansionOut,
    ExpressionIn,
    ProductIn,
)

router = APIRouter()


@router.post("/nf", response_model=ElementOut)
@limiter.limit(settings.EXPRESSION_RATE_LIMIT)
def normal_form_endpoint(request: Request, *, run: RunConfigDep, body: ExpressionIn) -> Any:
    """
    Reduce an expression to normal form.
    """
    element = computation_service.normal_form(body.expr, run)
    return computation_service.element_out(element, run)


@router.post("/mul", response_model=ElementOut)
@limiter.limit(settings.EXPRESSION_RATE_LIMIT)
def multiply_endpoint(request: Request, *, run: RunConfigDep, body: ProductIn) -> Any:
    """
    Multiply two expressions.
    """
    element = computation_service.multiply_expressions(body.left, body.right, run)
    return computation_service.element_out(element, run)


@router.post("/expand", response_model=ExpansionOut)
@limiter.limit(settings.EXPRESSION_RATE_LIMIT)
def expand_endpoint(request: Request, *, run: RunConfigDep, body: ExpressionIn) -> Any:
    """
    Expand an expression over the image of the quantum Frobenius map.
    """
    return computation_service.expand_expression(body.expr, run)


@router.post("/phi", response_model=ClassicalOut)
@limiter.limit(settings.EXPRESSION_RATE_LIMIT)
def phi_endpoint(request: Request, *, run: RunConfigDep, body: ExpressionIn) -> Any:
    return computation_service.phi_expression(body.expr, run)


@router.post("/nakayama", response_model=ElementOut)
@limiter.limit(settings.EXPRESSION_RATE_LIMIT)
def nakayama_endpoint(request: Request, *, run: RunConfigDep, body: ExpressionIn) -> Any:
    element = computation_service.nakayama_expression(body.expr, run)
    return computation_service.element_out(element, run)
