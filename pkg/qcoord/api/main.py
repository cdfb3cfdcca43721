from fastapi import APIRouter

from qcoord.api.routes import checks, expressions, structure

api_router = APIRouter()

api_router.include_router(expressions.router, prefix="/expressions", tags=["expressions"])
api_router.include_router(structure.router, tags=["structure"])
api_router.include_router(checks.router, prefix="/checks", tags=["checks"])
