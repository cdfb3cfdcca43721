from fastapi import FastAPI, Request
from pydantic import ValidationError
from slowapi.errors import RateLimitExceeded
from starlette.responses import JSONResponse

from qcoord.api.deps import limiter
from qcoord.api.main import api_router
from qcoord.core.config import settings
from qcoord.core.exceptions import QcoordError
from qcoord.core.log_config import logging_settings

# This needs to be called before middleware is imported to ensure setup
logging_settings.setup()

from qcoord.core.middleware import add_request_id, log_requests


app = FastAPI(
    title=settings.PROJECT_NAME,
    description="Normal forms, quantum determinants, root-of-unity specializations and "
    "Frobenius-extension checks for quantized coordinate rings of matrices.",
    openapi_url=f"{settings.API_V1_STR}/openapi.json",
)

app.state.limiter = limiter


app.middleware("http")(log_requests)
app.middleware("http")(add_request_id)


@app.exception_handler(RateLimitExceeded)
async def rate_limit_handler(request: Request, exc: RateLimitExceeded):
    return JSONResponse(
        status_code=429,
        content={"detail": "Rate limit exceeded. Try again later."},
    )


@app.exception_handler(QcoordError)
async def qcoord_error_handler(request: Request, exc: QcoordError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(ValidationError)
async def validation_error_handler(request: Request, exc: ValidationError):
    return JSONResponse(
        status_code=400,
        content={"detail": "; ".join(error["msg"] for error in exc.errors())},
    )


@app.get("/")
@limiter.limit("50/minute")
async def root(request: Request):
    return {"project": settings.PROJECT_NAME, "api": settings.API_V1_STR}


app.include_router(api_router, prefix=settings.API_V1_STR)
