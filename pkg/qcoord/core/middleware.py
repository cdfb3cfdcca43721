import logging
import time
import uuid

from fastapi import Request

from qcoord.core.log_config import logging_settings, request_id_var

logger = logging.getLogger(logging_settings.LOGGER_NAME)


async def log_requests(request: Request, call_next):
    """
    Log every request with its run parameters (n, variant, ell, order) and
    timing; 4xx and 5xx answers are logged as warnings.
    """
    start_time = time.perf_counter()
    params = dict(request.query_params)
    logger.info(f"{request.method} {request.url.path} started", extra={"params": params})

    try:
        response = await call_next(request)
    except Exception as e:
        logger.exception(f"{request.method} {request.url.path} crashed: {e}")
        raise

    elapsed = time.perf_counter() - start_time
    level = logging.WARNING if response.status_code >= 400 else logging.INFO
    logger.log(
        level,
        f"{request.method} {request.url.path} -> {response.status_code} in {elapsed:.3f}s",
        extra={"params": params, "status": response.status_code},
    )
    response.headers["X-Process-Time"] = f"{elapsed:.6f}"
    return response


async def add_request_id(request: Request, call_next):
    # reuse the caller's id when one is sent
    request_id = request.headers.get("X-Request-ID") or uuid.uuid4().hex
    token = request_id_var.set(request_id)
    try:
        response = await call_next(request)
    finally:
        request_id_var.reset(token)
    response.headers["X-Request-ID"] = request_id
    return response
