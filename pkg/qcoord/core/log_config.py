import contextvars
import logging.config

from pydantic_settings import BaseSettings, SettingsConfigDict

# set per HTTP request by the middleware; None for CLI runs
request_id_var = contextvars.ContextVar("request_id", default=None)


class RequestIdFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.request_id = request_id_var.get() or "-"
        return True


class LoggingSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env", env_ignore_empty=True, extra="ignore"
    )

    LOGGER_NAME: str = "qcoord_logger"
    LOG_FORMAT: str = "%(levelname)s | %(asctime)s | %(request_id)s | %(message)s"
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True

    version: int = 1
    disable_existing_loggers: bool = False
    filters: dict = {}
    formatters: dict = {}
    handlers: dict = {}
    loggers: dict = {}

    def __init__(self, **kwargs):
        super().__init__(**kwargs)

        self.filters = {"request_id": {"()": RequestIdFilter}}

        self.formatters = {
            "plain": {
                "format": self.LOG_FORMAT,
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
            "json": {
                "()": "pythonjsonlogger.jsonlogger.JsonFormatter",
                "format": "%(asctime)s %(levelname)s %(name)s %(request_id)s %(message)s",
            },
        }

        # stdout carries command output, so logs go to stderr
        self.handlers = {
            "console": {
                "formatter": "json" if self.LOG_JSON else "plain",
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
                "filters": ["request_id"],
            },
        }

        self.loggers = {
            self.LOGGER_NAME: {
                "handlers": ["console"],
                "level": self.LOG_LEVEL,
                "propagate": False,
            },
        }

        self.setup()

    def setup(self):
        """Apply the logging configuration."""
        logging.config.dictConfig(self.model_dump())


logging_settings = LoggingSettings()
