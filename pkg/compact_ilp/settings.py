"""
Django settings for compact_ilp project.

The project has no database, URLs or templates. Django provides settings,
logging configuration and the management command framework that the
``reduce``/``solve``/``protocol``/``gen``/``check_corpus`` commands run on.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.1/ref/settings/
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


APP_NAME = "compact-ilp"

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR: Path = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "compact-ilp-dev-key")

DEBUG = os.getenv("DJANGO_DEBUG", "false").lower() == "true"

ALLOWED_HOSTS: list[str] = []

# Application definition
INSTALLED_APPS: list[str] = [
    "core.apps.CoreConfig",
]

# No persistent state: programs, instances and advice blobs live in files.
DATABASES: dict = {}

USE_TZ = True
TIME_ZONE = "UTC"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


# Solver and enumeration budgets
# Wall-clock cap (milliseconds) for a single solve or enumeration; 0 disables it.
COMPACT_ILP_BUDGET_MS = _env_int("COMPACT_ILP_BUDGET_MS", 0)
COMPACT_ILP_ENUMERATION_MAX_POINTS = _env_int("COMPACT_ILP_ENUMERATION_MAX_POINTS", 10**7)
COMPACT_ILP_LATTICE_NODE_CAP = _env_int("COMPACT_ILP_LATTICE_NODE_CAP", 2_000_000)
COMPACT_ILP_MILP_MAX_ASSIGNMENTS = _env_int("COMPACT_ILP_MILP_MAX_ASSIGNMENTS", 2**20)

# Protocol enumeration
COMPACT_ILP_WITNESS_MAX_BITS = _env_int("COMPACT_ILP_WITNESS_MAX_BITS", 24)
COMPACT_ILP_CHECK_MAX_WITNESS_BITS = _env_int("COMPACT_ILP_CHECK_MAX_WITNESS_BITS", 16)
COMPACT_ILP_ENUMERATION_WORKERS = _env_int("COMPACT_ILP_ENUMERATION_WORKERS", 1)

# Exact decider guards
COMPACT_ILP_DECIDER_GUARDS: dict[str, int] = {
    "max_vertices": _env_int("COMPACT_ILP_DECIDER_MAX_VERTICES", 10),
    "max_string": _env_int("COMPACT_ILP_DECIDER_MAX_STRING", 8),
    "max_points": _env_int("COMPACT_ILP_DECIDER_MAX_POINTS", 10),
    "max_sets": _env_int("COMPACT_ILP_DECIDER_MAX_SETS", 8),
}

# Modeling
COMPACT_ILP_WVC_WEIGHT_CAP = _env_int("COMPACT_ILP_WVC_WEIGHT_CAP", 10**6)

# Seeds
COMPACT_ILP_STRING_SEED = os.getenv("COMPACT_ILP_STRING_SEED", "compact-ilp")
COMPACT_ILP_DEFAULT_SEED = _env_int("COMPACT_ILP_DEFAULT_SEED", 7)

# Corpus shipped with the app
COMPACT_ILP_DEFAULT_CORPUS = BASE_DIR / "core" / "oracles" / "data" / "default_corpus.json"

LOG_LEVEL = os.getenv("COMPACT_ILP_LOG_LEVEL", "INFO").upper()

# Logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "level": LOG_LEVEL,
            "class": "logging.StreamHandler",
            "formatter": "verbose",
            "stream": "ext://sys.stderr",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": LOG_LEVEL,
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
    },
}
