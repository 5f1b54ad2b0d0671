"""
Django settings for the randboot project.

The project has no database and no web surface: Django provides the settings layer,
the management command CLI (``manage.py run|fanchart|power|selftest``) and the test runner.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""
import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals, nothing is signed
SECRET_KEY = 'randboot-no-secrets-are-signed-with-this-key'

DEBUG = False

INSTALLED_APPS = [
    'bootsim',
]

USE_I18N = False

USE_TZ = False

# Simulation defaults
RANDBOOT_SCHEMA_VERSION = 1

RANDBOOT_DEFAULT_B = 999

# Permutation schemes enumerate all n! orderings up to this sample size
RANDBOOT_FULL_ENUMERATION_MAX_N = 8

RANDBOOT_GRID_SIZE = 101

RANDBOOT_BAND = (0.05, 0.95)

RANDBOOT_NOMINAL_LEVELS = (0.01, 0.05, 0.10)

# Desk-scale double MC defaults
RANDBOOT_DESK_M = 200
RANDBOOT_DESK_N = 2000

# Brownian discretization for the local power oracle
RANDBOOT_BROWNIAN_STEPS = 1000
RANDBOOT_ORACLE_PATHS = 100000

# Outer replications handed to a worker at a time (one log line per chunk)
RANDBOOT_CHUNK_SIZE = 50

# Worker count override for every run, 0 means one worker per CPU; None (unset) leaves it to the config
RANDBOOT_THREADS = int(os.environ["RANDBOOT_THREADS"]) if os.environ.get("RANDBOOT_THREADS") else None

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "bootsim": {
            "handlers": ["console"],
            "level": os.environ.get("RANDBOOT_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}

# Apply local settings
if os.path.exists(BASE_DIR / "settings.local.py"):
    exec(open(BASE_DIR / "settings.local.py").read())
