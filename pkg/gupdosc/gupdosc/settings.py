from pathlib import Path

import environ


env = environ.Env(
    DEBUG=(bool, False),
    GUP_DOSC_LOG_LEVEL=(str, 'WARNING'),
)
environ.Env.read_env()


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve(strict=True).parent.parent


# Nothing is signed or served; Django only refuses to start without a key.
SECRET_KEY = env('SECRET_KEY', default='gup-dosc-local-only')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'oscillator.apps.OscillatorConfig',
]

# No database: reports are the only persistence.
DATABASES = {}

USE_TZ = True


# Field scan parallelism cap (None -> sequential scan)
GUP_DOSC_THREADS = env('GUP_DOSC_THREADS', default=None)


# Logging. Reports go to stdout, so every handler writes to stderr.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'oscillator': {
            'handlers': ['console'],
            'level': env('GUP_DOSC_LOG_LEVEL').upper(),
            'propagate': False,
        },
    },
}
