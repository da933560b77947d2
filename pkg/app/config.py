import os

from app.models.settings import settings

# Workbench configuration
# Use absolute paths for compatibility
BASE_DIR = os.path.abspath(os.path.dirname(os.path.dirname(__file__)))

# Get settings from the settings singleton
DATA_DIR = settings.get_data_dir()
OUTPUT_DIR = settings.get_output_dir()
ALLOWED_EXTENSIONS = {'pnml', 'xml'}

# Exploration budgets
ORACLE_DEPTH = settings.get_int('oracle_depth')
ORACLE_NODE_BUDGET = settings.get_int('oracle_node_budget')
BRUTE_FORCE_CEILING = settings.get_int('brute_force_ceiling')
STATE_CAP = settings.get_int('state_cap')
DEFAULT_K_BOUND = settings.get_int('default_k_bound')
MAX_CANDIDATES = settings.get_int('max_candidates')
MAX_EXPANSIONS = settings.get_int('max_expansions')
WITNESS_DEPTH = settings.get_int('witness_depth')
WITNESS_NODE_BUDGET = settings.get_int('witness_node_budget')

# Benchmark defaults
BENCH_RUNS_PER_NET = settings.get_int('bench_runs_per_net')
BENCH_MIN_PLACES = settings.get_int('bench_min_places')
BENCH_MAX_PLACES = settings.get_int('bench_max_places')
BENCH_SEED = settings.get_int('bench_seed')
BENCH_THREADS = settings.get_int('bench_threads')

# Bundled nets (desk corpus and small fixtures) are packaged with the app
BUNDLED_NETS_FOLDER = os.path.join(BASE_DIR, 'app', 'static', 'nets')

# Logging configuration
# Store logs in the data directory; the console only gets warnings so that
# reports and JSON on stdout stay machine-readable
LOGS_FOLDER = os.path.join(DATA_DIR, 'logs')
os.makedirs(LOGS_FOLDER, exist_ok=True)
CONSOLE_LOG_LEVEL = str(settings.get('console_log_level', 'WARNING')).upper()

_HANDLERS = ['console', 'file', 'error_file']

LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
        'detailed': {
            'format': '%(asctime)s [%(levelname)s] %(name)s (%(filename)s:%(lineno)d): %(message)s'
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'level': CONSOLE_LOG_LEVEL,
            'formatter': 'standard',
            'stream': 'ext://sys.stderr',
        },
        'file': {
            'class': 'logging.handlers.RotatingFileHandler',
            'level': 'INFO',
            'formatter': 'detailed',
            'filename': os.path.join(LOGS_FOLDER, 'pn-slicer.log'),
            'maxBytes': 10485760,  # 10MB
            'backupCount': 5,
            'encoding': 'utf8'
        },
        'error_file': {
            'class': 'logging.handlers.RotatingFileHandler',
            'level': 'ERROR',
            'formatter': 'detailed',
            'filename': os.path.join(LOGS_FOLDER, 'error.log'),
            'maxBytes': 10485760,  # 10MB
            'backupCount': 5,
            'encoding': 'utf8'
        },
    },
    'loggers': {
        '': {  # root logger
            'handlers': _HANDLERS,
            'level': 'INFO',
            'propagate': True
        },
        'app': {
            'handlers': _HANDLERS,
            'level': 'DEBUG',
            'propagate': False
        },
        **{
            name: {'handlers': _HANDLERS, 'level': 'DEBUG', 'propagate': False}
            for name in ('app.models', 'app.semantics', 'app.slicing', 'app.properties',
                         'app.oracles', 'app.formats', 'app.bench', 'app.cli')
        },
    }
}
