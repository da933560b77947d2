import logging.config

# Set up logging
from app.config import LOGGING_CONFIG

__version__ = "0.1.0"

logging.config.dictConfig(LOGGING_CONFIG)
logger = logging.getLogger(__name__)
logger.info("Initializing pn-slicer workbench")
