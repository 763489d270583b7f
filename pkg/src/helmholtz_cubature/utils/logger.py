import logging
import os
from datetime import datetime
from logging.handlers import RotatingFileHandler

from dotenv import load_dotenv

load_dotenv()

# Create logs directory if it doesn't exist
LOG_DIR = os.getenv("HELMCUB_LOG_DIR", os.path.join(os.getcwd(), "logs"))
os.makedirs(LOG_DIR, exist_ok=True)

LOG_LEVEL = getattr(logging, os.getenv("HELMCUB_LOG_LEVEL", "INFO").upper(), logging.INFO)

# Create a new log file for each run
LOG_FILE = datetime.now().strftime("%Y_%m_%d_%H_%M_%S") + ".log"
LOG_FILE_PATH = os.path.join(LOG_DIR, LOG_FILE)

# Log message format
LOG_FORMAT = "[ %(asctime)s ] %(name)s:%(lineno)d - %(levelname)s - %(message)s"

# File handler with rotation (5 MB per file, keep 5 backups)
file_handler = RotatingFileHandler(
    LOG_FILE_PATH,
    maxBytes=5_000_000,
    backupCount=5
)
file_handler.setLevel(LOG_LEVEL)
file_handler.setFormatter(logging.Formatter(LOG_FORMAT))

# Console handler goes to stderr so CSV on stdout stays clean
console_handler = logging.StreamHandler()
console_handler.setLevel(LOG_LEVEL)
console_handler.setFormatter(logging.Formatter(LOG_FORMAT))

logging.basicConfig(
    level=LOG_LEVEL,
    handlers=[file_handler, console_handler]
)

# Export shared logger instance for entire project
logger = logging.getLogger("helmholtz_cubature")
