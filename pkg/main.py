#!/usr/bin/env python3
"""
Cocycle Lab
Numerical experiments on random matrix cocycles, Lyapunov filtrations and stable subspaces
"""

import sys
import logging
from pathlib import Path

# Add project root to path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from config.settings import Config
from cli import main as cli_main

Config.ensure_directories()

# Configure logging
logging.basicConfig(
    level=Config.log_level(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler(Config.LOGS_DIR / Config.LOG_FILE_NAME),
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)


if __name__ == "__main__":
    sys.exit(cli_main())
