import os
from pathlib import Path
from typing import Dict, Any
from dotenv import load_dotenv

# Only diagnostic verbosity is taken from the environment
load_dotenv()


class Config:
    """Numerical defaults and project paths for the cocycle lab"""

    # ==================== Project Paths ====================
    BASE_DIR = Path(__file__).parent.parent
    RESULTS_DIR = BASE_DIR / "results"
    LOGS_DIR = BASE_DIR / "logs"

    # ==================== Artifact ====================
    ARTIFACT_VERSION = "1.0.0"
    SCHEMA_VERSION = 1

    # ==================== Logging Configuration ====================
    DEBUG_MODE = os.getenv("DEBUG_MODE", "False") == "True"
    LOG_LEVEL = os.getenv("LOG_LEVEL", "DEBUG" if DEBUG_MODE else "INFO")
    LOG_FILE_NAME = "cocycle_lab.log"

    # ==================== Generators ====================
    MAX_DIMENSION = 64
    BETA_TOLERANCE = 1e-9
    DEFAULT_NORM = "2"

    # ==================== Long Products ====================
    RENORM_LOW = 1e-100
    RENORM_HIGH = 1e100
    REORTH_PERIOD = 1

    # ==================== Subspaces ====================
    ORTHONORMAL_TOL = 1e-10
    CONTAINMENT_TOL = 1e-8
    HAUSDORFF_RESOLUTION = 64
    MIN_HAUSDORFF_RESOLUTION = 32

    # ==================== Lyapunov Estimation ====================
    MIN_SPECTRUM_HORIZON = 100
    GAP_THRESHOLD = 0.05
    BURN_IN_FRACTION = 0.1
    EPSILON = 0.05
    INVARIANCE_TOL = 1e-6
    SAMPLE_VECTORS = 8
    SEARCH_DIRECTIONS = 64
    SEARCH_REFINEMENTS = 8
    CERTIFY_TOL = 1e-3
    PRECISION_BUDGET = 30.0

    # ==================== Subadditive Analysis ====================
    SIGN_MARGIN = 0.01
    RATE_TOLERANCE = 1e-9
    RESIDUAL_PAIRS = 50
    KINGMAN_TOLERANCE = 0.05
    LATTICE_EPSILON = 1e-9
    MEAN_ZERO_TOL = 1e-12

    # ==================== Word Construction ====================
    MAX_WORD_GENERATION = 5

    # ==================== Stability ====================
    MIN_STABILITY_TRIALS = 30
    MIN_STABILITY_HORIZON = 1000
    RATE_MARGIN = 0.05
    NORM_THRESHOLD = 1e-3
    CONFIDENCE_LEVEL = 0.95

    # ==================== Orchestration ====================
    DEFAULT_WORKERS = 1
    PASS_RATE = 0.99

    # ==================== Class Methods ====================

    @classmethod
    def validate_config(cls) -> Dict[str, Any]:
        """Validate configuration and return detailed status"""
        issues = []
        warnings = []

        if not cls.RENORM_LOW < 1.0 < cls.RENORM_HIGH:
            issues.append("Renormalization window must contain 1")

        if cls.MIN_HAUSDORFF_RESOLUTION > cls.HAUSDORFF_RESOLUTION:
            issues.append("HAUSDORFF_RESOLUTION below the minimum grid size")

        if not 0.0 < cls.CONFIDENCE_LEVEL < 1.0:
            issues.append("CONFIDENCE_LEVEL must lie in (0, 1)")

        if cls.GAP_THRESHOLD <= 0:
            issues.append("GAP_THRESHOLD must be positive")

        if cls.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            warnings.append(f"Unknown LOG_LEVEL {cls.LOG_LEVEL} - falling back to INFO")

        for directory in [cls.RESULTS_DIR, cls.LOGS_DIR]:
            if not directory.exists():
                warnings.append(f"Directory {directory} does not exist - will be created")

        return {
            'valid': len(issues) == 0,
            'issues': issues,
            'warnings': warnings,
            'version': cls.ARTIFACT_VERSION
        }

    @classmethod
    def ensure_directories(cls):
        """Create necessary directories if they don't exist"""
        for directory in [cls.RESULTS_DIR, cls.LOGS_DIR]:
            directory.mkdir(exist_ok=True, parents=True)

    @classmethod
    def log_level(cls) -> str:
        level = cls.LOG_LEVEL.upper()
        return level if level in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL") else "INFO"

    @classmethod
    def print_status(cls):
        """Print configuration status"""
        status = cls.validate_config()

        print("\n" + "=" * 60)
        print(" COCYCLE LAB CONFIGURATION STATUS")
        print("=" * 60)
        print(f"\nVersion: {cls.ARTIFACT_VERSION} (config schema v{cls.SCHEMA_VERSION})")
        print(f"Debug Mode: {cls.DEBUG_MODE}")
        print(f"Log Level: {cls.log_level()}")

        print("\n Numerics:")
        print(f"  Renormalization window: [{cls.RENORM_LOW:g}, {cls.RENORM_HIGH:g}]")
        print(f"  Gap threshold: {cls.GAP_THRESHOLD}")
        print(f"  Containment tolerance: {cls.CONTAINMENT_TOL:g}")
        print(f"  Epsilon: {cls.EPSILON}")

        print("\n Directories:")
        print(f"  Results: {cls.RESULTS_DIR}")
        print(f"  Logs: {cls.LOGS_DIR}")

        if status['issues']:
            print("\n ❌ CRITICAL ISSUES:")
            for issue in status['issues']:
                print(f"   - {issue}")

        if status['warnings']:
            print("\n ⚠️  WARNINGS:")
            for warning in status['warnings']:
                print(f"   - {warning}")

        if status['valid'] and not status['warnings']:
            print("\n ✓ Configuration is valid!")

        print("=" * 60 + "\n")
