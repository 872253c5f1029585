from pathlib import Path
from dataclasses import dataclass

ROOT_DIR = Path(__file__).parent
DATA_DIR = ROOT_DIR / "data"
FIXTURE_DIR = DATA_DIR / "fixtures"
CATALOG_PATH = DATA_DIR / "decompositions.yaml"

DEFAULT_SEED = 20240229
EXP_DEPTH_CAP = 64
FREENESS_TRIALS_PER_ELEMENT = 64
LOW_CONFIDENCE_FLOOR = -4
MAX_ZECH_FIELD = 2 ** 16
ASSOCIATIVITY_CHECK_LIMIT = 64
COFACTOR_ORACLE_LIMIT = 4

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_BUDGET_EXCEEDED = 3


@dataclass
class SessionDefaults:
    """Default budgets for a computation session"""
    precision: int = 4
    ball_budget: int = 24
    extra_ball: int = 1
    confirmation_steps: int = 1
    seed: int = DEFAULT_SEED
    threads: int = 1
    report_dir: str = "reports"

    @classmethod
    def from_defaults(cls) -> "SessionDefaults":
        """Return an instance with constant default values"""
        return cls()
