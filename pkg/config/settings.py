import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment overrides from .env next to this file
BASE_DIR = Path(__file__).resolve().parent
load_dotenv(BASE_DIR / ".env")


def _flag(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in ("1", "true", "yes", "on")


class Settings:
    # ground field descriptor: "q" (rationals) or "gf:p"
    PROCELL_FIELD: str = os.getenv("PROCELL_FIELD", "q")

    # hard cap when enumerating a principal coideal <a>
    UPSET_CAP: int = int(os.getenv("UPSET_CAP", "1000"))
    # finite_coideals_below enumerates subsets, keep the bound small
    MAX_COIDEAL_BOUND: int = int(os.getenv("MAX_COIDEAL_BOUND", "16"))

    TL_MAX_N: int = int(os.getenv("TL_MAX_N", "6"))
    TOWER_MAX_N: int = int(os.getenv("TOWER_MAX_N", "5"))
    POLY_MAX_TRUNCATION: int = int(os.getenv("POLY_MAX_TRUNCATION", "64"))

    # associativity is checked on all basis triples up to this dimension
    ASSOC_MAX_DIM: int = int(os.getenv("ASSOC_MAX_DIM", "64"))

    # labels outside the window probed when checking a tail promise
    SMOOTH_HALO: int = int(os.getenv("SMOOTH_HALO", "8"))

    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "0"))
    DEFAULT_JOBS: int = int(os.getenv("DEFAULT_JOBS", "1"))

    PROCELL_VERBOSE: bool = _flag("PROCELL_VERBOSE")

    DATA_DIR: Path = BASE_DIR.parent / "data"


settings = Settings()
