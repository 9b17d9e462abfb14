import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Application info
PROJECT_NAME = "MMAD Solver"
VERSION = "0.1.0"

# Application settings
DEBUG = os.getenv("MMAD_DEBUG", "False").lower() in ("true", "1", "t")

# Output settings
OUTPUT_DIR = os.getenv("MMAD_OUTPUT_DIR", "results")
LOG_DIR = os.getenv("MMAD_LOG_DIR", "logs")
LOG_LEVEL = "DEBUG" if DEBUG else os.getenv("MMAD_LOG_LEVEL", "INFO").upper()

# Solver settings
DEFAULT_TOLERANCE = float(os.getenv("MMAD_SOLVER_TOL", "1e-10"))
MAX_REFINEMENT_STEPS = int(os.getenv("MMAD_MAX_REFINEMENT_STEPS", "3"))

# Fine-grid references are solved on the mesh refined this many times
REFERENCE_REFINEMENT = int(os.getenv("MMAD_REFERENCE_REFINEMENT", "4"))
