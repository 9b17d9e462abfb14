"""
Manifest repository module: run manifests and config files.
"""
import json
import logging
import platform
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pydantic
import scipy
from pydantic import ValidationError

from mmad.core.config import VERSION
from mmad.core.errors import ConfigError
from mmad.repositories.artifact_repository import ArtifactRepository
from mmad.schemas.schemas import OutputRecord, ProblemConfig, RunManifest, load_config

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def package_versions() -> Dict[str, str]:
    return {
        "mmad": VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pydantic": pydantic.VERSION,
    }


def read_config_data(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Raw config mapping from a TOML file, a JSON config or a run manifest.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Error reading config {path}: {str(e)}")
        raise ConfigError(f"cannot read config file {path}: {e.strerror}") from e
    try:
        if path.suffix == ".toml":
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot parse {path}: {str(e)}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} does not hold a mapping")
    if "command" in data and "config" in data:
        return data["config"]
    return data


def load_config_file(path: Union[str, Path]) -> ProblemConfig:
    return load_config(read_config_data(path))


class ManifestRepository(ArtifactRepository):
    """
    Repository for run manifests.
    """

    def write_manifest(self, command: str, config: ProblemConfig, timings: Dict[str, float],
                       outputs: List[OutputRecord], name: str = MANIFEST_NAME) -> OutputRecord:
        manifest = RunManifest(
            command=command,
            config=config,
            versions=package_versions(),
            timings=timings,
            outputs=outputs,
        )
        record = self.write_text(name, manifest.model_dump_json(indent=2) + "\n")
        logger.info(f"Run manifest written to {record.path}")
        return record

    def load_manifest(self, path: Union[str, Path]) -> RunManifest:
        path = Path(path)
        try:
            return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"cannot read manifest {path}: {e.strerror}") from e
        except ValidationError as e:
            raise ConfigError(f"invalid manifest {path}: {e.error_count()} errors") from e
