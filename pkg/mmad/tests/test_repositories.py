import importlib.util
from pathlib import Path

import numpy as np
import pytest

from mmad.benchmarks.catalog import get_case
from mmad.fem.assembly import solve_case
from mmad.fem.mesh import build_grid_mesh
from mmad.repositories.field_repository import FieldRepository
from mmad.schemas.schemas import BoundarySpec, CutSpec, Method, ProblemConfig, ProfileSpec, VelocitySpec

SCRIPT = Path(__file__).resolve().parents[2] / "scripts" / "reproduce_benchmarks.py"


@pytest.fixture(scope="function")
def plateau():
    boundaries = [BoundarySpec(kind="dirichlet", edge=e, profile=ProfileSpec(value=1.0))
                  for e in ("left", "right", "bottom", "top")]
    config = ProblemConfig(dimension=2, velocity=VelocitySpec(kind="angle"), boundaries=boundaries,
                           nx=10, method=Method.GALERKIN)
    return solve_case(build_grid_mesh(10, 10), config)


def test_cut_file_is_named_by_short_position(tmp_path, plateau):
    record = FieldRepository(tmp_path).emit_cut(plateau, CutSpec(kind="vertical", position=0.3))
    assert Path(record.path).name == "cut_vertical_0.3.csv"
    rows = Path(record.path).read_text().splitlines()
    assert rows[0] == "s,phi"
    assert len(rows) == 12


def test_table_rows(tmp_path):
    fields = FieldRepository(tmp_path)
    record = fields.emit_table("table.csv", ["n", "error", "note"], [[4, 0.1, None], [8, np.float64(0.25), "ok"]])
    assert Path(record.path).read_text() == "n,error,note\n4,0.10000000000000001,\n8,0.25,ok\n"
    assert record.bytes == len(Path(record.path).read_bytes())
    assert not list(tmp_path.glob(".*.tmp"))


def test_failed_transaction_removes_tables(tmp_path):
    fields = FieldRepository(tmp_path)
    with pytest.raises(RuntimeError):
        with fields.transaction():
            fields.emit_table("sweep.csv", ["n"], [[4]])
            raise RuntimeError("solve failed")
    assert not (tmp_path / "sweep.csv").exists()
    assert fields.records == []


def test_reproduce_script_writes_case_table(tmp_path):
    spec = importlib.util.spec_from_file_location("reproduce_benchmarks", SCRIPT)
    script = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(script)

    case = get_case("ex1")
    assert script.run_case_table(case, tmp_path, 1) == 2 * len(case.subcases)
    lines = (tmp_path / "ex1_comparison.csv").read_text().splitlines()
    assert lines[0] == ",".join(script.COLUMNS)
    # Labels hold a comma and are quoted
    assert lines[1].startswith(f'"{case.subcases[0].label}",galerkin,101,1,1')
    assert len(lines) == 1 + 2 * len(case.subcases)
